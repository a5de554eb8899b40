#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "iglab/random.hpp"

namespace iglab {

/**
 * A Monte Carlo value with its standard error.
 *
 * samples == 0 marks a closed-form (exact) value; its stderr is 0.
 */
struct Estimate
{
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;

    static Estimate exact(double v) { return {v, 0.0, 0}; }

    bool is_exact() const { return samples == 0; }
    double relative_stderr() const;

    Estimate scaled(double factor) const { return {value * factor, std_error * std::abs(factor), samples}; }
};

/// Sum of independent estimates; variances add.
Estimate operator+(const Estimate& a, const Estimate& b);
/// Difference of independent estimates.
Estimate operator-(const Estimate& a, const Estimate& b);

/// a/b for independent a, b with first-order (delta method) error propagation.
Estimate ratio(const Estimate& a, const Estimate& b);
/// a^e with delta-method error propagation.
Estimate power(const Estimate& a, double exponent);

/// Binomial proportion hits/trials with stderr sqrt(p(1-p)/trials).
Estimate proportion(std::uint64_t hits, std::uint64_t trials);

/// Welford accumulator, mergeable in a fixed order (Chan et al.).
class Accumulator
{
public:
    void add(double x);
    void merge(const Accumulator& other);

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const;  // sample variance (n - 1)
    Estimate estimate() const;

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

using SampleFn = std::function<double(Engine&)>;

/**
 * Mean of `n` draws of `sample`, split over the stream's substreams.
 *
 * Substream s handles a contiguous block of draws with its own engine and
 * blocks are merged in substream order, so the result is bit-identical for
 * any number of worker threads. When `values` is non-null it receives the
 * individual draws in index order.
 */
Estimate mc_mean(const RandomStream& rng, std::size_t n, const SampleFn& sample,
                 std::vector<double>* values = nullptr);

/// Runs body(s) for s in [0, count) on up to `jobs` threads.
void parallel_for(int count, int jobs, const std::function<void(int)>& body);

/// Share of sum(values) contributed by draws above the 99th percentile.
double tail_share(std::vector<double> values, double quantile = 0.99);

}  // namespace iglab
