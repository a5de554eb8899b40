#include "iglab/estimate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace iglab {

double Estimate::relative_stderr() const
{
    if (std_error == 0.0)
        return 0.0;
    if (value == 0.0)
        return std::numeric_limits<double>::infinity();
    return std_error / std::abs(value);
}

Estimate operator+(const Estimate& a, const Estimate& b)
{
    return {a.value + b.value, std::hypot(a.std_error, b.std_error), a.samples + b.samples};
}

Estimate operator-(const Estimate& a, const Estimate& b)
{
    return {a.value - b.value, std::hypot(a.std_error, b.std_error), a.samples + b.samples};
}

Estimate ratio(const Estimate& a, const Estimate& b)
{
    const double r = a.value / b.value;
    const double ra = a.value != 0.0 ? a.std_error / a.value : 0.0;
    const double rb = b.std_error / b.value;
    double se = std::abs(r) * std::hypot(ra, rb);
    if (a.value == 0.0)
        se = a.std_error / std::abs(b.value);
    return {r, se, std::max(a.samples, b.samples)};
}

Estimate power(const Estimate& a, double exponent)
{
    if (exponent == 0.0)
        return Estimate::exact(1.0);
    const double v = std::pow(a.value, exponent);
    const double se = std::abs(exponent) * std::pow(a.value, exponent - 1.0) * a.std_error;
    return {v, a.std_error == 0.0 ? 0.0 : se, a.samples};
}

Estimate proportion(std::uint64_t hits, std::uint64_t trials)
{
    if (trials == 0)
        throw std::invalid_argument("proportion: zero trials");
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

void Accumulator::add(double x)
{
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void Accumulator::merge(const Accumulator& other)
{
    if (other.count_ == 0)
        return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    count_ += other.count_;
}

double Accumulator::variance() const
{
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

Estimate Accumulator::estimate() const
{
    if (count_ == 0)
        throw std::logic_error("Accumulator: no samples");
    return {mean_, std::sqrt(variance() / static_cast<double>(count_)), count_};
}

void parallel_for(int count, int jobs, const std::function<void(int)>& body)
{
    const int workers = std::min(std::max(1, jobs), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int i = next++; i < count; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        if (!failed.exchange(true))
                            failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

Estimate mc_mean(const RandomStream& rng, std::size_t n, const SampleFn& sample, std::vector<double>* values)
{
    if (n == 0)
        throw std::invalid_argument("mc_mean: zero samples");
    const int streams = static_cast<int>(std::min<std::size_t>(rng.substreams(), n));
    std::vector<Accumulator> parts(streams);
    if (values)
        values->assign(n, 0.0);
    const std::size_t base = n / streams;
    const std::size_t extra = n % streams;
    parallel_for(streams, rng.jobs(), [&](int s) {
        const std::size_t us = static_cast<std::size_t>(s);
        const std::size_t begin = us * base + std::min(us, extra);
        const std::size_t end = begin + base + (us < extra ? 1 : 0);
        Engine eng = rng.substream_engine(s);
        Accumulator acc;
        for (std::size_t i = begin; i < end; ++i) {
            const double x = sample(eng);
            acc.add(x);
            if (values)
                (*values)[i] = x;
        }
        parts[s] = acc;
    });
    Accumulator total;
    for (const auto& p : parts)
        total.merge(p);
    return total.estimate();
}

double tail_share(std::vector<double> values, double quantile)
{
    if (values.empty())
        return 0.0;
    for (auto& v : values)
        v = std::abs(v);
    std::sort(values.begin(), values.end());
    const double total = std::accumulate(values.begin(), values.end(), 0.0);
    if (total <= 0.0)
        return 0.0;
    const auto cut = static_cast<std::size_t>(std::floor(quantile * static_cast<double>(values.size())));
    const double top = std::accumulate(values.begin() + static_cast<std::ptrdiff_t>(cut), values.end(), 0.0);
    return top / total;
}

}  // namespace iglab
