#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "iglab/check.hpp"
#include "iglab/densities.hpp"

namespace iglab {

/// |{f > t}| on an increasing grid of levels.
struct LevelProfile
{
    std::vector<double> thresholds;
    std::vector<Estimate> superlevel_volumes;
    bool exact = false;
};

struct RearrangementOptions
{
    int levels = 1000;
    double floor_ratio = 1e-6;       // lowest level as a fraction of sup
    std::size_t samples = 200000;    // Monte Carlo points when no superlevel oracle exists
};

/**
 * |{f > t}| at `thresholds`.
 *
 * Uses the density's superlevel oracle when it has one. Otherwise one
 * common set of uniform points in the support ball is reused for every
 * level, which keeps the estimates monotone in t.
 */
LevelProfile level_profile(const DensityModel& f, std::vector<double> thresholds, std::size_t samples,
                           const RandomStream& rng);

/// Geometric grid from sup·floor_ratio to sup.
std::vector<double> geometric_levels(double sup, int levels, double floor_ratio);

struct Rearrangement
{
    std::shared_ptr<const RadialGridDensity> density;
    LevelProfile profile;
};

/**
 * Symmetric decreasing rearrangement f*.
 *
 * Each superlevel set becomes the centered ball of equal volume; the
 * layer-cake integral between consecutive levels is done by Simpson's rule
 * on the level midpoints, so the shell values conserve mass. The output
 * is nonincreasing in |x| by construction.
 */
Rearrangement rearrangement(const DensityModel& f, const RandomStream& rng, const RearrangementOptions& options = {});

/**
 * One-dimensional bathtub property for a radial profile g on [0, support]:
 * given ∫ g(r) r^{n−1} dr = r_n^n/n, check ∫ φ g r^{n−1} >= ∫_0^{r_n} φ r^{n−1}
 * for increasing φ. `breaks` lists discontinuities of g (optional).
 */
CheckReport bathtub_check(const std::function<double(double)>& profile, double support, int n,
                          const std::function<double(double)>& phi, std::vector<double> breaks = {});

}  // namespace iglab
