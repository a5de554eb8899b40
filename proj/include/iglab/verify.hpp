#pragma once

#include <vector>

#include "iglab/check.hpp"
#include "iglab/functionals.hpp"
#include "iglab/rearrange.hpp"

namespace iglab {

/// Windowed flat sampling should give ν({F : F ∩ B ≠ ∅}) = ω_{n−k}; at window 1 every draw counts.
CheckReport check_nu_normalization(int n, int k, std::size_t samples, const RandomStream& rng, double window = 1.0);

struct BpParams
{
    int k = 1;
    double p = kInfinity;  // exponent on the simplex volume in G; default n−k when left infinite
    std::size_t direct_samples = 200000;
    std::size_t outer_samples = 100000;  // subspaces or flats
    int inner_samples = 4;               // point tuples per subspace or flat
    double window = kInfinity;           // flats only; default: largest support radius
};

/**
 * Linear BP identity with G = ∏f_i(x_i)·|conv{0,x}|^p.
 *
 * Left side: ∫ G by direct sampling. Right side: the printed constant times
 * ∫_G ∫_{E^q} G·|conv{0,x}|^{n−k}, with uniform points on the slice ball.
 * Runs two independent seeds; passes when the fitted constants agree.
 */
CheckReport check_bp_subspace(const std::vector<DensityPtr>& fs, const BpParams& params, const RandomStream& rng);

/// Affine BP identity with q+1 = fs.size() points and windowed flats.
CheckReport check_bp_flat(const std::vector<DensityPtr>& fs, const BpParams& params, const RandomStream& rng);

/// Before/after averages under g. Σα_i/p_i is recorded, not enforced, so wrong-sum controls can run.
CheckReport check_linear_invariance(const std::vector<DensityPtr>& fs, const ExponentSpec& spec, int k,
                                    const Matrix& g, std::size_t samples, const RandomStream& rng);

/// Same protocol on flats. `window` must cover every support before and after g (0 picks it).
CheckReport check_affine_invariance(const std::vector<DensityPtr>& fs, const ExponentSpec& spec, int k,
                                    const AffineMap& g, double window, std::size_t samples, const RandomStream& rng);

struct MonotonicityParams
{
    double p = 1.0;
    SimplexCase simplex = SimplexCase::cone;
    std::size_t samples = 100000;
    RearrangementOptions rearrangement;
};

/// 𝓕(f) >= 𝓕(f*) and, for ‖f_i‖_∞ <= 1 = ‖f_i‖₁ and p >= 1, 𝓕(f*) >= 𝓕(𝟙_{D_n}).
CheckReport check_rearrangement_monotonicity(const std::vector<DensityPtr>& fs, const MonotonicityParams& params,
                                             const RandomStream& rng);

/**
 * Compares f* against f: mass and sup within 1%, and superlevel volumes of f
 * (closed form, else independent Monte Carlo) within 3 stderr of the
 * bracket f* gives between neighbouring grid levels.
 */
CheckReport check_equimeasurability(const DensityModel& f, const Rearrangement& r, std::size_t samples,
                                    const RandomStream& rng);

struct FunctionalParams
{
    int k = 1;
    double p = 0.0;               // Grinberg only
    std::size_t samples = 20000;  // subspaces or flats
    double window = kInfinity;    // Schneider only; default: support radius
    bool equality = false;        // assert the two-sided band instead of LHS <= RHS
};

/// ∫_G ∏ ‖f_i|_E‖₁^{1+p/k}/‖f_i|_E‖_∞^{p/k} against its closed-form bound (exact slices needed).
CheckReport check_grinberg_functional(const std::vector<DensityPtr>& fs, const FunctionalParams& params,
                                      const RandomStream& rng);
double grinberg_rhs(const std::vector<DensityPtr>& fs, int k, double p);

/// ∫_M (∫_F f)^{n+1}/‖f|_F‖_∞^{n−k} against its closed-form bound.
CheckReport check_schneider_functional(const DensityPtr& f, const FunctionalParams& params, const RandomStream& rng);
double schneider_constant(int n, int k);
/// ω_k^n/ω_n^k, the Grassmannian analogue.
double busemann_constant(int n, int k);

struct MarginalParams
{
    int k = 1;
    double s = 2.0;
    double t = 2.0;
    std::size_t subspaces = 2000;
    std::size_t points = 256;  // x ~ π_E(μ) per subspace
    int centers = 4;           // small-ball centers besides the origin
    std::vector<double> eps{0.01, 0.03, 0.1, 0.3, 1.0};  // in units of ‖f‖_∞^{-1/n}
    std::vector<Subspace> probes;  // fixed subspaces reported separately
    double ceiling = 10.0;
};

/**
 * Markov sets for the marginal bound: 𝒜_s is the intersection of the
 * fiber-average set and the origin set, thresholds from the theoretical
 * constants. Fits c₁, c₂ over 𝒜_s and c₃ (origin, exponent k) over the
 * origin set. f must have mass 1 and exact slices.
 */
CheckReport marginal_bound_experiment(const DensityPtr& f, const MarginalParams& params, const RandomStream& rng);

/// Covariance diag(σ²×k, 1×(n−k)) with σ = (2π)^{−n/(2k)}.
Matrix sharpness_covariance(int n, int k);
/// ‖f_{π_E(μ)}‖_∞ for μ = N(0, D).
double gaussian_marginal_sup(const Matrix& d, const Subspace& e);

CheckReport gaussian_sharpness_experiment(int n, int k, double s, std::size_t samples, const RandomStream& rng);

/// μ_{n,k}(d(E,F) <= ε) against (floor·ε)^{k(n−k)}; reports the fitted constant.
CheckReport szarek_cap(int n, int k, double eps, std::size_t samples, const RandomStream& rng, double floor = 0.1);

struct PerturbationParams
{
    int k = 1;
    double eta = 0.5;
    std::vector<double> eps{0.01, 0.03, 0.1, 0.3};  // units of ‖f‖_∞^{-1/n}
    std::size_t draws = 100;
    std::size_t samples = 4000;  // points of μ shared by all draws
    int centers = 4;
    double ceiling = 10.0;
};

/// Searches d(E, E₀) <= η for E₀ with small-ball constant <= ceiling.
CheckReport perturbation_experiment(const DensityPtr& f, const Subspace& e, const PerturbationParams& params,
                                    const RandomStream& rng);

}  // namespace iglab
