#pragma once

#include <vector>

#include "iglab/densities.hpp"

namespace iglab {

/// Powers p_i and weights α_i for the averages ∫ ∏ ‖f_i|_x‖_{p_i}^{α_i}.
struct ExponentSpec
{
    std::vector<double> p;      // kInfinity allowed
    std::vector<double> alpha;

    std::size_t size() const { return p.size(); }
    /// Σ α_i/p_i (∞ slots contribute 0).
    double constraint_sum() const;
    /// Throws unless sizes match, every p_i > 0 and Σ α_i/p_i = target within 1e-10.
    void require_sum(double target) const;
};

/// An estimate plus the share of its sum carried by the top 1% of draws.
struct TailEstimate
{
    Estimate estimate;
    double tail_share = 0.0;
};

/**
 * ∏‖f_i‖₁ · E|simplex|^p with x_i ~ f_i/‖f_i‖₁, where the simplex is
 * conv{0,x_1..x_m} (with_origin) or conv{x_1..x_m}. Any real p above the
 * integrability threshold; callers pick the sign conventions.
 */
TailEstimate simplex_moment(const std::vector<DensityPtr>& fs, double p, bool with_origin, std::size_t samples,
                            const RandomStream& rng);

/**
 * Δ⁰_p(f_1..f_q) = ∫ |conv{0,x_1..x_q}|^p ∏ f_i(x_i) dx.
 *
 * Requires p > −(n−q+1). The tail share matters for negative p, where
 * the variance may be infinite.
 */
TailEstimate delta0_p(const std::vector<DensityPtr>& fs, double p, std::size_t samples, const RandomStream& rng);

/// Δ_p(f_1..f_{k+1}) = ∫ |conv{x_1..x_{k+1}}|^p ∏ f_i(x_i) dx, p >= 1.
TailEstimate delta_p(const std::vector<DensityPtr>& fs, double p, std::size_t samples, const RandomStream& rng);
/// Δ_p(f,..,f) with k+1 copies.
TailEstimate delta_p(const DensityPtr& f, int k, double p, std::size_t samples, const RandomStream& rng);

/// The two simplex cases of 𝓕_{C,p}.
enum class SimplexCase
{
    cone,     // C = conv{0, e_1..e_k}: uses k functions
    simplex,  // C = conv{e_1..e_{k+1}}: uses k+1 functions
};

/// 𝓕_{C,p} = (∫|[x_1..x_m]C|^p ∏ f_i/‖f_i‖₁)^{1/p}, for p >= 1.
Estimate scriptF(const std::vector<DensityPtr>& fs, SimplexCase c, double p, std::size_t samples,
                 const RandomStream& rng);

/// Δ_{n−k}(𝟙_{B^k},..,𝟙_{B^k}) (k+1 copies in ℝ^k) from the Kingman/Miles closed form.
double kingman_miles_delta(int n, int k);

struct AverageOptions
{
    std::size_t samples = 20000;     // subspaces or flats
    SliceMethod method = SliceMethod::automatic;
    std::size_t slice_samples = 2048;  // per slice when Monte Carlo is needed
    // flats: E + x with x ~ f_1, weighted by ‖f_1‖₁/∫_F f_1 (needs exact slices of f_1); else windowed
    bool through_points = true;
};

/**
 * I = ∫_{G(n,k)} ∏ ‖f_i|_E‖_{p_i}^{α_i} dE.
 *
 * A slot whose restriction vanishes zeroes the integrand, for every α_i
 * (so α = 0 counts subspaces meeting the support).
 */
Estimate grassmann_average_I(const std::vector<DensityPtr>& fs, const ExponentSpec& spec, int k,
                             const RandomStream& rng, const AverageOptions& options = {});

/// Ĩ = ∫_{M(n,k)} ∏ ‖f_i|_F‖_{p_i}^{α_i} dF over flats within `window` of the origin.
Estimate affine_average_I(const std::vector<DensityPtr>& fs, const ExponentSpec& spec, int k, double window,
                          const RandomStream& rng, const AverageOptions& options = {});

/// T_{n,k} f(F) = ∫_F f.
Estimate kplane_transform(const DensityModel& f, const Flat& flat, const SliceOptions& options = {});

/// P(|P_E X − z| <= ε√k) for X ~ f/‖f‖₁.
Estimate small_ball_probability(const DensityModel& f, const Subspace& e, const Vector& z, double eps,
                                std::size_t samples, const RandomStream& rng);

/// ‖restriction‖_p for one slot (p may be kInfinity); Monte Carlo needs options.engine.
Estimate restriction_norm(const DensityModel& f, const AffineSlice& slice, double p, const SliceOptions& options);

}  // namespace iglab
