#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iglab/estimate.hpp"
#include "iglab/geom.hpp"
#include "iglab/grassmann.hpp"

namespace iglab {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// The affine set {origin + directions·t : t ∈ ℝ^d}; directions has orthonormal columns.
struct AffineSlice
{
    Vector origin;
    Matrix directions;

    int dim() const { return static_cast<int>(directions.cols()); }
    int ambient_dim() const { return static_cast<int>(directions.rows()); }
    /// Point of the slice closest to the origin of ℝⁿ.
    Vector foot() const { return origin - directions * (directions.transpose() * origin); }
};

AffineSlice slice_of(const Subspace& e);
AffineSlice slice_of(const Flat& f);
/// The fiber E^⊥ + x.
AffineSlice fiber(const Subspace& e, const Vector& x);

/// x ↦ a·x + b.
struct AffineMap
{
    Matrix a;
    Vector b;

    static AffineMap identity(int n);
    static AffineMap linear(Matrix a);
    static AffineMap translation(Vector b);

    int dim() const { return static_cast<int>(a.rows()); }
    Vector apply(const Vector& x) const { return a * x + b; }
    AffineMap inverse() const;
    AffineMap then(const AffineMap& next) const;  // next ∘ this
};

/// ∫_S f^p and sup_S f over one slice S.
struct SliceIntegral
{
    double integral;
    double sup;
};

class DensityModel;
using DensityPtr = std::shared_ptr<const DensityModel>;

/**
 * A non-negative, bounded, integrable function on ℝⁿ.
 *
 * Families with closed-form slices override slice_exact(); everything
 * else falls back to Monte Carlo on the slice ball of radius
 * support_radius().
 */
class DensityModel : public std::enable_shared_from_this<DensityModel>
{
public:
    explicit DensityModel(int n);
    virtual ~DensityModel() = default;

    int dim() const { return n_; }

    virtual double eval(const Vector& x) const = 0;
    virtual double mass() const = 0;
    virtual double sup() const = 0;
    /// Smallest R with f = 0 outside R·B (an upper bound is fine); kInfinity if unbounded.
    virtual double support_radius() const = 0;
    /// Draw with law f/‖f‖₁.
    virtual Vector sample(Engine& eng) const = 0;

    /// ∫_S f^p and sup_S f, for p > 0; nullopt when no closed form exists.
    virtual std::optional<SliceIntegral> slice_exact(const AffineSlice& slice, double p) const;
    /// |{f > t}|; nullopt when no closed form exists.
    virtual std::optional<double> superlevel_volume(double t) const;
    /// The density t ↦ f(g⁻¹t).
    virtual DensityPtr transformed(const AffineMap& g) const;

    virtual std::string describe() const = 0;

    bool has_exact_slices() const;

private:
    int n_;
};

class EllipsoidIndicator final : public DensityModel
{
public:
    /// a·𝟙{(x−c)ᵀM(x−c) ≤ 1}.
    EllipsoidIndicator(double amplitude, Vector center, Matrix shape);
    static DensityPtr ball(int n, double radius = 1.0, double amplitude = 1.0);

    double eval(const Vector& x) const override;
    double mass() const override { return mass_; }
    double sup() const override { return amplitude_; }
    double support_radius() const override { return radius_; }
    Vector sample(Engine& eng) const override;
    std::optional<SliceIntegral> slice_exact(const AffineSlice& slice, double p) const override;
    std::optional<double> superlevel_volume(double t) const override;
    DensityPtr transformed(const AffineMap& g) const override;
    std::string describe() const override;

    const Matrix& shape() const { return shape_; }
    const Vector& center() const { return center_; }

private:
    double amplitude_;
    Vector center_;
    Matrix shape_;
    Matrix sample_map_;  // L^{-T} with M = LLᵀ
    double mass_;
    double radius_;
};

class GaussianDensity final : public DensityModel
{
public:
    /// amplitude·N(mean, cov) restricted to Mahalanobis radius ≤ truncation.
    GaussianDensity(Vector mean, Matrix cov, double amplitude = 1.0, double truncation = kInfinity);
    static DensityPtr standard(int n, double truncation = kInfinity);

    double eval(const Vector& x) const override;
    double mass() const override { return mass_; }
    double sup() const override { return peak_; }
    double support_radius() const override { return radius_; }
    Vector sample(Engine& eng) const override;
    std::optional<SliceIntegral> slice_exact(const AffineSlice& slice, double p) const override;
    std::optional<double> superlevel_volume(double t) const override;
    DensityPtr transformed(const AffineMap& g) const override;
    std::string describe() const override;

    const Vector& mean() const { return mean_; }
    const Matrix& covariance() const { return cov_; }
    double truncation() const { return truncation_; }

private:
    Vector mean_;
    Matrix cov_;
    Matrix precision_;
    Matrix chol_;  // cov = chol·cholᵀ
    double amplitude_;
    double truncation_;
    double peak_;
    double mass_;
    double radius_;
};

/// Piecewise-constant function on [lo, hi) with equal-width bins.
struct StepFactor
{
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> heights;

    int bins() const { return static_cast<int>(heights.size()); }
    double width() const { return (hi - lo) / bins(); }
    double eval(double x) const;
    double mass() const;
    double sup() const;
};

class ProductDensity final : public DensityModel
{
public:
    explicit ProductDensity(std::vector<StepFactor> factors);
    /// Product of uniform densities on [lo_i, hi_i].
    static DensityPtr boxes(const std::vector<std::pair<double, double>>& sides);

    double eval(const Vector& x) const override;
    double mass() const override { return mass_; }
    double sup() const override { return sup_; }
    double support_radius() const override { return radius_; }
    Vector sample(Engine& eng) const override;
    std::optional<SliceIntegral> slice_exact(const AffineSlice& slice, double p) const override;
    std::optional<double> superlevel_volume(double t) const override;
    std::string describe() const override;

    const std::vector<StepFactor>& factors() const { return factors_; }

private:
    struct Cell
    {
        Vector lo;
        Vector hi;
        double height;
    };

    std::vector<StepFactor> factors_;
    std::vector<Cell> cells_;  // nonzero cells only
    std::vector<std::vector<double>> factor_cdf_;
    double mass_;
    double sup_;
    double radius_;
};

/// Radial step function: value[i] on edges[i] <= |x| < edges[i+1].
class RadialGridDensity final : public DensityModel
{
public:
    RadialGridDensity(int n, std::vector<double> edges, std::vector<double> values);
    /// m equal-width shells on [0, R].
    static std::shared_ptr<const RadialGridDensity> uniform_bins(int n, double radius, std::vector<double> values);

    double eval(const Vector& x) const override;
    double eval_radius(double r) const;
    double mass() const override { return mass_; }
    double sup() const override { return sup_; }
    double support_radius() const override { return edges_.back(); }
    Vector sample(Engine& eng) const override;
    std::optional<SliceIntegral> slice_exact(const AffineSlice& slice, double p) const override;
    std::optional<double> superlevel_volume(double t) const override;
    std::string describe() const override;

    const std::vector<double>& edges() const { return edges_; }
    const std::vector<double>& values() const { return values_; }
    bool nonincreasing() const;
    /// ∫ f^p over ℝⁿ.
    double lp_integral(double p) const;

private:
    std::vector<double> edges_;
    std::vector<double> values_;
    std::vector<double> shell_cdf_;
    double mass_;
    double sup_;
};

/// t ↦ inner(g⁻¹t) for families without a closed-form image.
class AffineImageDensity final : public DensityModel
{
public:
    AffineImageDensity(DensityPtr inner, AffineMap g);

    double eval(const Vector& x) const override;
    double mass() const override { return inner_->mass(); }
    double sup() const override { return inner_->sup(); }
    double support_radius() const override { return radius_; }
    Vector sample(Engine& eng) const override;
    std::optional<SliceIntegral> slice_exact(const AffineSlice& slice, double p) const override;
    std::optional<double> superlevel_volume(double t) const override;
    DensityPtr transformed(const AffineMap& g) const override;
    std::string describe() const override;

private:
    DensityPtr inner_;
    AffineMap g_;
    AffineMap inv_;
    double radius_;
};

/// A black-box density; slices and superlevel sets are Monte Carlo only.
class CallableDensity final : public DensityModel
{
public:
    CallableDensity(int n, std::function<double(const Vector&)> f, double mass, double sup, double radius,
                    std::string label = "callable", int rejection_budget = 1000000);

    double eval(const Vector& x) const override { return f_(x); }
    double mass() const override { return mass_; }
    double sup() const override { return sup_; }
    double support_radius() const override { return radius_; }
    Vector sample(Engine& eng) const override;
    std::string describe() const override { return label_; }

private:
    std::function<double(const Vector&)> f_;
    double mass_;
    double sup_;
    double radius_;
    std::string label_;
    int budget_;
};

/// Pushes f forward by a volume-preserving affine map; rejects |det A| ≠ 1.
DensityPtr affine_image(const DensityPtr& f, const AffineMap& g);

enum class SliceMethod
{
    automatic,  // exact when available, else Monte Carlo
    exact,
    monte_carlo,
};

struct SliceOptions
{
    SliceMethod method = SliceMethod::automatic;
    std::size_t samples = 4096;
    Engine* engine = nullptr;  // required for Monte Carlo
};

struct RestrictionStats
{
    Estimate lp;    // ∫_S f^p (L1 when p = 1)
    Estimate linf;  // sup_S f
    bool linf_exact = true;  // false: Monte Carlo maximum, biased low
};

/// ∫_S f^p and sup_S f over a slice (p > 0).
RestrictionStats restriction_stats(const DensityModel& f, const AffineSlice& slice, double p = 1.0,
                                   const SliceOptions& options = {});
RestrictionStats restriction_stats(const DensityModel& f, const Subspace& e, const SliceOptions& options = {});
RestrictionStats restriction_stats(const DensityModel& f, const Flat& flat, const SliceOptions& options = {});

/// ∫_{E^⊥+x} f, the marginal density of f on E at x ∈ E.
Estimate marginal_density(const DensityModel& f, const Subspace& e, const Vector& x,
                          const SliceOptions& options = {});

/// Parses the grid text format ("radial n= R= bins=" or "product n=" plus one line per component).
DensityPtr parse_grid_density(const std::string& text);
std::string format_radial_grid(const RadialGridDensity& f, int bins);

namespace detail {

/// d-volume of {t ∈ ℝ^d : A t <= b}, assumed bounded (Lasserre's recursion).
double polytope_volume(const Matrix& a, const Vector& b);

}  // namespace detail

}  // namespace iglab
