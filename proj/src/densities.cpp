#include "iglab/densities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace iglab {

namespace {

double chi2_cdf(int d, double x)
{
    if (x <= 0.0)
        return 0.0;
    if (!std::isfinite(x))
        return 1.0;
    return boost::math::gamma_p(0.5 * d, 0.5 * x);
}

void require_dim(const Vector& x, int n, const char* what)
{
    if (x.size() != n)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double spectral_norm(const Matrix& a)
{
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

// Quadratic q(t) = (v + Dt)ᵀ P (v + Dt) restricted to a slice: returns its minimum and det(DᵀPD).
struct SliceQuadratic
{
    double minimum;
    double det;
};

SliceQuadratic slice_quadratic(const Matrix& p, const Vector& v, const Matrix& d)
{
    const Matrix s = d.transpose() * p * d;
    const Vector b = d.transpose() * (p * v);
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("slice quadratic form is not positive definite");
    const double minimum = std::max(0.0, v.dot(p * v) - b.dot(llt.solve(b)));
    const double det = std::pow(llt.matrixL().toDenseMatrix().diagonal().prod(), 2);
    return {minimum, det};
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

AffineSlice slice_of(const Subspace& e)
{
    return {Vector::Zero(e.ambient_dim()), e.basis()};
}

AffineSlice slice_of(const Flat& f)
{
    return {f.offset(), f.subspace().basis()};
}

AffineSlice fiber(const Subspace& e, const Vector& x)
{
    if (e.complement().cols() == 0)
        throw std::invalid_argument("fiber: subspace has trivial complement");
    return {x, e.complement()};
}

AffineMap AffineMap::identity(int n)
{
    return {Matrix::Identity(n, n), Vector::Zero(n)};
}

AffineMap AffineMap::linear(Matrix a)
{
    const auto n = a.rows();
    return {std::move(a), Vector::Zero(n)};
}

AffineMap AffineMap::translation(Vector b)
{
    const auto n = b.size();
    return {Matrix::Identity(n, n), std::move(b)};
}

AffineMap AffineMap::inverse() const
{
    const Matrix inv = a.inverse();
    return {inv, -inv * b};
}

AffineMap AffineMap::then(const AffineMap& next) const
{
    return {next.a * a, next.a * b + next.b};
}

DensityModel::DensityModel(int n) : n_(n)
{
    if (n < 1)
        throw std::invalid_argument("DensityModel: dimension must be positive");
}

std::optional<SliceIntegral> DensityModel::slice_exact(const AffineSlice&, double) const
{
    return std::nullopt;
}

std::optional<double> DensityModel::superlevel_volume(double) const
{
    return std::nullopt;
}

DensityPtr DensityModel::transformed(const AffineMap& g) const
{
    return std::make_shared<AffineImageDensity>(shared_from_this(), g);
}

bool DensityModel::has_exact_slices() const
{
    AffineSlice probe{Vector::Zero(n_), Matrix::Identity(n_, 1)};
    return slice_exact(probe, 1.0).has_value();
}

// ---------------------------------------------------------------- ellipsoid

EllipsoidIndicator::EllipsoidIndicator(double amplitude, Vector center, Matrix shape)
    : DensityModel(static_cast<int>(center.size())), amplitude_(amplitude), center_(std::move(center)),
      shape_(std::move(shape))
{
    if (!(amplitude_ > 0.0) || !std::isfinite(amplitude_))
        throw std::invalid_argument("EllipsoidIndicator: amplitude must be positive and finite");
    if (shape_.rows() != dim() || shape_.cols() != dim())
        throw std::invalid_argument("EllipsoidIndicator: shape must be n×n");
    shape_ = 0.5 * (shape_ + shape_.transpose());
    Eigen::LLT<Matrix> llt(shape_);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("EllipsoidIndicator: shape must be positive definite");
    const Matrix l = llt.matrixL();
    sample_map_ = l.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(dim(), dim()));
    const double det = std::pow(l.diagonal().prod(), 2);
    mass_ = amplitude_ * unit_ball_volume(dim()) / std::sqrt(det);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(shape_, Eigen::EigenvaluesOnly);
    radius_ = center_.norm() + 1.0 / std::sqrt(eig.eigenvalues().minCoeff());
}

DensityPtr EllipsoidIndicator::ball(int n, double radius, double amplitude)
{
    if (!(radius > 0.0))
        throw std::invalid_argument("ball: radius must be positive");
    return std::make_shared<EllipsoidIndicator>(amplitude, Vector::Zero(n),
                                                Matrix::Identity(n, n) / (radius * radius));
}

double EllipsoidIndicator::eval(const Vector& x) const
{
    const Vector v = x - center_;
    return v.dot(shape_ * v) <= 1.0 ? amplitude_ : 0.0;
}

Vector EllipsoidIndicator::sample(Engine& eng) const
{
    return center_ + sample_map_ * uniform_in_ball(dim(), eng);
}

std::optional<SliceIntegral> EllipsoidIndicator::slice_exact(const AffineSlice& slice, double p) const
{
    require_dim(slice.origin, dim(), "EllipsoidIndicator::slice_exact");
    const int d = slice.dim();
    const auto q = slice_quadratic(shape_, slice.origin - center_, slice.directions);
    if (q.minimum >= 1.0)
        return SliceIntegral{0.0, 0.0};
    const double volume = unit_ball_volume(d) * std::pow(1.0 - q.minimum, 0.5 * d) / std::sqrt(q.det);
    return SliceIntegral{std::pow(amplitude_, p) * volume, amplitude_};
}

std::optional<double> EllipsoidIndicator::superlevel_volume(double t) const
{
    return t < amplitude_ ? mass_ / amplitude_ : 0.0;
}

DensityPtr EllipsoidIndicator::transformed(const AffineMap& g) const
{
    const Matrix inv = g.a.inverse();
    return std::make_shared<EllipsoidIndicator>(amplitude_, g.apply(center_), inv.transpose() * shape_ * inv);
}

std::string EllipsoidIndicator::describe() const
{
    return "ellipsoid(n=" + std::to_string(dim()) + ", a=" + fmt(amplitude_) + ", |c|=" + fmt(center_.norm()) +
           ")";
}

// ---------------------------------------------------------------- gaussian

GaussianDensity::GaussianDensity(Vector mean, Matrix cov, double amplitude, double truncation)
    : DensityModel(static_cast<int>(mean.size())), mean_(std::move(mean)), cov_(std::move(cov)),
      amplitude_(amplitude), truncation_(truncation)
{
    const int n = dim();
    if (!(amplitude_ > 0.0) || !std::isfinite(amplitude_))
        throw std::invalid_argument("GaussianDensity: amplitude must be positive and finite");
    if (!(truncation_ > 0.0))
        throw std::invalid_argument("GaussianDensity: truncation radius must be positive");
    if (cov_.rows() != n || cov_.cols() != n)
        throw std::invalid_argument("GaussianDensity: covariance must be n×n");
    cov_ = 0.5 * (cov_ + cov_.transpose());
    Eigen::LLT<Matrix> llt(cov_);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("GaussianDensity: covariance must be positive definite");
    chol_ = llt.matrixL();
    precision_ = llt.solve(Matrix::Identity(n, n));
    const double sqrt_det = chol_.diagonal().prod();
    if (!(sqrt_det > 1e-300))
        throw std::invalid_argument("GaussianDensity: degenerate covariance");
    peak_ = amplitude_ * std::pow(2.0 * std::numbers::pi, -0.5 * n) / sqrt_det;
    mass_ = amplitude_ * chi2_cdf(n, truncation_ * truncation_);
    if (std::isfinite(truncation_)) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(cov_, Eigen::EigenvaluesOnly);
        radius_ = mean_.norm() + truncation_ * std::sqrt(eig.eigenvalues().maxCoeff());
    } else {
        radius_ = kInfinity;
    }
}

DensityPtr GaussianDensity::standard(int n, double truncation)
{
    return std::make_shared<GaussianDensity>(Vector::Zero(n), Matrix::Identity(n, n), 1.0, truncation);
}

double GaussianDensity::eval(const Vector& x) const
{
    const Vector v = x - mean_;
    const double q = v.dot(precision_ * v);
    if (q > truncation_ * truncation_)
        return 0.0;
    return peak_ * std::exp(-0.5 * q);
}

Vector GaussianDensity::sample(Engine& eng) const
{
    const int n = dim();
    if (!std::isfinite(truncation_)) {
        Vector z(n);
        for (int i = 0; i < n; ++i)
            z(i) = standard_normal(eng);
        return mean_ + chol_ * z;
    }
    // Radius from the truncated χ²_n law, direction uniform.
    const double cap = chi2_cdf(n, truncation_ * truncation_);
    double u = 0.0;
    do {
        u = uniform01(eng);
    } while (u == 0.0);
    const double r2 = 2.0 * boost::math::gamma_p_inv(0.5 * n, u * cap);
    return mean_ + chol_ * (std::sqrt(r2) * uniform_on_sphere(n, eng));
}

std::optional<SliceIntegral> GaussianDensity::slice_exact(const AffineSlice& slice, double p) const
{
    require_dim(slice.origin, dim(), "GaussianDensity::slice_exact");
    const int d = slice.dim();
    const auto q = slice_quadratic(precision_, slice.origin - mean_, slice.directions);
    const double rho2 = truncation_ * truncation_;
    if (q.minimum > rho2)
        return SliceIntegral{0.0, 0.0};
    const double sup = peak_ * std::exp(-0.5 * q.minimum);
    const double inner = chi2_cdf(d, p * (rho2 - q.minimum));
    const double integral = std::pow(sup, p) * std::pow(2.0 * std::numbers::pi / p, 0.5 * d) / std::sqrt(q.det) * inner;
    return SliceIntegral{integral, sup};
}

std::optional<double> GaussianDensity::superlevel_volume(double t) const
{
    if (t >= peak_)
        return 0.0;
    const double rho2 = truncation_ * truncation_;
    double r2 = t > 0.0 ? std::min(2.0 * std::log(peak_ / t), rho2) : rho2;
    if (!std::isfinite(r2))
        return kInfinity;
    const int n = dim();
    return unit_ball_volume(n) * std::pow(r2, 0.5 * n) * chol_.diagonal().prod();
}

DensityPtr GaussianDensity::transformed(const AffineMap& g) const
{
    return std::make_shared<GaussianDensity>(g.apply(mean_), g.a * cov_ * g.a.transpose(), amplitude_, truncation_);
}

std::string GaussianDensity::describe() const
{
    std::string s = "gaussian(n=" + std::to_string(dim()) + ", |m|=" + fmt(mean_.norm());
    if (std::isfinite(truncation_))
        s += ", trunc=" + fmt(truncation_);
    return s + ")";
}

// ---------------------------------------------------------------- product

double StepFactor::eval(double x) const
{
    if (x < lo || x >= hi)
        return 0.0;
    const int i = std::min(bins() - 1, static_cast<int>((x - lo) / width()));
    return heights[static_cast<std::size_t>(i)];
}

double StepFactor::mass() const
{
    double s = 0.0;
    for (double h : heights)
        s += h;
    return s * width();
}

double StepFactor::sup() const
{
    return *std::max_element(heights.begin(), heights.end());
}

ProductDensity::ProductDensity(std::vector<StepFactor> factors)
    : DensityModel(static_cast<int>(factors.size())), factors_(std::move(factors))
{
    const int n = dim();
    mass_ = 1.0;
    sup_ = 1.0;
    double r2 = 0.0;
    for (const auto& f : factors_) {
        if (!(f.hi > f.lo) || f.heights.empty())
            throw std::invalid_argument("ProductDensity: each factor needs lo < hi and at least one bin");
        for (double h : f.heights)
            if (!(h >= 0.0) || !std::isfinite(h))
                throw std::invalid_argument("ProductDensity: heights must be finite and non-negative");
        if (!(f.mass() > 0.0))
            throw std::invalid_argument("ProductDensity: factor with zero mass");
        mass_ *= f.mass();
        sup_ *= f.sup();
        r2 += std::max(f.lo * f.lo, f.hi * f.hi);
        std::vector<double> cdf;
        double acc = 0.0;
        for (double h : f.heights)
            cdf.push_back(acc += h);
        factor_cdf_.push_back(std::move(cdf));
    }
    radius_ = std::sqrt(r2);

    // Enumerate the nonzero cells of the tensor grid.
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        double h = 1.0;
        Cell cell{Vector(n), Vector(n), 0.0};
        for (int j = 0; j < n; ++j) {
            const auto& f = factors_[static_cast<std::size_t>(j)];
            const int i = idx[static_cast<std::size_t>(j)];
            h *= f.heights[static_cast<std::size_t>(i)];
            cell.lo(j) = f.lo + i * f.width();
            cell.hi(j) = f.lo + (i + 1) * f.width();
        }
        if (h > 0.0) {
            cell.height = h;
            cells_.push_back(std::move(cell));
        }
        int j = 0;
        while (j < n && ++idx[static_cast<std::size_t>(j)] == factors_[static_cast<std::size_t>(j)].bins())
            idx[static_cast<std::size_t>(j++)] = 0;
        if (j == n)
            break;
    }
}

DensityPtr ProductDensity::boxes(const std::vector<std::pair<double, double>>& sides)
{
    std::vector<StepFactor> factors;
    for (const auto& [lo, hi] : sides)
        factors.push_back({lo, hi, {1.0 / (hi - lo)}});
    return std::make_shared<ProductDensity>(std::move(factors));
}

double ProductDensity::eval(const Vector& x) const
{
    require_dim(x, dim(), "ProductDensity::eval");
    double v = 1.0;
    for (int j = 0; j < dim() && v > 0.0; ++j)
        v *= factors_[static_cast<std::size_t>(j)].eval(x(j));
    return v;
}

Vector ProductDensity::sample(Engine& eng) const
{
    Vector x(dim());
    for (int j = 0; j < dim(); ++j) {
        const auto& f = factors_[static_cast<std::size_t>(j)];
        const auto& cdf = factor_cdf_[static_cast<std::size_t>(j)];
        const double u = uniform01(eng) * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end())
            --it;
        const auto bin = static_cast<int>(it - cdf.begin());
        x(j) = f.lo + (bin + uniform01(eng)) * f.width();
    }
    return x;
}

std::optional<SliceIntegral> ProductDensity::slice_exact(const AffineSlice& slice, double p) const
{
    require_dim(slice.origin, dim(), "ProductDensity::slice_exact");
    const int n = dim();
    const int d = slice.dim();
    const Matrix& dir = slice.directions;
    Matrix a(2 * n, d);
    a.topRows(n) = dir;
    a.bottomRows(n) = -dir;
    double integral = 0.0;
    double sup = 0.0;
    Vector b(2 * n);
    for (const auto& cell : cells_) {
        const Vector center = 0.5 * (cell.lo + cell.hi);
        const Vector t0 = dir.transpose() * (center - slice.origin);
        const Vector nearest = slice.origin + dir * t0;
        if ((nearest - center).norm() > 0.5 * (cell.hi - cell.lo).norm() * (1.0 + 1e-12))
            continue;
        // Cell constraints in coordinates s = t − t0 on the slice.
        b.head(n) = cell.hi - nearest;
        b.tail(n) = nearest - cell.lo;
        const double vol = detail::polytope_volume(a, b);
        if (vol <= 1e-14 * std::pow((cell.hi - cell.lo).minCoeff(), d))
            continue;
        integral += std::pow(cell.height, p) * vol;
        sup = std::max(sup, cell.height);
    }
    return SliceIntegral{integral, sup};
}

std::optional<double> ProductDensity::superlevel_volume(double t) const
{
    double vol = 0.0;
    for (const auto& cell : cells_)
        if (cell.height > t)
            vol += (cell.hi - cell.lo).prod();
    return vol;
}

std::string ProductDensity::describe() const
{
    std::string s = "product(n=" + std::to_string(dim()) + ", bins=";
    for (std::size_t j = 0; j < factors_.size(); ++j)
        s += (j ? "x" : "") + std::to_string(factors_[j].bins());
    return s + ")";
}

// ---------------------------------------------------------------- radial grid

RadialGridDensity::RadialGridDensity(int n, std::vector<double> edges, std::vector<double> values)
    : DensityModel(n), edges_(std::move(edges)), values_(std::move(values))
{
    if (values_.empty() || edges_.size() != values_.size() + 1)
        throw std::invalid_argument("RadialGridDensity: need m values and m+1 edges");
    if (edges_.front() != 0.0)
        throw std::invalid_argument("RadialGridDensity: first edge must be 0");
    for (std::size_t i = 1; i < edges_.size(); ++i)
        if (!(edges_[i] > edges_[i - 1]) || !std::isfinite(edges_[i]))
            throw std::invalid_argument("RadialGridDensity: edges must be strictly increasing and finite");
    mass_ = 0.0;
    sup_ = 0.0;
    const double omega = unit_ball_volume(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("RadialGridDensity: values must be finite and non-negative");
        acc += v * omega * (std::pow(edges_[i + 1], n) - std::pow(edges_[i], n));
        shell_cdf_.push_back(acc);
        sup_ = std::max(sup_, v);
    }
    mass_ = acc;
    if (!(mass_ > 0.0))
        throw std::invalid_argument("RadialGridDensity: zero mass");
}

std::shared_ptr<const RadialGridDensity> RadialGridDensity::uniform_bins(int n, double radius,
                                                                         std::vector<double> values)
{
    if (!(radius > 0.0) || values.empty())
        throw std::invalid_argument("RadialGridDensity: need R > 0 and at least one bin");
    std::vector<double> edges(values.size() + 1);
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i] = radius * static_cast<double>(i) / static_cast<double>(values.size());
    return std::make_shared<RadialGridDensity>(n, std::move(edges), std::move(values));
}

double RadialGridDensity::eval_radius(double r) const
{
    if (r < 0.0 || r >= edges_.back())
        return 0.0;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), r);
    return values_[static_cast<std::size_t>(it - edges_.begin() - 1)];
}

double RadialGridDensity::eval(const Vector& x) const
{
    require_dim(x, dim(), "RadialGridDensity::eval");
    return eval_radius(x.norm());
}

Vector RadialGridDensity::sample(Engine& eng) const
{
    const int n = dim();
    const double u = uniform01(eng) * mass_;
    auto it = std::upper_bound(shell_cdf_.begin(), shell_cdf_.end(), u);
    if (it == shell_cdf_.end())
        --it;
    const auto i = static_cast<std::size_t>(it - shell_cdf_.begin());
    const double lo = std::pow(edges_[i], n);
    const double hi = std::pow(edges_[i + 1], n);
    const double r = std::pow(lo + uniform01(eng) * (hi - lo), 1.0 / n);
    return r * uniform_on_sphere(n, eng);
}

std::optional<SliceIntegral> RadialGridDensity::slice_exact(const AffineSlice& slice, double p) const
{
    require_dim(slice.origin, dim(), "RadialGridDensity::slice_exact");
    const int d = slice.dim();
    const double d0 = slice.foot().norm();
    const double d02 = d0 * d0;
    const double omega = unit_ball_volume(d);
    double integral = 0.0;
    double sup = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (edges_[i + 1] <= d0)
            continue;
        const double s_lo = std::sqrt(std::max(0.0, edges_[i] * edges_[i] - d02));
        const double s_hi = std::sqrt(edges_[i + 1] * edges_[i + 1] - d02);
        if (s_hi <= s_lo || values_[i] == 0.0)
            continue;
        integral += std::pow(values_[i], p) * omega * (std::pow(s_hi, d) - std::pow(s_lo, d));
        sup = std::max(sup, values_[i]);
    }
    return SliceIntegral{integral, sup};
}

std::optional<double> RadialGridDensity::superlevel_volume(double t) const
{
    const int n = dim();
    double vol = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] > t)
            vol += std::pow(edges_[i + 1], n) - std::pow(edges_[i], n);
    return unit_ball_volume(n) * vol;
}

bool RadialGridDensity::nonincreasing() const
{
    return std::is_sorted(values_.rbegin(), values_.rend());
}

double RadialGridDensity::lp_integral(double p) const
{
    const int n = dim();
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] > 0.0)
            s += std::pow(values_[i], p) * (std::pow(edges_[i + 1], n) - std::pow(edges_[i], n));
    return unit_ball_volume(n) * s;
}

std::string RadialGridDensity::describe() const
{
    return "radial(n=" + std::to_string(dim()) + ", R=" + fmt(edges_.back()) +
           ", bins=" + std::to_string(values_.size()) + ")";
}

// ---------------------------------------------------------------- affine image

AffineImageDensity::AffineImageDensity(DensityPtr inner, AffineMap g)
    : DensityModel(inner->dim()), inner_(std::move(inner)), g_(std::move(g)), inv_(g_.inverse())
{
    radius_ = spectral_norm(g_.a) * inner_->support_radius() + g_.b.norm();
}

double AffineImageDensity::eval(const Vector& x) const
{
    return inner_->eval(inv_.apply(x));
}

Vector AffineImageDensity::sample(Engine& eng) const
{
    return g_.apply(inner_->sample(eng));
}

std::optional<SliceIntegral> AffineImageDensity::slice_exact(const AffineSlice& slice, double p) const
{
    const int d = slice.dim();
    const Matrix mapped = inv_.a * slice.directions;
    Eigen::HouseholderQR<Matrix> qr(mapped);
    const Matrix q = qr.householderQ() * Matrix::Identity(dim(), d);
    const double jac = qr.matrixQR().topRows(d).diagonal().cwiseAbs().prod();
    auto r = inner_->slice_exact({inv_.apply(slice.origin), q}, p);
    if (!r)
        return std::nullopt;
    return SliceIntegral{r->integral / jac, r->sup};
}

std::optional<double> AffineImageDensity::superlevel_volume(double t) const
{
    return inner_->superlevel_volume(t);
}

DensityPtr AffineImageDensity::transformed(const AffineMap& g) const
{
    return std::make_shared<AffineImageDensity>(inner_, g_.then(g));
}

std::string AffineImageDensity::describe() const
{
    return "affine_image(" + inner_->describe() + ")";
}

// ---------------------------------------------------------------- callable

CallableDensity::CallableDensity(int n, std::function<double(const Vector&)> f, double mass, double sup,
                                 double radius, std::string label, int rejection_budget)
    : DensityModel(n), f_(std::move(f)), mass_(mass), sup_(sup), radius_(radius), label_(std::move(label)),
      budget_(rejection_budget)
{
    if (!(mass_ > 0.0) || !(sup_ > 0.0) || !(radius_ > 0.0) || !std::isfinite(radius_))
        throw std::invalid_argument("CallableDensity: mass, sup and a finite support radius must be positive");
}

Vector CallableDensity::sample(Engine& eng) const
{
    for (int attempt = 0; attempt < budget_; ++attempt) {
        Vector x = radius_ * uniform_in_ball(dim(), eng);
        if (uniform01(eng) * sup_ < f_(x))
            return x;
    }
    throw std::runtime_error("CallableDensity: rejection budget exhausted for " + label_);
}

// ---------------------------------------------------------------- operations

DensityPtr affine_image(const DensityPtr& f, const AffineMap& g)
{
    if (g.a.rows() != f->dim() || g.a.cols() != f->dim() || g.b.size() != f->dim())
        throw std::invalid_argument("affine_image: map dimension does not match density");
    if (std::abs(std::abs(g.a.determinant()) - 1.0) > 1e-10)
        throw std::invalid_argument("affine_image: map is not volume preserving");
    return f->transformed(g);
}

RestrictionStats restriction_stats(const DensityModel& f, const AffineSlice& slice, double p,
                                   const SliceOptions& options)
{
    if (!(p > 0.0))
        throw std::invalid_argument("restriction_stats: p must be positive");
    require_dim(slice.origin, f.dim(), "restriction_stats");
    if (options.method != SliceMethod::monte_carlo) {
        if (auto r = f.slice_exact(slice, p))
            return {Estimate::exact(r->integral), Estimate::exact(r->sup), true};
        if (options.method == SliceMethod::exact)
            throw std::invalid_argument("restriction_stats: " + f.describe() + " has no exact slice oracle");
    }
    const double radius = f.support_radius();
    if (!std::isfinite(radius))
        throw std::invalid_argument("restriction_stats: Monte Carlo slices need a finite support radius");
    if (!options.engine || options.samples == 0)
        throw std::invalid_argument("restriction_stats: Monte Carlo slices need an engine and samples");
    const int d = slice.dim();
    const Vector foot = slice.foot();
    const double dist = foot.norm();
    if (dist >= radius)
        return {Estimate{0.0, 0.0, options.samples}, Estimate{0.0, 0.0, options.samples}, false};
    const double rho = std::sqrt(radius * radius - dist * dist);
    const double vol = unit_ball_volume(d) * std::pow(rho, d);
    Accumulator acc;
    double best = 0.0;
    for (std::size_t i = 0; i < options.samples; ++i) {
        const Vector x = foot + slice.directions * (rho * uniform_in_ball(d, *options.engine));
        const double v = f.eval(x);
        best = std::max(best, v);
        acc.add(v > 0.0 ? std::pow(v, p) : 0.0);
    }
    return {acc.estimate().scaled(vol), Estimate{best, 0.0, options.samples}, false};
}

RestrictionStats restriction_stats(const DensityModel& f, const Subspace& e, const SliceOptions& options)
{
    return restriction_stats(f, slice_of(e), 1.0, options);
}

RestrictionStats restriction_stats(const DensityModel& f, const Flat& flat, const SliceOptions& options)
{
    return restriction_stats(f, slice_of(flat), 1.0, options);
}

Estimate marginal_density(const DensityModel& f, const Subspace& e, const Vector& x, const SliceOptions& options)
{
    require_dim(x, f.dim(), "marginal_density");
    if ((x - project(e, x)).norm() > 1e-10 * std::max(1.0, x.norm()))
        throw std::invalid_argument("marginal_density: x does not lie in E");
    return restriction_stats(f, fiber(e, x), 1.0, options).lp;
}

}  // namespace iglab
