#include "iglab/geom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace iglab {

namespace {

constexpr double kRankTolerance = 1e-12;

double log_factorial(int q)
{
    return std::lgamma(static_cast<double>(q) + 1.0);
}

}  // namespace

Dimensions Dimensions::checked(int n, int k, int q)
{
    if (q < 1 || q > k || k > n)
        throw std::invalid_argument("Dimensions: need 1 <= q <= k <= n, got n=" + std::to_string(n) +
                                    " k=" + std::to_string(k) + " q=" + std::to_string(q));
    return {n, k, q};
}

double log_unit_ball_volume(int n)
{
    if (n < 0)
        throw std::invalid_argument("unit_ball_volume: negative dimension");
    const double half = 0.5 * static_cast<double>(n);
    return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

double unit_ball_volume(int n)
{
    if (n == 0)
        return 1.0;
    return std::exp(log_unit_ball_volume(n));
}

double unit_volume_ball_radius(int n)
{
    if (n < 1)
        throw std::invalid_argument("unit_volume_ball_radius: n must be positive");
    return std::exp(-log_unit_ball_volume(n) / n);
}

double ball_radius_for_volume(int n, double volume)
{
    if (volume <= 0.0)
        return 0.0;
    return std::exp((std::log(volume) - log_unit_ball_volume(n)) / n);
}

double bp_constant(const Dimensions& dims)
{
    const auto [n, k, q] = Dimensions::checked(dims.n, dims.k, dims.q);
    double log_c = (n - k) * log_factorial(q);
    for (int j = n - q + 1; j <= n; ++j)
        log_c += log_unit_ball_volume(j);
    for (int j = k - q + 1; j <= k; ++j)
        log_c -= log_unit_ball_volume(j);
    return std::exp(log_c);
}

double bp_surface_factor(const Dimensions& dims)
{
    const auto [n, k, q] = Dimensions::checked(dims.n, dims.k, dims.q);
    double log_f = 0.0;
    for (int j = n - q + 1; j <= n; ++j)
        log_f += std::log(static_cast<double>(j));
    for (int j = k - q + 1; j <= k; ++j)
        log_f -= std::log(static_cast<double>(j));
    return std::exp(log_f);
}

double bp_constant_surface(const Dimensions& dims)
{
    return bp_constant(dims) * bp_surface_factor(dims);
}

double gram_volume(const Matrix& points)
{
    const auto q = points.cols();
    if (q == 0)
        return 1.0;
    if (q > points.rows())
        throw std::invalid_argument("gram_volume: more points than ambient dimension");
    if (q == 1)
        return points.col(0).norm();
    Eigen::HouseholderQR<Matrix> qr(points);
    const Matrix& r = qr.matrixQR();
    double scale = 0.0;
    for (Eigen::Index j = 0; j < q; ++j)
        scale = std::max(scale, points.col(j).norm());
    double vol = 1.0;
    for (Eigen::Index j = 0; j < q; ++j) {
        const double d = std::abs(r(j, j));
        if (d <= kRankTolerance * scale)
            return 0.0;
        vol *= d;
    }
    return vol;
}

double simplex0_volume(const Matrix& points)
{
    const auto q = static_cast<int>(points.cols());
    if (q > points.rows())
        throw std::invalid_argument("simplex0_volume: q > n");
    return gram_volume(points) / std::exp(log_factorial(q));
}

double simplex_volume(const Matrix& points)
{
    const auto cols = points.cols();
    if (cols < 1)
        throw std::invalid_argument("simplex_volume: need at least one point");
    if (cols - 1 > points.rows())
        throw std::invalid_argument("simplex_volume: q > n");
    const Matrix edges = points.rightCols(cols - 1).colwise() - points.col(0);
    return simplex0_volume(edges);
}

}  // namespace iglab
