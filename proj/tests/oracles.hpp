#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-11);
}

/// ∫∫ over a rectangle by nested Gauss–Kronrod.
inline double integrate2(const std::function<double(double, double)>& f, double a, double b, double c, double d)
{
    return integrate([&](double x) { return integrate([&](double y) { return f(x, y); }, c, d); }, a, b);
}

/// Asymptotic Kolmogorov survival function Q_KS(λ).
inline double kolmogorov_q(double lambda)
{
    if (lambda < 0.2)
        return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-16)
            break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

/// One-sample KS p-value against a continuous CDF.
inline double ks_pvalue(std::vector<double> xs, const std::function<double(double)>& cdf)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    const double sn = std::sqrt(n);
    return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

/// Two-sample KS p-value.
inline double ks2_pvalue(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

inline double chord(double t)
{
    return std::abs(t) < 1.0 ? 2.0 * std::sqrt(1.0 - t * t) : 0.0;
}

}  // namespace oracle
