#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "iglab/densities.hpp"

namespace iglab::detail {

namespace {

constexpr double kZeroRow = 1e-13;
constexpr double kFeasibility = 1e-12;

struct Halfspaces
{
    std::vector<Vector> rows;
    std::vector<double> rhs;
};

// Normalizes rows, drops zero rows (false if one is infeasible) and exact duplicates.
bool normalize(const Matrix& a, const Vector& b, Halfspaces& out)
{
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double norm = a.row(i).norm();
        if (norm < kZeroRow) {
            if (b(i) < -kFeasibility)
                return false;
            continue;
        }
        Vector row = a.row(i).transpose() / norm;
        const double r = b(i) / norm;
        bool duplicate = false;
        for (std::size_t j = 0; j < out.rows.size() && !duplicate; ++j)
            duplicate = (out.rows[j] - row).cwiseAbs().maxCoeff() < 1e-12 && std::abs(out.rhs[j] - r) < 1e-12;
        if (!duplicate) {
            out.rows.push_back(std::move(row));
            out.rhs.push_back(r);
        }
    }
    return true;
}

double volume(const Matrix& a, const Vector& b)
{
    const auto d = a.cols();
    Halfspaces h;
    if (!normalize(a, b, h))
        return 0.0;
    const auto m = static_cast<Eigen::Index>(h.rows.size());

    if (d == 1) {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < m; ++i) {
            const double c = h.rows[i](0);
            if (c > 0.0)
                hi = std::min(hi, h.rhs[i] / c);
            else
                lo = std::max(lo, h.rhs[i] / c);
        }
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw std::domain_error("polytope_volume: unbounded region");
        return std::max(0.0, hi - lo);
    }
    if (m == 0)
        throw std::domain_error("polytope_volume: unbounded region");

    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (h.rhs[i] == 0.0)
            continue;
        const Vector& ai = h.rows[i];
        Eigen::Index j = 0;
        ai.cwiseAbs().maxCoeff(&j);
        const double pivot = ai(j);

        // Restrict every other halfspace to the hyperplane ai·t = bi, eliminating t_j.
        Matrix sub(m - 1, d - 1);
        Vector sub_b(m - 1);
        Eigen::Index r = 0;
        for (Eigen::Index k = 0; k < m; ++k) {
            if (k == i)
                continue;
            const double factor = h.rows[k](j) / pivot;
            Eigen::Index c = 0;
            for (Eigen::Index col = 0; col < d; ++col) {
                if (col == j)
                    continue;
                sub(r, c++) = h.rows[k](col) - factor * ai(col);
            }
            sub_b(r) = h.rhs[k] - factor * h.rhs[i];
            ++r;
        }
        const double facet = volume(sub, sub_b);
        total += h.rhs[i] * facet / std::abs(pivot);
    }
    return std::max(0.0, total / static_cast<double>(d));
}

}  // namespace

double polytope_volume(const Matrix& a, const Vector& b)
{
    if (a.rows() != b.size())
        throw std::invalid_argument("polytope_volume: row count mismatch");
    if (a.cols() < 1)
        throw std::invalid_argument("polytope_volume: dimension must be positive");
    return volume(a, b);
}

}  // namespace iglab::detail
