#include "iglab/grassmann.hpp"

#include <cmath>
#include <stdexcept>

namespace iglab {

namespace {

Matrix gaussian_matrix(int rows, int cols, Engine& eng)
{
    Matrix g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            g(i, j) = standard_normal(eng);
    return g;
}

// Full orthogonal factor of a Householder QR; first k columns span `spanning`.
Matrix full_q(const Matrix& spanning)
{
    Eigen::HouseholderQR<Matrix> qr(spanning);
    return qr.householderQ() * Matrix::Identity(spanning.rows(), spanning.rows());
}

bool full_rank(const Matrix& m)
{
    Eigen::HouseholderQR<Matrix> qr(m);
    const Matrix& r = qr.matrixQR();
    double scale = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        scale = std::max(scale, m.col(j).norm());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (std::abs(r(j, j)) <= 1e-10 * scale)
            return false;
    return true;
}

}  // namespace

Subspace Subspace::from_spanning(const Matrix& spanning)
{
    const auto n = spanning.rows();
    const auto k = spanning.cols();
    if (k < 1 || k > n)
        throw std::invalid_argument("Subspace: need 1 <= k <= n");
    if (!full_rank(spanning))
        throw std::invalid_argument("Subspace: spanning set is rank deficient");
    Matrix q = full_q(spanning);
    return Subspace(q.leftCols(k), q.rightCols(n - k));
}

Subspace Subspace::coordinate(int n, int k, int first)
{
    if (k < 1 || first < 0 || first + k > n)
        throw std::invalid_argument("Subspace::coordinate: bad range");
    Matrix basis = Matrix::Zero(n, k);
    Matrix comp = Matrix::Zero(n, n - k);
    for (int j = 0; j < k; ++j)
        basis(first + j, j) = 1.0;
    int c = 0;
    for (int i = 0; i < n; ++i)
        if (i < first || i >= first + k)
            comp(i, c++) = 1.0;
    return Subspace(std::move(basis), std::move(comp));
}

Subspace Subspace::whole(int n)
{
    return Subspace(Matrix::Identity(n, n), Matrix(n, 0));
}

Subspace Subspace::orthogonal_complement() const
{
    if (complement_.cols() == 0)
        throw std::logic_error("Subspace: complement of the whole space is trivial");
    return Subspace(complement_, basis_);
}

Subspace Subspace::rotated(const Matrix& rotation) const
{
    return Subspace(rotation * basis_, rotation * complement_);
}

Flat::Flat(Subspace subspace, const Vector& point)
    : subspace_(std::move(subspace)), offset_(point - subspace_.basis() * (subspace_.basis().transpose() * point))
{
}

Subspace sample_subspace(int n, int k, Engine& eng)
{
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("sample_subspace: need 1 <= k <= n-1");
    for (;;) {
        Matrix g = gaussian_matrix(n, k, eng);
        if (full_rank(g))
            return Subspace::from_spanning(g);
    }
}

Vector project(const Subspace& e, const Vector& x)
{
    if (x.size() != e.ambient_dim())
        throw std::invalid_argument("project: dimension mismatch");
    return e.basis() * (e.basis().transpose() * x);
}

double grassmann_distance(const Subspace& e, const Subspace& f)
{
    if (e.ambient_dim() != f.ambient_dim() || e.dim() != f.dim())
        throw std::invalid_argument("grassmann_distance: subspaces differ in n or k");
    const Matrix diff = e.projection_matrix() - f.projection_matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(diff, Eigen::EigenvaluesOnly);
    return std::min(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
}

Vector uniform_on_sphere(int d, Engine& eng)
{
    Vector v(d);
    double norm = 0.0;
    do {
        for (int i = 0; i < d; ++i)
            v(i) = standard_normal(eng);
        norm = v.norm();
    } while (norm == 0.0);
    return v / norm;
}

Vector uniform_in_ball(int d, Engine& eng)
{
    if (d == 0)
        return Vector(0);
    const Vector dir = uniform_on_sphere(d, eng);
    return dir * std::pow(uniform01(eng), 1.0 / d);
}

WeightedFlat sample_flat(int n, int k, double window_radius, Engine& eng)
{
    if (!(window_radius > 0.0))
        throw std::invalid_argument("sample_flat: window radius must be positive");
    if (k == n)
        return {Flat(Subspace::whole(n), Vector::Zero(n)), 1.0};
    Subspace e = sample_subspace(n, k, eng);
    const Vector u = uniform_in_ball(n - k, eng) * window_radius;
    const Vector offset = e.complement() * u;
    const double weight = unit_ball_volume(n - k) * std::pow(window_radius, n - k);
    return {Flat(std::move(e), offset), weight};
}

PerturbationResult perturb_subspace(const Subspace& e, double eta, Engine& eng, int max_attempts)
{
    if (!(eta > 0.0 && eta < 2.0))
        throw std::invalid_argument("perturb_subspace: eta must lie in (0, 2)");
    const int n = e.ambient_dim();
    const int k = e.dim();
    PerturbationResult out;
    if (eta >= 1.0) {
        out.subspace = sample_subspace(n, k, eng);
        out.attempts = 1;
        return out;
    }
    const double tau = eta / std::sqrt(static_cast<double>(n));
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        const Matrix proposal = e.basis() + tau * gaussian_matrix(n, k, eng);
        if (!full_rank(proposal))
            continue;
        Subspace f = Subspace::from_spanning(proposal);
        if (grassmann_distance(e, f) <= eta) {
            out.subspace = std::move(f);
            out.attempts = attempt;
            return out;
        }
    }
    out.attempts = max_attempts;
    return out;
}

Matrix random_rotation(int n, Engine& eng)
{
    const Matrix g = gaussian_matrix(n, n, eng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix& r = qr.matrixQR();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0.0)
            q.col(j) *= -1.0;
    if (q.determinant() < 0.0)
        q.col(0) *= -1.0;
    return q;
}

}  // namespace iglab
