#pragma once

#include <optional>

#include "iglab/geom.hpp"
#include "iglab/random.hpp"

namespace iglab {

/**
 * A k-dimensional linear subspace of ℝⁿ, stored as an orthonormal basis.
 * Unoriented: two bases with the same span compare equal under distance().
 */
class Subspace
{
public:
    /// Orthonormalizes `spanning` (n×k, full column rank).
    static Subspace from_spanning(const Matrix& spanning);
    /// span(e_{first}, ..., e_{first+k-1}).
    static Subspace coordinate(int n, int k, int first = 0);
    /// The whole space (k = n); used for degenerate identity cases.
    static Subspace whole(int n);

    int ambient_dim() const { return static_cast<int>(basis_.rows()); }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Matrix& basis() const { return basis_; }

    /// Orthonormal basis of the orthogonal complement (n×(n−k)).
    const Matrix& complement() const { return complement_; }
    Subspace orthogonal_complement() const;

    Matrix projection_matrix() const { return basis_ * basis_.transpose(); }
    Subspace rotated(const Matrix& rotation) const;

private:
    Subspace(Matrix basis, Matrix complement) : basis_(std::move(basis)), complement_(std::move(complement)) {}

    Matrix basis_;
    Matrix complement_;
};

/// An affine k-flat offset + span(subspace), with offset ⟂ subspace.
class Flat
{
public:
    /// Projects `point` onto the orthogonal complement to obtain the canonical offset.
    Flat(Subspace subspace, const Vector& point);

    const Subspace& subspace() const { return subspace_; }
    const Vector& offset() const { return offset_; }
    int dim() const { return subspace_.dim(); }
    int ambient_dim() const { return subspace_.ambient_dim(); }
    double distance_to_origin() const { return offset_.norm(); }

    Vector point(const Vector& coords) const { return offset_ + subspace_.basis() * coords; }

private:
    Subspace subspace_;
    Vector offset_;
};

/// A flat drawn from the windowed invariant measure, with its importance weight ω_{n−k}R^{n−k}.
struct WeightedFlat
{
    Flat flat;
    double weight;
};

/// Haar-distributed k-subspace: column span of an n×k Gaussian matrix.
Subspace sample_subspace(int n, int k, Engine& eng);

/// P_E x.
Vector project(const Subspace& e, const Vector& x);

/// Operator norm of P_E − P_F.
double grassmann_distance(const Subspace& e, const Subspace& f);

/**
 * Flat with E ~ μ_{n,k} and offset uniform on the radius-R ball of E^⊥.
 * mean(weight · g(F)) estimates ∫ g dν_{n,k} for g vanishing on flats
 * farther than R from the origin.
 */
WeightedFlat sample_flat(int n, int k, double window_radius, Engine& eng);

/// Uniform point in the unit ball of ℝ^d.
Vector uniform_in_ball(int d, Engine& eng);
/// Uniform point on the unit sphere of ℝ^d.
Vector uniform_on_sphere(int d, Engine& eng);

struct PerturbationResult
{
    std::optional<Subspace> subspace;
    int attempts = 0;
};

/**
 * Draw F with d(E, F) <= eta.
 *
 * For eta >= 1 the constraint is vacuous and F is a plain Haar draw.
 * Otherwise F is the span of basis(E) + τ·G (G Gaussian, τ = eta/√n),
 * rejected until within eta; gives up after `max_attempts`.
 */
PerturbationResult perturb_subspace(const Subspace& e, double eta, Engine& eng, int max_attempts = 10000);

/// Random rotation (Haar on O(n) with sign correction, det forced to +1).
Matrix random_rotation(int n, Engine& eng);

}  // namespace iglab
