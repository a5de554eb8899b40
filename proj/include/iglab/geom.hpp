#pragma once

#include <Eigen/Dense>

namespace iglab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Ambient dimension n, subspace dimension k, point count q.
struct Dimensions
{
    int n;
    int k;
    int q;

    /// Validates 1 <= q <= k <= n.
    static Dimensions checked(int n, int k, int q);
};

/// ω_n = π^{n/2} / Γ(n/2 + 1), the volume of the unit Euclidean ball in ℝⁿ.
double unit_ball_volume(int n);
double log_unit_ball_volume(int n);

/// r_n = ω_n^{-1/n}: radius of the centered ball of volume one (D_n).
double unit_volume_ball_radius(int n);

/// Radius of the n-ball with the given volume.
double ball_radius_for_volume(int n, double volume);

/// (q!)^{n-k} (ω_{n-q+1}···ω_n)/(ω_{k-q+1}···ω_k), evaluated in log space.
double bp_constant(const Dimensions& dims);

/**
 * The same product with sphere surface areas s_j = j·ω_j in place of ball
 * volumes. This is the constant that makes the linear and affine
 * Blaschke–Petkantschin identities hold for the Haar probability measure on
 * G(n,k) and the ν_{n,k} normalization used here; it exceeds bp_constant by
 * the factor [n!/(n−q)!]/[k!/(k−q)!].
 */
double bp_constant_surface(const Dimensions& dims);

/// The factor bp_constant_surface / bp_constant.
double bp_surface_factor(const Dimensions& dims);

/// q-volume of conv{0, x_1..x_q} for the columns of `points` (n×q).
double simplex0_volume(const Matrix& points);

/// q-volume of conv{x_1..x_{q+1}} for the columns of `points` (n×(q+1)).
double simplex_volume(const Matrix& points);

/// sqrt(det(XᵀX)) through a Householder QR of X; zero below relative rank tolerance 1e-12.
double gram_volume(const Matrix& points);

}  // namespace iglab
