#include "doctest.h"

#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "iglab/geom.hpp"
#include "iglab/grassmann.hpp"

using namespace iglab;
using std::numbers::pi;

namespace {

double omega_hp(int n)
{
    using big = boost::multiprecision::cpp_bin_float_50;
    const big half = big(n) / 2;
    const big v = boost::multiprecision::pow(boost::math::constants::pi<big>(), half) / boost::multiprecision::tgamma(half + 1);
    return static_cast<double>(v);
}

Matrix random_points(int n, int q, Engine& eng)
{
    Matrix m(n, q);
    for (int j = 0; j < q; ++j)
        for (int i = 0; i < n; ++i)
            m(i, j) = standard_normal(eng);
    return m;
}

}  // namespace

TEST_CASE("unit ball volumes")
{
    CHECK(unit_ball_volume(0) == 1.0);
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(unit_ball_volume(2) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2).epsilon(1e-14));
    for (int n = 1; n <= 12; ++n)
        CHECK(unit_ball_volume(n) == doctest::Approx(omega_hp(n)).epsilon(1e-13));
}

TEST_CASE("ball volume recurrence")
{
    for (int n = 1; n <= 20; ++n) {
        const double rhs = unit_ball_volume(n - 1) * std::sqrt(pi) * std::tgamma(n / 2.0 + 0.5) / std::tgamma(n / 2.0 + 1.0);
        CHECK(unit_ball_volume(n) == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("radius of the unit-volume ball")
{
    for (int n = 1; n <= 6; ++n) {
        const double r = unit_volume_ball_radius(n);
        CHECK(unit_ball_volume(n) * std::pow(r, n) == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(ball_radius_for_volume(2, pi * 4.0) == doctest::Approx(2.0));
}

TEST_CASE("printed bp constant")
{
    for (int n = 1; n <= 5; ++n)
        CHECK(bp_constant({n, n, n}) == doctest::Approx(1.0).epsilon(1e-13));
    // (1!)^1 ω_2/ω_1
    CHECK(bp_constant({2, 1, 1}) == doctest::Approx(pi / 2).epsilon(1e-13));
    // (1!)^1 ω_3/ω_2
    CHECK(bp_constant({3, 2, 1}) == doctest::Approx((4.0 * pi / 3.0) / pi).epsilon(1e-13));
    // (2!)^1 ω_2 ω_3/(ω_1 ω_2)
    CHECK(bp_constant({3, 2, 2}) == doctest::Approx(2.0 * (4.0 * pi / 3.0) / 2.0).epsilon(1e-13));
    CHECK_THROWS(bp_constant({3, 1, 2}));
    CHECK_THROWS(bp_constant({2, 3, 1}));
}

TEST_CASE("surface-area variant of the bp constant")
{
    CHECK(bp_surface_factor({2, 1, 1}) == doctest::Approx(2.0));
    CHECK(bp_surface_factor({3, 2, 1}) == doctest::Approx(1.5));
    CHECK(bp_surface_factor({3, 2, 2}) == doctest::Approx(3.0));
    CHECK(bp_surface_factor({4, 2, 2}) == doctest::Approx(6.0));
    // s_2/s_1 = 2π/2
    CHECK(bp_constant_surface({2, 1, 1}) == doctest::Approx(pi).epsilon(1e-13));
}

TEST_CASE("simplex volumes: fixed examples")
{
    Matrix e12 = Matrix::Zero(3, 2);
    e12(0, 0) = 1;
    e12(1, 1) = 1;
    CHECK(simplex0_volume(e12) == doctest::Approx(0.5));

    Matrix seg = Matrix::Zero(2, 1);
    seg(0, 0) = 2;
    CHECK(simplex0_volume(seg) == doctest::Approx(2.0));

    Matrix unit(1, 2);
    unit << 0, 1;
    CHECK(simplex_volume(unit) == doctest::Approx(1.0));

    CHECK(simplex_volume(Matrix::Identity(3, 3)) == doctest::Approx(std::sqrt(3.0) / 2.0));

    Matrix collinear(2, 3);
    collinear << 0, 1, 2, 0, 1, 2;
    CHECK(simplex_volume(collinear) == 0.0);

    CHECK_THROWS(simplex0_volume(Matrix::Identity(2, 3)));
    CHECK_THROWS(simplex_volume(Matrix::Zero(2, 4)));
}

TEST_CASE("simplex0 volume of a random pair matches the cross product")
{
    Engine eng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix p = random_points(3, 2, eng);
        const Eigen::Vector3d a = p.col(0), b = p.col(1);
        CHECK(simplex0_volume(p) == doctest::Approx(0.5 * a.cross(b).norm()).epsilon(1e-12));
    }
}

TEST_CASE("simplex0 volume: rotation invariance and homogeneity")
{
    Engine eng(12);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + rep % 4;
        const int q = 1 + rep % n;
        const Matrix p = random_points(n, q, eng);
        const double v = simplex0_volume(p);
        const Matrix rot = random_rotation(n, eng);
        CHECK(std::abs(simplex0_volume(rot * p) - v) <= 1e-10 * std::max(1.0, v));

        const double a = 0.3 + uniform01(eng) * 3.0;
        CHECK(simplex0_volume(a * p) == doctest::Approx(std::pow(a, q) * v).epsilon(1e-10));

        Vector scales(q);
        for (int j = 0; j < q; ++j)
            scales(j) = 0.2 + 2.0 * uniform01(eng);
        const Matrix scaled = p * scales.asDiagonal();
        CHECK(simplex0_volume(scaled) == doctest::Approx(scales.prod() * v).epsilon(1e-10));
    }
}

TEST_CASE("gram volume detects rank deficiency")
{
    Matrix m(3, 2);
    m << 1, 2, 1, 2, 1, 2 + 1e-15;
    CHECK(gram_volume(m) == 0.0);
}
