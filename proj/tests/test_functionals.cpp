#include "doctest.h"

#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "iglab/functionals.hpp"
#include "oracles.hpp"

using namespace iglab;
using std::numbers::pi;

namespace {

DensityPtr interval(double lo, double hi)
{
    return std::make_shared<ProductDensity>(std::vector<StepFactor>{{lo, hi, {1.0}}});
}

bool within(const Estimate& e, double expected, double z = 3.0)
{
    return std::abs(e.value - expected) <= z * e.std_error + 1e-12 * std::abs(expected);
}

bool agree(const Estimate& a, const Estimate& b, double z = 3.0)
{
    return std::abs(a.value - b.value) <= z * std::hypot(a.std_error, b.std_error) + 1e-12 * std::abs(a.value);
}

Matrix shear(int n, double s)
{
    Matrix a = Matrix::Identity(n, n);
    a(0, n - 1) = s;
    return a;
}

DensityPtr anisotropic_ellipsoid(int n)
{
    Matrix m = Matrix::Identity(n, n);
    m(0, 0) = 6.0;
    if (n > 2)
        m(1, 1) = 0.5;
    return std::make_shared<EllipsoidIndicator>(1.0, Vector::Zero(n), m);
}

}  // namespace

TEST_CASE("exponent specs")
{
    ExponentSpec s{{1.0, kInfinity, 2.0}, {2.0, -1.0, 2.0}};
    CHECK(s.constraint_sum() == doctest::Approx(3.0));
    CHECK_NOTHROW(s.require_sum(3.0));
    CHECK_THROWS(s.require_sum(4.0));
    CHECK_THROWS(ExponentSpec({{1.0}, {1.0, 2.0}}).require_sum(1.0));
    CHECK_THROWS(ExponentSpec({{-1.0}, {1.0}}).require_sum(-1.0));
}

TEST_CASE("delta0 examples")
{
    const RandomStream rng(1);
    const auto a = delta0_p({interval(0, 1)}, 1.0, 200000, rng);
    CHECK(within(a.estimate, oracle::integrate([](double x) { return x; }, 0, 1)));
    const auto b = delta0_p({interval(-1, 1)}, 1.0, 200000, rng);
    CHECK(within(b.estimate, oracle::integrate([](double x) { return std::abs(x); }, -1, 1)));

    const auto ball = EllipsoidIndicator::ball(3, 1.3, 0.7);
    const auto c = delta0_p({ball, ball}, 0.0, 1000, rng);
    CHECK(c.estimate.value == doctest::Approx(ball->mass() * ball->mass()).epsilon(1e-12));
    CHECK(c.estimate.std_error == 0.0);

    CHECK_THROWS_AS(delta0_p({ball, ball}, -2.0, 10, rng), std::domain_error);
    CHECK_NOTHROW(delta0_p({ball, ball}, -1.9, 10, rng));
    CHECK_THROWS(delta0_p({interval(0, 1), interval(0, 1)}, 1.0, 10, rng));
}

TEST_CASE("delta0 homogeneity under dilation")
{
    // f_a(x) = f(x/a): Δ⁰_p(f_a..) = a^{q(n+p)} Δ⁰_p(f..)
    const int n = 3, q = 2;
    const double p = 1.5, a = 1.7;
    const auto f1 = EllipsoidIndicator::ball(n, 1.0);
    const auto fa = EllipsoidIndicator::ball(n, a);
    const auto e1 = delta0_p({f1, f1}, p, 100000, RandomStream(2)).estimate;
    const auto ea = delta0_p({fa, fa}, p, 100000, RandomStream(3)).estimate;
    CHECK(agree(ea, e1.scaled(std::pow(a, q * (n + p)))));
}

TEST_CASE("delta0 reports a heavy tail for strongly negative powers")
{
    const auto g = GaussianDensity::standard(2);
    const auto mild = delta0_p({g}, 1.0, 50000, RandomStream(4));
    const auto wild = delta0_p({g}, -1.8, 50000, RandomStream(4));
    CHECK(mild.tail_share < 0.05);
    CHECK(wild.tail_share > 0.3);
}

TEST_CASE("delta_p examples and the Kingman/Miles closed form")
{
    const auto d = delta_p(interval(0, 1), 1, 1.0, 200000, RandomStream(5));
    const double mean_gap =
        2.0 * oracle::integrate([](double x) { return oracle::integrate([&](double y) { return x - y; }, 0, x); }, 0, 1);
    CHECK(mean_gap == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(within(d.estimate, mean_gap));
    CHECK_THROWS_AS(delta_p(interval(0, 1), 1, 0.5, 10, RandomStream(5)), std::domain_error);

    // Δ_{n-1}(𝟙[-1,1]) = ∫∫|x−y|^{n−1}; n=2,3 give 8/3 both
    for (int n : {2, 3, 4}) {
        // split at the kink x = y
        const double exact = 2.0 * oracle::integrate([n](double x) {
            return oracle::integrate([&](double y) { return std::pow(x - y, n - 1); }, -1, x);
        }, -1, 1);
        CHECK(kingman_miles_delta(n, 1) == doctest::Approx(exact).epsilon(1e-10));
    }
    CHECK(kingman_miles_delta(2, 1) == doctest::Approx(8.0 / 3.0).epsilon(1e-13));

    for (auto [n, k] : {std::pair{3, 2}, std::pair{4, 2}, std::pair{4, 3}}) {
        const auto ball = EllipsoidIndicator::ball(k);
        const auto e = delta_p(ball, k, n - k, 200000, RandomStream(6 + n * 10 + k)).estimate;
        INFO("n=", n, " k=", k);
        CHECK(within(e, kingman_miles_delta(n, k)));
    }
}

TEST_CASE("delta_p homogeneity")
{
    const int n = 2, k = 2;
    const double p = 1.0, a = 0.6;
    const auto f1 = EllipsoidIndicator::ball(n, 1.0);
    const auto fa = EllipsoidIndicator::ball(n, a);
    const auto e1 = delta_p(f1, k, p, 100000, RandomStream(7)).estimate;
    const auto ea = delta_p(fa, k, p, 100000, RandomStream(8)).estimate;
    CHECK(agree(ea, e1.scaled(std::pow(a, (k + 1) * n + k * p))));
}

TEST_CASE("scriptF in the two simplex cases")
{
    const auto f = interval(0, 1);
    CHECK(within(scriptF({f}, SimplexCase::cone, 1.0, 100000, RandomStream(9)), 0.5));
    const auto s = scriptF({f, f}, SimplexCase::simplex, 2.0, 100000, RandomStream(9));
    // (E|x−y|²)^{1/2} = 1/√6
    CHECK(within(s, 1.0 / std::sqrt(6.0)));
    CHECK_THROWS(scriptF({f}, SimplexCase::cone, 0.0, 10, RandomStream(9)));
}

TEST_CASE("stderr halves roughly as the sample count quadruples")
{
    const auto g = GaussianDensity::standard(3);
    double ratio_sum = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        const auto a = delta0_p({g, g}, 1.0, 5000, RandomStream(100 + rep)).estimate;
        const auto b = delta0_p({g, g}, 1.0, 10000, RandomStream(200 + rep)).estimate;
        ratio_sum += a.std_error / b.std_error;
    }
    const double r = ratio_sum / 10;
    CHECK(r >= 1.25);
    CHECK(r <= 1.6);
}

TEST_CASE("grassmann average of the ball is exact")
{
    for (int n = 2; n <= 4; ++n)
        for (int k = 1; k < n; ++k) {
            AverageOptions opt;
            opt.samples = 500;
            const auto e = grassmann_average_I({EllipsoidIndicator::ball(n)}, {{1.0}, {double(n)}}, k, RandomStream(10), opt);
            CHECK(e.value == doctest::Approx(std::pow(unit_ball_volume(k), n)).epsilon(1e-10));
            CHECK(e.std_error < 1e-9 * e.value);
        }
}

TEST_CASE("grassmann average: rotation and volume-preserving linear invariance")
{
    const int n = 3, k = 1;
    const auto f = anisotropic_ellipsoid(n);
    AverageOptions opt;
    opt.samples = 40000;
    const ExponentSpec spec{{1.0}, {3.0}};
    const auto before = grassmann_average_I({f}, spec, k, RandomStream(11), opt);
    Engine eng(12);
    const auto rotated = affine_image(f, AffineMap::linear(random_rotation(n, eng)));
    CHECK(agree(before, grassmann_average_I({rotated}, spec, k, RandomStream(13), opt)));
    const auto sheared = affine_image(f, AffineMap::linear(shear(n, 0.9)));
    CHECK(agree(before, grassmann_average_I({sheared}, spec, k, RandomStream(14), opt)));

    // Wrong exponent sum: shear changes the value.
    const ExponentSpec wrong{{1.0}, {2.0}};
    const auto w0 = grassmann_average_I({f}, wrong, k, RandomStream(15), opt);
    const auto w1 = grassmann_average_I({sheared}, wrong, k, RandomStream(16), opt);
    CHECK_FALSE(agree(w0, w1, 5.0));
}

TEST_CASE("affine average: counting flats that meet the ball")
{
    for (auto [n, k] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2}}) {
        AverageOptions opt;
        opt.samples = 100000;
        const auto e = affine_average_I({EllipsoidIndicator::ball(n)}, {{1.0}, {0.0}}, k, 1.5, RandomStream(17), opt);
        CHECK(within(e, unit_ball_volume(n - k)));
    }
}

TEST_CASE("affine average: cubed chord lengths of the disc")
{
    // ∫_M |chord|³ dF = ∫_{-1}^{1} (2√(1−t²))³ dt
    const double exact = oracle::integrate([](double t) { return std::pow(oracle::chord(t), 3); }, -1, 1);
    CHECK(exact == doctest::Approx(3 * pi).epsilon(1e-10));
    AverageOptions opt;
    opt.samples = 100000;
    const auto disc = EllipsoidIndicator::ball(2);
    const auto e = affine_average_I({disc}, {{1.0}, {3.0}}, 1, 1.0, RandomStream(18), opt);
    CHECK(within(e, exact));

    Vector b(2);
    b << 0.7, -0.4;
    const auto moved = affine_image(disc, AffineMap::translation(b));
    CHECK(within(affine_average_I({moved}, {{1.0}, {3.0}}, 1, 1.9, RandomStream(19), opt), exact));
    CHECK_THROWS(affine_average_I({moved}, {{1.0}, {3.0}}, 1, 1.0, RandomStream(19), opt));
}

TEST_CASE("affine average with an infinity slot")
{
    // (∫_F f)^3/‖f|_F‖_∞ for 2𝟙_B: 8|chord|³/2
    const auto f = EllipsoidIndicator::ball(2, 1.0, 2.0);
    AverageOptions opt;
    opt.samples = 50000;
    const auto e = affine_average_I({f, f}, {{1.0, kInfinity}, {3.0, -1.0}}, 1, 1.0, RandomStream(20), opt);
    CHECK(within(e, 4.0 * 3 * pi));
}

TEST_CASE("k-plane transform")
{
    const auto disc = EllipsoidIndicator::ball(2);
    for (double t : {0.0, 0.3, 0.8}) {
        Vector x(2);
        x << 0.2, t;
        const Flat line(Subspace::coordinate(2, 1, 0), x);
        CHECK(kplane_transform(*disc, line).value == doctest::Approx(oracle::chord(t)).epsilon(1e-12));
    }
    Vector far(2);
    far << 0.0, 1.5;
    CHECK(kplane_transform(*disc, Flat(Subspace::coordinate(2, 1, 0), far)).value == 0.0);

    const auto g = GaussianDensity::standard(2);
    Vector one(2);
    one << 0.0, 1.0;
    const double phi1 = std::exp(-0.5) / std::sqrt(2 * pi);
    CHECK(kplane_transform(*g, Flat(Subspace::coordinate(2, 1, 0), one)).value == doctest::Approx(phi1).epsilon(1e-12));
}

TEST_CASE("small-ball probabilities")
{
    const int n = 4;
    const auto g = GaussianDensity::standard(n);
    Engine eng(21);
    for (int k : {1, 2, 3}) {
        const Subspace e = sample_subspace(n, k, eng);
        const Vector z = Vector::Zero(n);
        for (double eps : {0.3, 0.8}) {
            const auto est = small_ball_probability(*g, e, z, eps, 100000, RandomStream(22));
            const double exact = boost::math::gamma_p(k / 2.0, k * eps * eps / 2.0);
            CHECK(within(est, exact));
        }
        CHECK(small_ball_probability(*g, e, z, 100.0, 1000, RandomStream(23)).value == 1.0);
        CHECK(small_ball_probability(*g, e, z, 0.0, 1000, RandomStream(23)).value == 0.0);
    }
    Vector off = Vector::Zero(n);
    off(n - 1) = 1.0;
    CHECK_THROWS(small_ball_probability(*g, Subspace::coordinate(n, 1), off, 0.5, 10, RandomStream(24)));
}
