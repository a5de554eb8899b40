#include "doctest.h"

#include <numbers>

#include "iglab/verify.hpp"
#include "oracles.hpp"

using namespace iglab;
using std::numbers::pi;

namespace {

bool within(const Estimate& e, double expected, double z = 3.0)
{
    return std::abs(e.value - expected) <= z * e.std_error + 1e-12 * std::abs(expected);
}

DensityPtr ellipsoid(int n, double amplitude, const Vector& center, std::vector<double> axes)
{
    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        m(i, i) = 1.0 / (axes[i] * axes[i]);
    return std::make_shared<EllipsoidIndicator>(amplitude, center, m);
}

// Uniform density on a centered box with the given side lengths.
DensityPtr skewed_box(const std::vector<double>& sides)
{
    std::vector<std::pair<double, double>> s;
    for (double a : sides)
        s.emplace_back(-a / 2, a / 2);
    return ProductDensity::boxes(s);
}

}  // namespace

TEST_CASE("nu normalization")
{
    for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}, {4, 2}}) {
        const auto at1 = check_nu_normalization(n, k, 20000, RandomStream(1));
        CHECK(at1.verdict == Verdict::pass);
        CHECK(at1.lhs.value == doctest::Approx(unit_ball_volume(n - k)));
        const auto at2 = check_nu_normalization(n, k, 100000, RandomStream(2), 2.0);
        CHECK(at2.verdict == Verdict::pass);
        CHECK(at2.lhs.std_error > 0.0);
    }
}

TEST_CASE("linear BP identity: Gaussian and disc in the plane")
{
    BpParams prm;
    prm.k = 1;
    prm.direct_samples = 100000;
    prm.outer_samples = 50000;

    // E|x| for the standard planar Gaussian and ∫_line t² φ(t) dt, both by quadrature
    const double lhs = oracle::integrate([](double r) { return r * r * std::exp(-r * r / 2); }, 0.0, 12.0);
    const double inner = oracle::integrate([](double t) { return t * t * std::exp(-t * t / 2) / (2 * pi); }, -12.0, 12.0);
    const auto g = check_bp_subspace({GaussianDensity::standard(2, 9.0)}, prm, RandomStream(3));
    CHECK(g.verdict == Verdict::pass);
    CHECK(within(g.lhs, lhs));
    CHECK(g.diagnostic("c_printed") == doctest::Approx(pi / 2));
    const double c_oracle = lhs / inner;
    CHECK(std::abs(g.diagnostic("c_hat") - c_oracle) <= 3 * g.diagnostic("c_hat_stderr"));

    // disc: ∫_B |x| = 2π/3, ∫_{-1}^{1} t² = 2/3
    const auto d = check_bp_subspace({EllipsoidIndicator::ball(2)}, prm, RandomStream(4));
    CHECK(d.verdict == Verdict::pass);
    CHECK(within(d.lhs, 2 * pi / 3));
    CHECK(std::abs(d.diagnostic("c_hat") - pi) <= 3 * d.diagnostic("c_hat_stderr"));
}

TEST_CASE("BP identity with k = n is trivial")
{
    BpParams prm;
    prm.k = 2;
    prm.direct_samples = 20000;
    prm.outer_samples = 20000;
    const auto r = check_bp_subspace({EllipsoidIndicator::ball(2)}, prm, RandomStream(5));
    CHECK(r.diagnostic("c_printed") == doctest::Approx(1.0));
    CHECK(std::abs(r.diagnostic("c_hat") - 1.0) <= 3 * r.diagnostic("c_hat_stderr"));
    CHECK(r.verdict == Verdict::pass);
    const auto f = check_bp_flat({EllipsoidIndicator::ball(2), EllipsoidIndicator::ball(2)}, prm, RandomStream(6));
    CHECK(std::abs(f.diagnostic("c_hat") - 1.0) <= 3 * f.diagnostic("c_hat_stderr"));
}

TEST_CASE("affine BP identity on the disc")
{
    BpParams prm;
    prm.k = 1;
    prm.direct_samples = 100000;
    prm.outer_samples = 50000;
    const auto ball = EllipsoidIndicator::ball(2);
    const auto r = check_bp_flat({ball, ball}, prm, RandomStream(7));
    // left: ∫∫_{B×B} |x − y| by nested quadrature of the chord distribution
    // right inner: ∫ over lines of L⁴/6, L the chord at distance d
    const double inner = oracle::integrate([](double d) { return std::pow(oracle::chord(d), 4) / 6; }, -1.0, 1.0);
    const double lhs = oracle::integrate2(
        [](double r1, double r2) {
            // |x − y| averaged over angle between points at radii r1, r2
            const double a = oracle::integrate(
                [&](double th) { return std::sqrt(r1 * r1 + r2 * r2 - 2 * r1 * r2 * std::cos(th)); }, 0.0, 2 * pi);
            return a * 2 * pi * r1 * r2;
        },
        0.0, 1.0, 0.0, 1.0);
    CHECK(lhs == doctest::Approx(128 * pi / 45).epsilon(1e-6));
    CHECK(within(r.lhs, lhs));
    CHECK(r.verdict == Verdict::pass);
    CHECK(std::abs(r.diagnostic("c_hat") - lhs / inner) <= 3 * r.diagnostic("c_hat_stderr"));
}

TEST_CASE("BP preconditions")
{
    BpParams prm;
    prm.k = 1;
    const auto ball = EllipsoidIndicator::ball(3);
    CHECK_THROWS(check_bp_subspace({ball, ball}, prm, RandomStream(1)));  // q > k
    prm.p = -3.0;
    CHECK_THROWS(check_bp_subspace({ball}, prm, RandomStream(1)));
    prm.p = kInfinity;
    CHECK_THROWS(check_bp_subspace({GaussianDensity::standard(3)}, prm, RandomStream(1)));  // unbounded
}

TEST_CASE("invariance checks detect a wrong exponent sum")
{
    const int n = 3;
    const auto f = ellipsoid(n, 1.0, Vector::Zero(n), {0.5, 1.0, 2.0});
    Matrix shear = Matrix::Identity(n, n);
    shear(0, 1) = 1.5;
    shear(1, 2) = -0.8;
    const auto good = check_linear_invariance({f}, {{1.0}, {3.0}}, 1, shear, 20000, RandomStream(8));
    CHECK(good.verdict == Verdict::pass);
    const auto bad = check_linear_invariance({f}, {{1.0}, {2.0}}, 1, shear, 20000, RandomStream(8));
    CHECK(bad.verdict == Verdict::fail);
    CHECK(bad.diagnostic("z") > 5.0);

    AffineMap g = AffineMap::linear(shear).then(AffineMap::translation(Vector::Constant(n, 0.7)));
    const auto agood = check_affine_invariance({f}, {{1.0}, {4.0}}, 1, g, 0.0, 20000, RandomStream(9));
    CHECK(agood.verdict == Verdict::pass);
    const auto abad = check_affine_invariance({f}, {{1.0}, {3.0}}, 1, g, 0.0, 20000, RandomStream(9));
    CHECK(abad.verdict == Verdict::fail);
    CHECK(abad.diagnostic("z") > 5.0);
}

TEST_CASE("Grinberg functional: balls, ellipsoids, products")
{
    FunctionalParams prm;
    prm.samples = 5000;
    for (int n = 2; n <= 4; ++n) {
        prm.k = 1;
        prm.p = n - 1;
        prm.equality = true;
        const auto r = check_grinberg_functional({EllipsoidIndicator::ball(n)}, prm, RandomStream(10));
        CHECK(r.lhs.value == doctest::Approx(std::pow(2.0, n)));
        CHECK(r.rhs.value == doctest::Approx(std::pow(2.0, n)));
        CHECK(r.verdict == Verdict::pass);
    }
    // common origin-symmetric ellipsoid, q = k, p = n − k
    const auto e = ellipsoid(3, 2.0, Vector::Zero(3), {0.4, 1.0, 1.7});
    prm.k = 2;
    prm.p = 1;
    const auto eq = check_grinberg_functional({e, e}, prm, RandomStream(11));
    CHECK(eq.verdict == Verdict::pass);
    CHECK(std::abs(eq.ratio - 1.0) <= 0.02);

    // bimodal product: strict
    std::vector<StepFactor> factors(3, StepFactor{-1.5, 1.5, {1.0, 0.0, 1.0}});
    const auto bimodal = std::make_shared<ProductDensity>(factors);
    prm.equality = false;
    prm.k = 1;
    prm.p = 2;
    const auto strict = check_grinberg_functional({bimodal}, prm, RandomStream(12));
    CHECK(strict.verdict == Verdict::pass);
    CHECK(strict.ratio < 0.95);

    prm.p = 3;  // p > n − k
    CHECK_THROWS(check_grinberg_functional({bimodal}, prm, RandomStream(1)));
}

TEST_CASE("Schneider functional: ball and shifted ellipsoid equality, Gaussian strict")
{
    FunctionalParams prm;
    prm.samples = 30000;
    prm.equality = true;
    for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
        prm.k = k;
        const auto r = check_schneider_functional(EllipsoidIndicator::ball(n), prm, RandomStream(13));
        INFO("n=", n, " k=", k, " ratio=", r.ratio);
        CHECK(r.verdict == Verdict::pass);
    }
    Vector c(3);
    c << 0.6, -0.3, 0.2;
    prm.k = 2;
    const auto shifted = check_schneider_functional(ellipsoid(3, 0.7, c, {0.5, 0.9, 1.3}), prm, RandomStream(14));
    CHECK(shifted.verdict == Verdict::pass);

    prm.equality = false;
    prm.k = 1;
    const auto g = check_schneider_functional(GaussianDensity::standard(2, 6.0), prm, RandomStream(15));
    CHECK(g.verdict == Verdict::pass);
    CHECK(g.ratio < 0.95);
    // the bound constant is ω_k^{n+1} over c·Δ_{n−k}(𝟙_{B^k})
    for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}, {4, 2}})
        CHECK(schneider_constant(n, k) ==
              doctest::Approx(std::pow(unit_ball_volume(k), n + 1) /
                              (bp_constant_surface({n, k, k}) * kingman_miles_delta(n, k))));
}

TEST_CASE("Gaussian sharpness against the closed form at (3,1)")
{
    const int n = 3, k = 1;
    const Matrix d = sharpness_covariance(n, k);
    const double s2 = d(0, 0);
    CHECK(gaussian_marginal_sup(d, Subspace::coordinate(n, k)) == doctest::Approx(std::pow(2 * pi, 1.0)));
    for (double s : {1.0, 1.5, 2.0, 3.0}) {
        const auto r = gaussian_sharpness_experiment(n, k, s, 100000, RandomStream(16));
        // θ₁ is uniform on [−1, 1] for a random line in ℝ³
        const double a = 1.0 / (2 * pi * s * s);
        const double exact = 1.0 - std::sqrt((1.0 - a) / (1.0 - s2));
        INFO("s=", s);
        CHECK(within(r.lhs, exact));
        CHECK(r.diagnostic("det_min") >= r.diagnostic("det_floor"));
        CHECK(r.diagnostic("det_max") <= 1.0);
        CHECK(r.diagnostic("coordinate_sup") == doctest::Approx(r.diagnostic("coordinate_expected")));
    }
    CHECK_THROWS(gaussian_sharpness_experiment(n, k, 0.5, 10, RandomStream(1)));
    CHECK_THROWS(gaussian_sharpness_experiment(n, k, 100.0, 10, RandomStream(1)));
}

TEST_CASE("Szarek cap in the plane matches the arcsine law")
{
    for (double eps : {0.05, 0.3, 0.9}) {
        const auto r = szarek_cap(2, 1, eps, 100000, RandomStream(17));
        CHECK(within(r.lhs, 2 * std::asin(eps) / pi));
        CHECK(r.verdict == Verdict::pass);
    }
    // no hits cannot refute a bound far below 3/N
    const auto rare = szarek_cap(4, 2, 0.01, 100, RandomStream(17));
    CHECK(rare.lhs.value == 0.0);
    CHECK(rare.verdict == Verdict::inconclusive);
}

TEST_CASE("marginal bound: ball passes, skewed box probe is exceptional")
{
    MarginalParams prm;
    prm.subspaces = 400;
    prm.points = 128;
    const auto ball = EllipsoidIndicator::ball(3, 1.0, 1.0 / unit_ball_volume(3));
    const auto r = marginal_bound_experiment(ball, prm, RandomStream(18));
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.lhs.value == 0.0);
    CHECK(r.diagnostic("c1_fit") < 3.0);

    for (auto [n, k] : {std::pair{3, 1}, {3, 2}, {4, 1}, {4, 2}}) {
        std::vector<double> sides = n == 3 ? std::vector<double>{1e-4, 1.0, 1e4}
                                           : std::vector<double>{1e-4, 1e-4, 1e4, 1e4};
        prm.k = k;
        prm.probes = {Subspace::coordinate(n, k)};
        const auto box = skewed_box(sides);
        const auto rep = marginal_bound_experiment(box, prm, RandomStream(19));
        INFO("n=", n, " k=", k, " c1=", rep.diagnostic("c1_fit"), " c2=", rep.diagnostic("c2_fit"),
             " frac=", rep.lhs.value);
        CHECK(rep.diagnostic("probe_0_detected") == 1.0);
        CHECK(rep.diagnostic("probe_0_exceptional") == 1.0);
        CHECK(rep.verdict == Verdict::pass);
    }

    // Markov envelopes shrink with s
    prm.k = 1;
    prm.probes.clear();
    prm.s = 50.0;
    const auto big = marginal_bound_experiment(skewed_box({0.1, 1.0, 10.0}), prm, RandomStream(20));
    CHECK(big.lhs.value == 0.0);
}

TEST_CASE("perturbation finds a good subspace near a bad one")
{
    const int n = 3, k = 1;
    const auto f = std::make_shared<GaussianDensity>(Vector::Zero(n), sharpness_covariance(n, k));
    PerturbationParams prm;
    prm.draws = 40;
    prm.samples = 2000;
    prm.eta = 0.5;
    const auto r = perturbation_experiment(f, Subspace::coordinate(n, k), prm, RandomStream(21));
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.diagnostic("best_distance") <= 0.5);
    CHECK(r.diagnostic("start_constant") > r.diagnostic("c_fit"));
}

TEST_CASE("rearrangement chain")
{
    MonotonicityParams prm;
    prm.samples = 40000;
    // fixed point
    const auto dn = EllipsoidIndicator::ball(2, unit_volume_ball_radius(2));
    const auto fixed = check_rearrangement_monotonicity({dn, dn}, prm, RandomStream(22));
    CHECK(fixed.verdict == Verdict::pass);
    CHECK(fixed.ratio == doctest::Approx(1.0).epsilon(0.02));
    CHECK(fixed.diagnostic("second_step") == 1.0);

    // shifted Gaussian: strictly larger than its rearrangement
    Vector mu(2);
    mu << 1.5, -1.0;
    const auto g = std::make_shared<GaussianDensity>(mu, Matrix::Identity(2, 2), 1.0, 6.0);
    const auto strict = check_rearrangement_monotonicity({g, g}, prm, RandomStream(23));
    CHECK(strict.verdict == Verdict::pass);
    CHECK(strict.ratio > 1.05);

    // normalized anisotropic indicator: sup 1, mass 1
    const double a0 = 1.0 / (pi * 1.0);  // semi-axes a0·1 = 1/π gives area 1
    const auto unit = ellipsoid(2, 1.0, Vector::Zero(2), {a0, 1.0});
    CHECK(unit->mass() == doctest::Approx(1.0));
    prm.simplex = SimplexCase::simplex;
    const auto chain = check_rearrangement_monotonicity({unit, unit, unit}, prm, RandomStream(24));
    CHECK(chain.verdict == Verdict::pass);
    CHECK(chain.diagnostic("second_step") == 1.0);
    // an area-one ellipsoid is a volume-preserving image of D_2, so the simplex functional cannot tell them apart
    CHECK(std::abs(chain.lhs.value - chain.rhs.value) <= 3 * std::hypot(chain.lhs.std_error, chain.rhs.std_error));

    const auto r = rearrangement(*unit, RandomStream(25));
    CHECK(check_equimeasurability(*unit, r, 20000, RandomStream(26)).verdict == Verdict::pass);
}
