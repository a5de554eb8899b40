#include "iglab/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace iglab {

double ExponentSpec::constraint_sum() const
{
    double s = 0.0;
    for (std::size_t i = 0; i < p.size() && i < alpha.size(); ++i)
        if (std::isfinite(p[i]))
            s += alpha[i] / p[i];
    return s;
}

void ExponentSpec::require_sum(double target) const
{
    if (p.size() != alpha.size() || p.empty())
        throw std::invalid_argument("ExponentSpec: p and alpha must be non-empty and of equal length");
    for (double pi : p)
        if (!(pi > 0.0))
            throw std::invalid_argument("ExponentSpec: every p_i must be positive");
    if (std::abs(constraint_sum() - target) > 1e-10)
        throw std::invalid_argument("ExponentSpec: sum alpha_i/p_i is " + std::to_string(constraint_sum()) +
                                    ", expected " + std::to_string(target));
}

namespace {

int common_dim(const std::vector<DensityPtr>& fs)
{
    if (fs.empty())
        throw std::invalid_argument("functionals: need at least one density");
    const int n = fs.front()->dim();
    for (const auto& f : fs)
        if (!f || f->dim() != n)
            throw std::invalid_argument("functionals: densities must share the ambient dimension");
    return n;
}

double mass_product(const std::vector<DensityPtr>& fs)
{
    double m = 1.0;
    for (const auto& f : fs)
        m *= f->mass();
    return m;
}

}  // namespace

TailEstimate simplex_moment(const std::vector<DensityPtr>& fs, double p, bool with_origin, std::size_t samples,
                            const RandomStream& rng)
{
    const int n = common_dim(fs);
    const int m = static_cast<int>(fs.size());
    const int q = with_origin ? m : m - 1;
    if (q < 1 || q > n)
        throw std::invalid_argument("simplex_moment: simplex dimension must lie in [1, n]");
    if (!(p > -(n - q + 1)))
        throw std::domain_error("simplex_moment: p must exceed -(n-q+1) for integrability");
    std::vector<double> values;
    const Estimate e = mc_mean(
        rng, samples,
        [&](Engine& eng) {
            Matrix pts(n, m);
            for (int j = 0; j < m; ++j)
                pts.col(j) = fs[j]->sample(eng);
            const double v = with_origin ? simplex0_volume(pts) : simplex_volume(pts);
            return p == 0.0 ? 1.0 : std::pow(v, p);
        },
        &values);
    return {e.scaled(mass_product(fs)), tail_share(std::move(values))};
}

TailEstimate delta0_p(const std::vector<DensityPtr>& fs, double p, std::size_t samples, const RandomStream& rng)
{
    const int n = common_dim(fs);
    const int q = static_cast<int>(fs.size());
    if (q > n)
        throw std::invalid_argument("delta0_p: more points than dimensions");
    if (!(p > -(n - q + 1)))
        throw std::domain_error("delta0_p: p must exceed -(n-q+1) for integrability");
    return simplex_moment(fs, p, true, samples, rng);
}

TailEstimate delta_p(const std::vector<DensityPtr>& fs, double p, std::size_t samples, const RandomStream& rng)
{
    const int n = common_dim(fs);
    const int k = static_cast<int>(fs.size()) - 1;
    if (k < 1 || k > n)
        throw std::invalid_argument("delta_p: need 2 <= k+1 <= n+1 points");
    if (!(p >= 1.0))
        throw std::domain_error("delta_p: p must be at least 1");
    return simplex_moment(fs, p, false, samples, rng);
}

TailEstimate delta_p(const DensityPtr& f, int k, double p, std::size_t samples, const RandomStream& rng)
{
    return delta_p(std::vector<DensityPtr>(k + 1, f), p, samples, rng);
}

Estimate scriptF(const std::vector<DensityPtr>& fs, SimplexCase c, double p, std::size_t samples,
                 const RandomStream& rng)
{
    if (!(p > 0.0))
        throw std::domain_error("scriptF: only p > 0 is supported");
    const int n = common_dim(fs);
    const int m = static_cast<int>(fs.size());
    if (c == SimplexCase::cone && m > n)
        throw std::invalid_argument("scriptF: cone case needs k <= n");
    const Estimate raw = simplex_moment(fs, p, c == SimplexCase::cone, samples, rng).estimate;
    return power(raw.scaled(1.0 / mass_product(fs)), 1.0 / p);
}

double kingman_miles_delta(int n, int k)
{
    if (k < 1 || k >= n)
        throw std::invalid_argument("kingman_miles_delta: need 1 <= k <= n-1");
    const double log_v = (k + 1) * log_unit_ball_volume(n) + log_unit_ball_volume(k * (n + 1)) -
                         log_unit_ball_volume(n * (k + 1));
    return std::exp(log_v) / bp_constant_surface({n, k, k});
}

Estimate restriction_norm(const DensityModel& f, const AffineSlice& slice, double p, const SliceOptions& options)
{
    if (std::isinf(p)) {
        const auto st = restriction_stats(f, slice, 1.0, options);
        return st.linf;
    }
    const auto st = restriction_stats(f, slice, p, options);
    if (st.lp.value <= 0.0)
        return Estimate{0.0, 0.0, st.lp.samples};
    return p == 1.0 ? st.lp : power(st.lp, 1.0 / p);
}

namespace {

double integrand(const std::vector<DensityPtr>& fs, const ExponentSpec& spec, const AffineSlice& slice,
                 const AverageOptions& options, Engine& eng)
{
    SliceOptions so;
    so.method = options.method;
    so.samples = options.slice_samples;
    so.engine = &eng;
    double prod = 1.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const double norm = restriction_norm(*fs[i], slice, spec.p[i], so).value;
        if (!(norm > 0.0))
            return 0.0;
        prod *= spec.alpha[i] == 0.0 ? 1.0 : std::pow(norm, spec.alpha[i]);
    }
    return prod;
}

void check_spec(const std::vector<DensityPtr>& fs, const ExponentSpec& spec, int k)
{
    const int n = common_dim(fs);
    if (spec.p.size() != fs.size() || spec.alpha.size() != fs.size())
        throw std::invalid_argument("average: one (p, alpha) pair per density");
    for (double p : spec.p)
        if (!(p > 0.0))
            throw std::invalid_argument("average: p_i must be positive");
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("average: need 1 <= k <= n-1");
}

}  // namespace

Estimate grassmann_average_I(const std::vector<DensityPtr>& fs, const ExponentSpec& spec, int k,
                             const RandomStream& rng, const AverageOptions& options)
{
    check_spec(fs, spec, k);
    const int n = fs.front()->dim();
    return mc_mean(rng, options.samples, [&](Engine& eng) {
        const Subspace e = sample_subspace(n, k, eng);
        return integrand(fs, spec, slice_of(e), options, eng);
    });
}

Estimate affine_average_I(const std::vector<DensityPtr>& fs, const ExponentSpec& spec, int k, double window,
                          const RandomStream& rng, const AverageOptions& options)
{
    check_spec(fs, spec, k);
    for (const auto& f : fs)
        if (!(f->support_radius() <= window))
            throw std::invalid_argument("affine_average_I: window smaller than a support radius");
    const int n = fs.front()->dim();
    const DensityModel& lead = *fs.front();
    if (options.through_points && lead.has_exact_slices()) {
        SliceOptions exact;
        exact.method = SliceMethod::exact;
        const double mass = lead.mass();
        return mc_mean(rng, options.samples, [&](Engine& eng) {
            const Flat flat(sample_subspace(n, k, eng), lead.sample(eng));
            const AffineSlice slice = slice_of(flat);
            const double t = restriction_stats(lead, slice, 1.0, exact).lp.value;
            if (!(t > 0.0))
                return 0.0;
            return mass / t * integrand(fs, spec, slice, options, eng);
        });
    }
    return mc_mean(rng, options.samples, [&](Engine& eng) {
        const WeightedFlat wf = sample_flat(n, k, window, eng);
        return wf.weight * integrand(fs, spec, slice_of(wf.flat), options, eng);
    });
}

Estimate kplane_transform(const DensityModel& f, const Flat& flat, const SliceOptions& options)
{
    return restriction_stats(f, flat, options).lp;
}

Estimate small_ball_probability(const DensityModel& f, const Subspace& e, const Vector& z, double eps,
                                std::size_t samples, const RandomStream& rng)
{
    if (z.size() != e.ambient_dim() || (z - project(e, z)).norm() > 1e-10 * std::max(1.0, z.norm()))
        throw std::invalid_argument("small_ball_probability: z must lie in E");
    if (!(eps >= 0.0))
        throw std::invalid_argument("small_ball_probability: eps must be non-negative");
    const double radius = eps * std::sqrt(static_cast<double>(e.dim()));
    std::uint64_t hits = 0;
    const int blocks = rng.substreams();
    std::vector<std::uint64_t> block_hits(blocks, 0);
    parallel_for(blocks, rng.jobs(), [&](int s) {
        Engine eng = rng.substream_engine(s);
        const std::size_t begin = samples * s / blocks;
        const std::size_t end = samples * (s + 1) / blocks;
        for (std::size_t i = begin; i < end; ++i) {
            const Vector x = f.sample(eng);
            if ((e.basis().transpose() * (x - z)).norm() <= radius)
                ++block_hits[s];
        }
    });
    for (auto h : block_hits)
        hits += h;
    return proportion(hits, samples);
}

}  // namespace iglab
