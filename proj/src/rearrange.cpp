#include "iglab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace iglab {

std::vector<double> geometric_levels(double sup, int levels, double floor_ratio)
{
    if (levels < 2)
        throw std::invalid_argument("rearrangement: need at least 2 levels");
    if (!(sup > 0.0) || !(floor_ratio > 0.0 && floor_ratio < 1.0))
        throw std::invalid_argument("rearrangement: need sup > 0 and floor ratio in (0,1)");
    std::vector<double> t(levels);
    const double lo = std::log(sup * floor_ratio);
    const double hi = std::log(sup);
    for (int i = 0; i < levels; ++i)
        t[i] = std::exp(lo + (hi - lo) * i / (levels - 1));
    t.back() = sup;
    return t;
}

LevelProfile level_profile(const DensityModel& f, std::vector<double> thresholds, std::size_t samples,
                           const RandomStream& rng)
{
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw std::invalid_argument("level_profile: thresholds must be increasing");
    LevelProfile out;
    out.thresholds = std::move(thresholds);

    bool exact = true;
    std::vector<Estimate> vols;
    for (double t : out.thresholds) {
        const auto v = f.superlevel_volume(t);
        if (!v) {
            exact = false;
            break;
        }
        vols.push_back(Estimate::exact(*v));
    }
    if (exact) {
        out.superlevel_volumes = std::move(vols);
        out.exact = true;
        return out;
    }

    const double radius = f.support_radius();
    if (!std::isfinite(radius))
        throw std::domain_error("level_profile: unbounded support and no superlevel oracle");
    if (samples == 0)
        throw std::invalid_argument("level_profile: need samples > 0");
    const int n = f.dim();
    const int blocks = rng.substreams();
    std::vector<double> values(samples);
    parallel_for(blocks, rng.jobs(), [&](int s) {
        Engine eng = rng.substream_engine(s);
        const std::size_t begin = samples * s / blocks;
        const std::size_t end = samples * (s + 1) / blocks;
        for (std::size_t i = begin; i < end; ++i)
            values[i] = f.eval(radius * uniform_in_ball(n, eng));
    });
    std::sort(values.begin(), values.end());
    const double box = unit_ball_volume(n) * std::pow(radius, n);
    for (double t : out.thresholds) {
        const auto above = static_cast<std::uint64_t>(values.end() - std::upper_bound(values.begin(), values.end(), t));
        out.superlevel_volumes.push_back(proportion(above, samples).scaled(box));
    }
    return out;
}

Rearrangement rearrangement(const DensityModel& f, const RandomStream& rng, const RearrangementOptions& options)
{
    const int n = f.dim();
    const double sup = f.sup();
    const std::vector<double> levels = geometric_levels(sup, options.levels, options.floor_ratio);

    // Levels interleaved with their midpoints for Simpson's rule.
    std::vector<double> grid;
    grid.reserve(2 * levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i > 0)
            grid.push_back(0.5 * (levels[i - 1] + levels[i]));
        grid.push_back(levels[i]);
    }
    LevelProfile prof = level_profile(f, grid, options.samples, rng);
    auto vol = [&](std::size_t j) { return prof.superlevel_volumes[j].value; };

    // Walk shells outward: shell i lies between the balls of volume V(t_{i+1}) and V(t_i).
    std::vector<double> edges{0.0};
    std::vector<double> values;
    const std::size_t top = levels.size() - 1;
    if (vol(2 * top) > 0.0) {
        // {f > sup} should be empty; tolerate an atom at the top level.
        edges.push_back(ball_radius_for_volume(n, vol(2 * top)));
        values.push_back(sup);
    }
    const double tiny = 1e-14 * std::max(vol(0), 1e-300);
    for (std::size_t i = top; i-- > 0;) {
        const double v_lo = vol(2 * i);
        const double v_hi = vol(2 * i + 2);
        const double shell = v_lo - v_hi;
        if (shell <= tiny)
            continue;
        const double t0 = levels[i];
        const double t1 = levels[i + 1];
        // V jumps to 0 at t = sup for indicators, so the top interval uses the midpoint rule.
        const double area = i + 1 == top ? (t1 - t0) * vol(2 * i + 1)
                                         : (t1 - t0) / 6.0 * (v_lo + 4.0 * vol(2 * i + 1) + v_hi);
        double value = t0 + (area - (t1 - t0) * v_hi) / shell;
        value = std::clamp(value, t0, t1);
        if (!values.empty())
            value = std::min(value, values.back());
        const double r = ball_radius_for_volume(n, v_lo);
        if (!(r > edges.back()))
            continue;
        edges.push_back(r);
        values.push_back(value);
    }
    if (values.empty())
        throw std::domain_error("rearrangement: no superlevel set with positive volume");

    Rearrangement out;
    out.density = std::make_shared<RadialGridDensity>(n, std::move(edges), std::move(values));
    out.profile = std::move(prof);
    if (!out.density->nonincreasing())
        throw std::logic_error("rearrangement: profile is not nonincreasing");
    return out;
}

namespace {

double integrate_pieces(const std::function<double(double)>& g, std::vector<double> cuts, double a, double b)
{
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        if (lo < a || hi > b || !(hi > lo))
            continue;
        sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, lo, hi, 15, 1e-12);
    }
    return sum;
}

}  // namespace

CheckReport bathtub_check(const std::function<double(double)>& profile, double support, int n,
                          const std::function<double(double)>& phi, std::vector<double> breaks)
{
    if (n < 1 || !(support > 0.0) || !std::isfinite(support))
        throw std::invalid_argument("bathtub_check: need n >= 1 and a finite support");
    const double rn = unit_volume_ball_radius(n);
    breaks.push_back(rn);
    const double hi = std::max(support, rn);

    const double moment = integrate_pieces([&](double r) { return profile(r) * std::pow(r, n - 1); }, breaks, 0.0, hi);
    const double target = std::pow(rn, n) / n;
    if (std::abs(moment - target) > 1e-6 * target)
        throw std::invalid_argument("bathtub_check: profile does not satisfy the moment constraint");

    const double lhs = integrate_pieces([&](double r) { return phi(r) * profile(r) * std::pow(r, n - 1); }, breaks, 0.0, hi);
    const double rhs = integrate_pieces([&](double r) { return phi(r) * std::pow(r, n - 1); }, breaks, 0.0, rn);

    CheckReport rep;
    rep.name = "bathtub";
    rep.n = n;
    rep.lhs = Estimate::exact(lhs);
    rep.rhs = Estimate::exact(rhs);
    rep.ratio = lhs / rhs;
    rep.verdict = lhs >= rhs - 1e-9 * std::abs(rhs) ? Verdict::pass : Verdict::fail;
    rep.diag("moment", moment);
    rep.diag("gap", lhs - rhs);
    return rep;
}

}  // namespace iglab
