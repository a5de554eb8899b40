#include "iglab/check.hpp"

#include <algorithm>
#include <cmath>

namespace iglab {

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return "?";
}

double CheckReport::diagnostic(const std::string& key) const
{
    for (const auto& [k, v] : diagnostics)
        if (k == key)
            return v;
    return std::numeric_limits<double>::quiet_NaN();
}

namespace {

bool too_noisy(const Estimate& e)
{
    return !e.is_exact() && e.relative_stderr() > kInconclusiveRelStderr;
}

}  // namespace

Verdict verdict_at_most(const Estimate& lhs, const Estimate& rhs, double z)
{
    const double band = z * std::hypot(lhs.std_error, rhs.std_error);
    if (lhs.value <= rhs.value + band)
        return too_noisy(rhs) ? Verdict::inconclusive : Verdict::pass;
    return too_noisy(lhs) || too_noisy(rhs) ? Verdict::inconclusive : Verdict::fail;
}

Verdict verdict_at_least(const Estimate& lhs, const Estimate& rhs, double z)
{
    return verdict_at_most(rhs, lhs, z);
}

Verdict verdict_equal(const Estimate& lhs, const Estimate& rhs, double band, double z)
{
    const Estimate r = ratio(lhs, rhs);
    if (!std::isfinite(r.value))
        return Verdict::fail;
    const double rel = r.value != 0.0 ? r.std_error / std::abs(r.value) : 0.0;
    if (rel > kInconclusiveRelStderr)
        return Verdict::inconclusive;
    return std::abs(r.value - 1.0) <= std::max(band, z * rel) ? Verdict::pass : Verdict::fail;
}

Verdict combine(Verdict a, Verdict b)
{
    if (a == Verdict::fail || b == Verdict::fail)
        return Verdict::fail;
    if (a == Verdict::inconclusive || b == Verdict::inconclusive)
        return Verdict::inconclusive;
    return Verdict::pass;
}

}  // namespace iglab
