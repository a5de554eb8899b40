#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "iglab/estimate.hpp"

namespace iglab {

enum class Verdict
{
    pass,
    fail,
    inconclusive,
};

const char* to_string(Verdict v);

/// Relative stderr above which a Monte Carlo verdict is withheld.
constexpr double kInconclusiveRelStderr = 0.1;

/// One verification: both sides, their ratio, a verdict and free-form diagnostics.
struct CheckReport
{
    std::string name;
    int n = 0;
    int k = 0;
    int q = 0;
    double p = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<std::string, double>> params;

    Estimate lhs;
    Estimate rhs;
    double ratio = std::numeric_limits<double>::quiet_NaN();
    Verdict verdict = Verdict::inconclusive;

    std::vector<std::pair<std::string, double>> diagnostics;
    std::vector<std::string> notes;

    void param(std::string key, double value) { params.emplace_back(std::move(key), value); }
    void diag(std::string key, double value) { diagnostics.emplace_back(std::move(key), value); }
    void note(std::string text) { notes.push_back(std::move(text)); }
    /// Looks up a diagnostic; NaN when absent.
    double diagnostic(const std::string& key) const;
};

/// Pass iff lhs <= rhs + z·(combined stderr); inconclusive when either side is too noisy to decide.
Verdict verdict_at_most(const Estimate& lhs, const Estimate& rhs, double z = 3.0);
/// Pass iff lhs >= rhs − z·(combined stderr).
Verdict verdict_at_least(const Estimate& lhs, const Estimate& rhs, double z = 3.0);
/// Pass iff |lhs/rhs − 1| <= max(band, z·relative stderr of the ratio).
Verdict verdict_equal(const Estimate& lhs, const Estimate& rhs, double band = 0.02, double z = 3.0);
/// Worst of several verdicts (fail > inconclusive > pass).
Verdict combine(Verdict a, Verdict b);

}  // namespace iglab
