#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iglab/check.hpp"
#include "iglab/suite.hpp"

namespace iglab {

extern const char* const kVersion;

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

std::string results_csv_header();
std::string results_csv_row(const CheckReport& rep);

/// Full report, diagnostics included; non-finite numbers become strings.
nlohmann::json report_json(const CheckReport& rep);

/// FNV-1a of the config text, as 16 hex digits.
std::string config_hash(const std::string& text);

/// Exit status for a set of verdicts: 0 all pass, 2 any fail, 3 inconclusive without failures.
int exit_status(const std::vector<CheckReport>& reports);

struct CheckTiming
{
    std::string name;
    std::size_t reports = 0;
    double seconds = 0.0;
};

nlohmann::json manifest_json(const RunConfig& config, const std::vector<CheckTiming>& timings,
                             const std::vector<CheckReport>& reports, bool interrupted);

/// Callbacks between checks; returning false stops the run (interrupt).
struct RunHooks
{
    std::function<bool()> keep_going;
    std::function<void(const std::string&)> log;
};

struct RunResult
{
    std::vector<CheckReport> reports;
    std::vector<CheckTiming> timings;
    bool interrupted = false;
    int status = 0;
};

/**
 * Runs every check and writes results.csv, reports/NNN_name.json and
 * manifest.json into config.output_dir. Rows are flushed after each check.
 */
RunResult run_suite(const RunConfig& config, const RunHooks& hooks = {});

/// One parsed results.csv row.
struct ResultRow
{
    std::string key;  // check,n,k,q,p,extra
    std::vector<std::string> fields;
    double ratio = 0.0;
    std::string verdict;
};

std::vector<ResultRow> read_results_csv(const std::string& path);

/// Aligned comparison of several result files; a delta column when there are two.
std::string render_table(const std::vector<std::string>& labels, const std::vector<std::vector<ResultRow>>& files,
                         bool tsv);

}  // namespace iglab
