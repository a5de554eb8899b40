#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "iglab/check.hpp"
#include "iglab/densities.hpp"

namespace iglab {

/// A configuration problem, located by line (0 when unknown) and field.
class ConfigError : public std::runtime_error
{
public:
    ConfigError(int line, std::string field, const std::string& message);
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

struct CheckSpec
{
    std::string name;
    nlohmann::json params = nlohmann::json::object();
    int line = 0;
};

struct RunConfig
{
    std::uint64_t seed = 1;
    int substreams = 8;
    int jobs = 1;
    std::string output_dir = "iglab-out";
    double budget_scale = 1.0;  // multiplies every sample count (floor 100)
    std::vector<CheckSpec> checks;
    std::map<std::string, nlohmann::json> densities;
    std::string base_dir = ".";  // for relative density file paths
    std::string source;          // raw text, hashed into the manifest
};

/**
 * Parses the flat config format:
 *
 *     key = <json value>           # top level: seed, substreams, jobs, output_dir, budget_scale, suite
 *     [density NAME]               # keys of a density spec
 *     [check NAME]                 # parameters of one check
 *
 * Bare words are read as strings. `suite = "paper-core"` prepends a
 * built-in suite. Unknown check names are rejected here.
 */
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");

/// Builds a density from its JSON spec; strings name [density] sections.
DensityPtr make_density(const nlohmann::json& spec, const RunConfig& config);

/// A prepared check: parameters validated, densities built, ready to sample.
using PreparedCheck = std::function<std::vector<CheckReport>(const RandomStream&)>;

struct CheckInfo
{
    std::string name;
    std::string description;
    std::vector<std::string> keys;
    std::function<PreparedCheck(const CheckSpec&, const RunConfig&)> prepare;
};

const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(const std::string& name);

/// Validates every check of the config before any sampling; throws ConfigError.
std::vector<PreparedCheck> prepare_all(const RunConfig& config);

/// Names of the built-in suites and their check lists.
std::vector<std::string> builtin_suite_names();
std::vector<CheckSpec> builtin_suite(const std::string& name);

/// The stream for check number `index`, independent of the other checks.
RandomStream check_stream(const RunConfig& config, std::size_t index, const std::string& name);

}  // namespace iglab
