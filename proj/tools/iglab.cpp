#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "iglab/report.hpp"
#include "iglab/suite.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int)
{
    g_stop = true;
}

int run_command(const std::string& path, std::optional<std::uint64_t> seed, std::optional<int> jobs, bool quiet)
{
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot read config " << path << "\n";
        return 1;
    }
    std::stringstream ss;
    ss << in.rdbuf();

    iglab::RunConfig cfg;
    try {
        const auto base = std::filesystem::path(path).parent_path();
        cfg = iglab::parse_config(ss.str(), base.empty() ? "." : base.string());
        if (const char* dir = std::getenv("IGLAB_OUTPUT_DIR"); dir && *dir)
            cfg.output_dir = dir;
        if (const char* j = std::getenv("IGLAB_JOBS"); j && *j) {
            const int v = std::atoi(j);
            if (v < 1)
                throw iglab::ConfigError(0, "IGLAB_JOBS", "expected a positive integer");
            cfg.jobs = v;
        }
        if (seed)
            cfg.seed = *seed;
        if (jobs)
            cfg.jobs = *jobs;
        // the manifest hash covers the overrides too
        cfg.source += "\n#seed=" + std::to_string(cfg.seed);
        iglab::prepare_all(cfg);
    } catch (const iglab::ConfigError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 1;
    }

    std::signal(SIGINT, on_sigint);
    iglab::RunHooks hooks;
    hooks.keep_going = [] { return !g_stop.load(); };
    if (!quiet)
        hooks.log = [](const std::string& line) { std::cerr << line << "\n"; };

    try {
        const auto res = iglab::run_suite(cfg, hooks);
        if (res.interrupted)
            std::cerr << "interrupted; partial results in " << cfg.output_dir << "\n";
        std::cerr << res.reports.size() << " reports, exit status " << res.status << "\n";
        return res.interrupted ? 130 : res.status;
    } catch (const iglab::ConfigError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int table_command(const std::vector<std::string>& paths, const std::string& tsv_path)
{
    try {
        std::vector<std::string> labels;
        std::vector<std::vector<iglab::ResultRow>> files;
        for (const auto& p : paths) {
            labels.push_back(std::to_string(labels.size() + 1));
            files.push_back(iglab::read_results_csv(p));
        }
        std::cout << iglab::render_table(labels, files, false);
        if (!tsv_path.empty()) {
            std::ofstream out(tsv_path);
            if (!out)
                throw std::runtime_error("cannot write " + tsv_path);
            out << iglab::render_table(labels, files, true);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

void list_checks()
{
    for (const auto& c : iglab::check_registry()) {
        std::cout << c.name << "\n    " << c.description << "\n    keys:";
        for (const auto& k : c.keys)
            std::cout << ' ' << k;
        std::cout << "\n";
    }
    std::cout << "\nsuites:";
    for (const auto& s : iglab::builtin_suite_names())
        std::cout << ' ' << s;
    std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"integral-geometry verification lab"};
    app.set_version_flag("--version", iglab::kVersion);
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run the checks of a config file");
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    bool quiet = false;
    run->add_option("--config", config, "config file")->required();
    run->add_option("--seed", seed, "override the master seed");
    run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    run->add_flag("-q,--quiet", quiet, "no progress output");

    auto* table = app.add_subcommand("table", "compare results.csv files");
    std::vector<std::string> csvs;
    std::string tsv;
    table->add_option("csv", csvs, "results files")->required()->check(CLI::ExistingFile);
    table->add_option("--tsv", tsv, "also write a TSV table here");

    app.add_subcommand("list-checks", "list available checks and suites");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(run))
        return run_command(config, seed, jobs, quiet);
    if (app.got_subcommand(table))
        return table_command(csvs, tsv);
    list_checks();
    return 0;
}
