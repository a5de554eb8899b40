#include "iglab/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "iglab/random.hpp"

namespace iglab {

using nlohmann::json;
namespace fs = std::filesystem;

const char* const kVersion = "0.1.0";

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string extra_params(const CheckReport& rep)
{
    std::string out;
    for (const auto& [key, value] : rep.params) {
        if (!out.empty())
            out += ';';
        out += key + '=' + format_number(value);
    }
    return out;
}

// Splits one CSV line; fields written by this module never need quoting,
// but quoted fields from other tools are accepted.
std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else if (c != '\r') {
            out.back() += c;
        }
    }
    return out;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

json number_json(double v)
{
    if (std::isfinite(v))
        return v;
    return format_number(v);
}

json estimate_json(const Estimate& e)
{
    return {{"value", number_json(e.value)}, {"stderr", number_json(e.std_error)}, {"samples", e.samples}};
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

std::string results_csv_header()
{
    return "check,n,k,q,p,extra,lhs,lhs_stderr,rhs,rhs_stderr,ratio,verdict\n";
}

std::string results_csv_row(const CheckReport& rep)
{
    std::ostringstream os;
    os << csv_field(rep.name) << ',' << rep.n << ',' << rep.k << ',' << rep.q << ',' << format_number(rep.p) << ','
       << csv_field(extra_params(rep)) << ',' << format_number(rep.lhs.value) << ','
       << format_number(rep.lhs.std_error) << ',' << format_number(rep.rhs.value) << ','
       << format_number(rep.rhs.std_error) << ',' << format_number(rep.ratio) << ',' << to_string(rep.verdict)
       << '\n';
    return os.str();
}

json report_json(const CheckReport& rep)
{
    json params = json::object();
    for (const auto& [key, value] : rep.params)
        params[key] = number_json(value);
    json diags = json::object();
    for (const auto& [key, value] : rep.diagnostics)
        diags[key] = number_json(value);
    return {{"check", rep.name},
            {"n", rep.n},
            {"k", rep.k},
            {"q", rep.q},
            {"p", number_json(rep.p)},
            {"params", params},
            {"lhs", estimate_json(rep.lhs)},
            {"rhs", estimate_json(rep.rhs)},
            {"ratio", number_json(rep.ratio)},
            {"verdict", to_string(rep.verdict)},
            {"diagnostics", diags},
            {"notes", rep.notes}};
}

std::string config_hash(const std::string& text)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << hash_tag(text);
    return os.str();
}

int exit_status(const std::vector<CheckReport>& reports)
{
    bool inconclusive = false;
    for (const auto& r : reports) {
        if (r.verdict == Verdict::fail)
            return 2;
        inconclusive = inconclusive || r.verdict == Verdict::inconclusive;
    }
    return inconclusive ? 3 : 0;
}

json manifest_json(const RunConfig& config, const std::vector<CheckTiming>& timings,
                   const std::vector<CheckReport>& reports, bool interrupted)
{
    json checks = json::array();
    double total = 0.0;
    for (const auto& t : timings) {
        checks.push_back({{"check", t.name}, {"reports", t.reports}, {"seconds", t.seconds}});
        total += t.seconds;
    }
    std::map<std::string, int> counts{{"pass", 0}, {"fail", 0}, {"inconclusive", 0}};
    for (const auto& r : reports)
        ++counts[to_string(r.verdict)];
    return {{"version", kVersion},
            {"config_hash", config_hash(config.source)},
            {"seed", config.seed},
            {"substreams", config.substreams},
            {"jobs", config.jobs},
            {"budget_scale", config.budget_scale},
            {"checks", checks},
            {"totals",
             {{"checks_planned", config.checks.size()},
              {"checks_run", timings.size()},
              {"reports", reports.size()},
              {"pass", counts["pass"]},
              {"fail", counts["fail"]},
              {"inconclusive", counts["inconclusive"]},
              {"seconds", total}}},
            {"interrupted", interrupted},
            {"exit_status", exit_status(reports)}};
}

RunResult run_suite(const RunConfig& config, const RunHooks& hooks)
{
    // validate everything before any sampling
    const auto prepared = prepare_all(config);

    const fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir / "reports", ec);
    if (ec)
        throw std::runtime_error("cannot create " + (dir / "reports").string() + ": " + ec.message());

    std::ofstream csv(dir / "results.csv", std::ios::binary);
    if (!csv)
        throw std::runtime_error("cannot write " + (dir / "results.csv").string());
    csv << results_csv_header() << std::flush;

    RunResult result;
    auto write_manifest = [&] {
        write_file(dir / "manifest.json",
                   manifest_json(config, result.timings, result.reports, result.interrupted).dump(2) + "\n");
    };

    for (std::size_t i = 0; i < prepared.size(); ++i) {
        if (hooks.keep_going && !hooks.keep_going()) {
            result.interrupted = true;
            break;
        }
        const auto& name = config.checks[i].name;
        if (hooks.log)
            hooks.log("[" + std::to_string(i + 1) + "/" + std::to_string(prepared.size()) + "] " + name);

        const auto t0 = std::chrono::steady_clock::now();
        const auto reports = prepared[i](check_stream(config, i, name));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        json arr = json::array();
        for (const auto& r : reports) {
            csv << results_csv_row(r);
            arr.push_back(report_json(r));
            if (hooks.log)
                hooks.log("    " + std::string(to_string(r.verdict)) + "  ratio=" + format_number(r.ratio));
        }
        csv.flush();

        char stem[32];
        std::snprintf(stem, sizeof stem, "%03zu_", i + 1);
        write_file(dir / "reports" / (stem + name + ".json"), arr.dump(2) + "\n");

        result.timings.push_back({name, reports.size(), secs});
        result.reports.insert(result.reports.end(), reports.begin(), reports.end());
        write_manifest();
    }
    if (hooks.keep_going && !hooks.keep_going())
        result.interrupted = true;
    write_manifest();
    result.status = exit_status(result.reports);
    return result;
}

std::vector<ResultRow> read_results_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file");
    const auto header = split_csv(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i)
        col[header[i]] = i;
    for (const char* need : {"check", "n", "k", "q", "p", "extra", "ratio", "verdict"})
        if (!col.count(need))
            throw std::runtime_error(path + ": missing column " + need);

    std::vector<ResultRow> rows;
    std::map<std::string, int> seen;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto f = split_csv(line);
        if (f.size() != header.size())
            throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": wrong field count");
        ResultRow row;
        row.fields = f;
        row.key = f[col["check"]] + "," + f[col["n"]] + "," + f[col["k"]] + "," + f[col["q"]] + "," + f[col["p"]] +
                  "," + f[col["extra"]];
        // identical parameter sets keep their order of appearance
        const int dup = seen[row.key]++;
        if (dup > 0)
            row.key += "#" + std::to_string(dup + 1);
        const auto& r = f[col["ratio"]];
        row.ratio = r == "nan" ? std::nan("") : r == "inf" ? kInfinity : r == "-inf" ? -kInfinity : std::stod(r);
        row.verdict = f[col["verdict"]];
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_table(const std::vector<std::string>& labels, const std::vector<std::vector<ResultRow>>& files,
                         bool tsv)
{
    // union of keys in first-seen order
    std::vector<std::string> keys;
    std::map<std::string, std::vector<const ResultRow*>> by_key;
    for (std::size_t fi = 0; fi < files.size(); ++fi)
        for (const auto& row : files[fi]) {
            auto& slot = by_key[row.key];
            if (slot.empty()) {
                keys.push_back(row.key);
                slot.assign(files.size(), nullptr);
            }
            slot[fi] = &row;
        }

    std::vector<std::string> head{"check", "n", "k", "q", "p", "extra"};
    for (const auto& l : labels) {
        head.push_back("ratio[" + l + "]");
        head.push_back("verdict[" + l + "]");
    }
    const bool delta = files.size() == 2;
    if (delta)
        head.push_back("delta");

    std::vector<std::vector<std::string>> cells{head};
    for (const auto& key : keys) {
        std::vector<std::string> row;
        std::string base = key.substr(0, key.find('#'));
        std::size_t pos = 0;
        for (int c = 0; c < 5; ++c) {
            const auto next = base.find(',', pos);
            row.push_back(base.substr(pos, next - pos));
            pos = next + 1;
        }
        row.push_back(base.substr(pos));
        const auto& slot = by_key[key];
        for (const auto* r : slot) {
            row.push_back(r ? format_number(r->ratio) : "-");
            row.push_back(r ? r->verdict : "-");
        }
        if (delta)
            row.push_back(slot[0] && slot[1] ? format_number(slot[1]->ratio - slot[0]->ratio) : "-");
        cells.push_back(std::move(row));
    }

    std::ostringstream os;
    if (tsv) {
        for (const auto& row : cells) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "\t" : "") << row[i];
            os << '\n';
        }
        return os.str();
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : cells)
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size())
                line += std::string(width[i] - row[i].size() + 2, ' ');
        }
        os << line << '\n';
    }
    return os.str();
}

}  // namespace iglab
