#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "iglab/densities.hpp"

namespace iglab {

namespace {

struct Line
{
    int number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text)
{
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream ls(raw);
        Line line{number, {}};
        for (std::string tok; ls >> tok;)
            line.tokens.push_back(tok);
        if (!line.tokens.empty())
            lines.push_back(std::move(line));
    }
    return lines;
}

[[noreturn]] void fail(int line, const std::string& what)
{
    throw std::invalid_argument("grid density, line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& tok, int line)
{
    double v = 0.0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || ptr != end)
        fail(line, "not a number: '" + tok + "'");
    if (!std::isfinite(v))
        fail(line, "non-finite value '" + tok + "'");
    return v;
}

double parse_height(const std::string& tok, int line)
{
    const double v = parse_number(tok, line);
    if (v < 0.0)
        fail(line, "negative value '" + tok + "'");
    return v;
}

std::map<std::string, std::string> header_fields(const Line& line)
{
    std::map<std::string, std::string> fields;
    for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        const auto& tok = line.tokens[i];
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0)
            fail(line.number, "expected key=value, got '" + tok + "'");
        fields[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return fields;
}

int positive_int(const std::map<std::string, std::string>& fields, const std::string& key, int line)
{
    const auto it = fields.find(key);
    if (it == fields.end())
        fail(line, "missing '" + key + "='");
    int v = 0;
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1)
        fail(line, "'" + key + "' must be a positive integer");
    return v;
}

std::string shortest(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

}  // namespace

DensityPtr parse_grid_density(const std::string& text)
{
    const auto lines = tokenize(text);
    if (lines.empty())
        throw std::invalid_argument("grid density: empty input");
    const Line& head = lines.front();
    const auto fields = header_fields(head);
    const std::string& kind = head.tokens.front();

    if (kind == "radial") {
        const int n = positive_int(fields, "n", head.number);
        const int bins = positive_int(fields, "bins", head.number);
        const auto r = fields.find("R");
        if (r == fields.end())
            fail(head.number, "missing 'R='");
        const double radius = parse_number(r->second, head.number);
        if (!(radius > 0.0))
            fail(head.number, "R must be positive");
        if (lines.size() != 2)
            fail(head.number, "radial grid expects exactly one line of values");
        const Line& body = lines[1];
        if (static_cast<int>(body.tokens.size()) != bins)
            fail(body.number, "expected " + std::to_string(bins) + " values, got " + std::to_string(body.tokens.size()));
        std::vector<double> values;
        for (const auto& tok : body.tokens)
            values.push_back(parse_height(tok, body.number));
        return RadialGridDensity::uniform_bins(n, radius, std::move(values));
    }

    if (kind == "product") {
        const int n = positive_int(fields, "n", head.number);
        if (static_cast<int>(lines.size()) != n + 1)
            fail(head.number, "product grid expects " + std::to_string(n) + " factor lines");
        std::vector<StepFactor> factors;
        for (int j = 1; j <= n; ++j) {
            const Line& body = lines[static_cast<std::size_t>(j)];
            StepFactor f;
            for (const auto& tok : body.tokens) {
                if (tok.rfind("lo=", 0) == 0)
                    f.lo = parse_number(tok.substr(3), body.number);
                else if (tok.rfind("hi=", 0) == 0)
                    f.hi = parse_number(tok.substr(3), body.number);
                else
                    f.heights.push_back(parse_height(tok, body.number));
            }
            if (f.heights.empty())
                fail(body.number, "factor has no values");
            if (!(f.hi > f.lo))
                fail(body.number, "factor needs lo < hi");
            factors.push_back(std::move(f));
        }
        return std::make_shared<ProductDensity>(std::move(factors));
    }

    fail(head.number, "unknown grid kind '" + kind + "'");
}

std::string format_radial_grid(const RadialGridDensity& f, int bins)
{
    if (bins < 1)
        throw std::invalid_argument("format_radial_grid: bins must be positive");
    const int n = f.dim();
    const double radius = f.support_radius();
    const auto& edges = f.edges();
    const auto& values = f.values();
    // Mass-preserving resampling onto equal-width shells.
    std::ostringstream out;
    out << "radial n=" << n << " R=" << shortest(radius) << " bins=" << bins << "\n";
    std::size_t src = 0;
    for (int i = 0; i < bins; ++i) {
        const double lo = radius * i / bins;
        const double hi = radius * (i + 1) / bins;
        double mass = 0.0;
        while (src < values.size() && edges[src + 1] <= lo)
            ++src;
        for (std::size_t s = src; s < values.size() && edges[s] < hi; ++s) {
            const double a = std::max(lo, edges[s]);
            const double b = std::min(hi, edges[s + 1]);
            if (b > a)
                mass += values[s] * (std::pow(b, n) - std::pow(a, n));
        }
        const double v = mass / (std::pow(hi, n) - std::pow(lo, n));
        out << (i ? " " : "") << shortest(v);
    }
    out << "\n";
    return out.str();
}

}  // namespace iglab
