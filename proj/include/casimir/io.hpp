#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

// Deterministic text output: fixed 17-significant-digit float formatting,
// '.' decimal separator, '\n' line endings.  Identical inputs produce
// byte-identical files.

namespace casimir::io {

/// Format with 17 significant digits (round-trip exact for double).
/// Non-finite values are refused: emitting NaN/Inf silently is a bug.
inline std::string format_double(double v)
{
    if (!std::isfinite(v))
        throw std::domain_error("io::format_double: refusing to format a non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_row(const std::vector<std::string>& fields)
{
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) row += ',';
        row += fields[i];
    }
    row += '\n';
    return row;
}

/// One verification record as a JSON object on a single line.
/// Names are plain ASCII identifiers; no escaping is needed or performed.
inline std::string jsonl_criterion(const std::string& name, double measured, double bound,
                                   bool pass)
{
    std::string line = "{\"name\":\"" + name + "\",\"measured\":" + format_double(measured) +
                       ",\"bound\":" + format_double(bound) +
                       ",\"pass\":" + (pass ? "true" : "false") + "}\n";
    return line;
}

/// Evenly spaced grid, linear or logarithmic; points >= 1, min < max for
/// points > 1.
inline std::vector<double> make_grid(double lo, double hi, int points, bool log_spacing)
{
    if (points < 1) throw std::invalid_argument("make_grid: points must be >= 1");
    if (points == 1) return {lo};
    if (!(lo < hi)) throw std::invalid_argument("make_grid: require min < max");
    if (log_spacing && !(lo > 0.0))
        throw std::invalid_argument("make_grid: log spacing requires positive bounds");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) {
        const double t = double(i) / double(points - 1);
        g[i] = log_spacing ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo);
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

} // namespace casimir::io
