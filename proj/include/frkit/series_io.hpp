#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "frkit/signal.hpp"

namespace frkit {

// Input-side failures (missing files, malformed rows) are distinguished from
// usage and numerical errors so the CLI can map them to its exit codes.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesOptions {
    std::string column;              // name or 0-based index; empty = default
    std::string imag_column;         // optional imaginary part column
    std::optional<bool> has_header;  // unset = auto-detect
};

struct ParsedSeries {
    std::vector<cplx> values;        // missing entries are 0
    std::vector<bool> observed;      // false where the cell was empty/NaN
    std::size_t missing_count = 0;
    std::vector<std::string> header;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

inline bool is_missing_token(const std::string& s) {
    if (s.empty()) return true;
    std::string lower;
    for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return lower == "nan" || lower == "na";
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) throw InputError("input file is empty: " + path);
    return lines;
}

inline bool looks_like_header(const std::string& line) {
    for (const auto& cell : split_csv_line(line)) {
        double v;
        if (!cell.empty() && !is_missing_token(cell) && !parse_double(cell, v)) return true;
    }
    return false;
}

inline std::size_t resolve_column(const std::vector<std::string>& header, std::size_t width,
                                  const std::string& selector, const char* what) {
    if (selector.empty()) throw InputError(std::string("no ") + what + " column selected");
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == selector) return i;
    double idx;
    if (parse_double(selector, idx) && idx >= 0 && idx == std::floor(idx) &&
        static_cast<std::size_t>(idx) < width)
        return static_cast<std::size_t>(idx);
    throw InputError(std::string("cannot resolve ") + what + " column '" + selector + "'");
}

}  // namespace detail

// Reads one complex-valued series. Default column: the first one not named
// "index" when a header is present, else column 0. Empty cells and NaN
// tokens count as missing; anything else unparseable is a hard error naming
// the row.
inline ParsedSeries read_series(const std::string& path, const SeriesOptions& opts = {}) {
    const auto lines = detail::read_lines(path);
    const bool header = opts.has_header.value_or(detail::looks_like_header(lines[0]));

    ParsedSeries out;
    std::size_t first_row = 0;
    if (header) {
        out.header = detail::split_csv_line(lines[0]);
        first_row = 1;
        if (lines.size() == 1) throw InputError("no data rows in " + path);
    }
    const std::size_t width = detail::split_csv_line(lines[first_row]).size();

    std::size_t col = 0;
    std::optional<std::size_t> imag_col;
    if (!opts.column.empty()) {
        col = detail::resolve_column(out.header, width, opts.column, "value");
    } else if (header) {
        while (col < out.header.size() && out.header[col] == "index") ++col;
        if (col >= width) throw InputError("no value column in " + path);
    }
    if (!opts.imag_column.empty())
        imag_col = detail::resolve_column(out.header, width, opts.imag_column, "imaginary");

    for (std::size_t r = first_row; r < lines.size(); ++r) {
        const auto cells = detail::split_csv_line(lines[r]);
        if (col >= cells.size() || (imag_col && *imag_col >= cells.size()))
            throw InputError("row " + std::to_string(r + 1) + ": too few columns");
        double re = 0.0, im = 0.0;
        bool missing = detail::is_missing_token(cells[col]);
        if (!missing && !detail::parse_double(cells[col], re))
            throw InputError("row " + std::to_string(r + 1) + ": cannot parse value '" +
                             cells[col] + "'");
        if (imag_col) {
            if (detail::is_missing_token(cells[*imag_col]))
                missing = true;
            else if (!detail::parse_double(cells[*imag_col], im))
                throw InputError("row " + std::to_string(r + 1) + ": cannot parse value '" +
                                 cells[*imag_col] + "'");
        }
        out.values.emplace_back(missing ? 0.0 : re, missing ? 0.0 : im);
        out.observed.push_back(!missing);
        if (missing) ++out.missing_count;
    }
    return out;
}

// Structured imputation format: columns index, value_re, value_im, observed.
// Rows may arrive in any order; indices must form a permutation of [0, N).
inline ParsedSeries read_indexed_series(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (!detail::looks_like_header(lines[0]))
        throw InputError("indexed series needs a header row: " + path);
    const auto header = detail::split_csv_line(lines[0]);
    auto find = [&header, &path](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw InputError("missing column '" + name + "' in " + path);
    };
    const std::size_t c_idx = find("index");
    const std::size_t c_re = find("value_re");
    const std::size_t c_im = find("value_im");
    const std::size_t c_obs = find("observed");

    const std::size_t n = lines.size() - 1;
    ParsedSeries out;
    out.header = header;
    out.values.assign(n, cplx{0.0, 0.0});
    out.observed.assign(n, false);
    std::vector<bool> seen(n, false);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = detail::split_csv_line(lines[r]);
        const std::string row = "row " + std::to_string(r + 1);
        if (cells.size() <= std::max({c_idx, c_re, c_im, c_obs}))
            throw InputError(row + ": too few columns");
        double idx, obs;
        if (!detail::parse_double(cells[c_idx], idx) || idx < 0 || idx != std::floor(idx) ||
            static_cast<std::size_t>(idx) >= n)
            throw InputError(row + ": bad index '" + cells[c_idx] + "'");
        if (!detail::parse_double(cells[c_obs], obs) || (obs != 0.0 && obs != 1.0))
            throw InputError(row + ": observed flag must be 0 or 1");
        const auto i = static_cast<std::size_t>(idx);
        if (seen[i]) throw InputError(row + ": duplicate index " + cells[c_idx]);
        seen[i] = true;
        if (obs == 1.0) {
            double re, im;
            if (!detail::parse_double(cells[c_re], re) || !detail::parse_double(cells[c_im], im))
                throw InputError(row + ": cannot parse value");
            out.values[i] = cplx{re, im};
            out.observed[i] = true;
        } else {
            ++out.missing_count;
        }
    }
    return out;
}

enum class Detrend { None, Mean, Linear };

// Least-squares detrending applied independently to real and imaginary parts.
inline Signal detrend_signal(const Signal& f, Detrend mode) {
    if (mode == Detrend::None) return f;
    const std::size_t n = f.size();
    Signal out = f;
    if (mode == Detrend::Mean) {
        cplx mean{0.0, 0.0};
        for (const auto& z : f.values()) mean += z;
        mean /= static_cast<double>(n);
        for (auto& z : out.values()) z -= mean;
        return out;
    }
    // linear: fit a + b x
    const double xbar = 0.5 * static_cast<double>(n - 1);
    double sxx = 0.0;
    cplx sxy{0.0, 0.0}, ybar{0.0, 0.0};
    for (std::size_t x = 0; x < n; ++x) ybar += f[x];
    ybar /= static_cast<double>(n);
    for (std::size_t x = 0; x < n; ++x) {
        const double dx = static_cast<double>(x) - xbar;
        sxx += dx * dx;
        sxy += dx * (f[x] - ybar);
    }
    const cplx slope = sxx > 0.0 ? sxy / sxx : cplx{0.0, 0.0};
    for (std::size_t x = 0; x < n; ++x)
        out[x] = f[x] - (ybar + slope * (static_cast<double>(x) - xbar));
    return out;
}

}  // namespace frkit
