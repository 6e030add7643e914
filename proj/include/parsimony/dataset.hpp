#pragma once

// Flat-file dataset plumbing. The CSV dialect is fixed: comma separator, '.'
// decimal point, required header row, UTF-8, no quoting. Lines starting with
// '#' are comments; generators use one to record their resolved parameters.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "parsimony/errors.hpp"
#include "parsimony/rng.hpp"

namespace parsimony {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.emplace_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

inline double parse_double(const std::string& field, std::size_t line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || field.empty())
        throw Malformed("line " + std::to_string(line_no) + ": not a number: '" + field + "'");
    return v;
}

// Every non-comment, non-blank line split into fields; first row is the header.
inline std::vector<std::vector<std::string>> csv_rows(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        rows.push_back(split_fields(line));
    }
    if (rows.empty()) throw Malformed("no header row");
    return rows;
}

}  // namespace detail

struct RegressionTable {
    std::vector<double> x, y;
};

inline RegressionTable read_regression_csv(std::istream& in) {
    const auto rows = detail::csv_rows(in);
    if (rows.front().size() != 2 || rows.front()[0] != "x" || rows.front()[1] != "y")
        throw Malformed("regression header must be exactly 'x,y'");
    RegressionTable t;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 2)
            throw Malformed("row " + std::to_string(r + 1) + ": expected 2 fields");
        t.x.push_back(detail::parse_double(rows[r][0], r + 1));
        t.y.push_back(detail::parse_double(rows[r][1], r + 1));
    }
    return t;
}

// Labels are arbitrary strings, mapped to indices in order of first appearance.
struct ClassificationTable {
    std::vector<std::vector<double>> x;
    std::vector<std::size_t> y;
    std::vector<std::string> labels;  // index -> name
};

inline ClassificationTable read_classification_csv(std::istream& in) {
    const auto rows = detail::csv_rows(in);
    const std::size_t width = rows.front().size();
    if (width < 2 || rows.front().back() != "label")
        throw Malformed("classification header must end with 'label'");
    ClassificationTable t;
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != width)
            throw Malformed("row " + std::to_string(r + 1) + ": ragged field count");
        std::vector<double> features;
        features.reserve(width - 1);
        for (std::size_t c = 0; c + 1 < width; ++c)
            features.push_back(detail::parse_double(rows[r][c], r + 1));
        t.x.push_back(std::move(features));
        const std::string& name = rows[r].back();
        const auto [it, inserted] = seen.try_emplace(name, t.labels.size());
        if (inserted) t.labels.push_back(name);
        t.y.push_back(it->second);
    }
    return t;
}

// Rectangular numeric matrix; the header row is present but carries no data.
inline std::vector<std::vector<double>> read_matrix_csv(std::istream& in) {
    const auto rows = detail::csv_rows(in);
    const std::size_t width = rows.front().size();
    std::vector<std::vector<double>> m;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != width)
            throw Malformed("row " + std::to_string(r + 1) + ": ragged field count");
        std::vector<double> row;
        row.reserve(width);
        for (std::size_t c = 0; c < width; ++c)
            row.push_back(detail::parse_double(rows[r][c], r + 1));
        m.push_back(std::move(row));
    }
    return m;
}

inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Malformed("unprintable number");
    return std::string(buf, ptr);
}

// Synthetic generators. Deterministic per seed; each kind draws from its own
// stream so that, for example, blocks2d output never depends on whether a
// regress1d dataset was generated first.

inline std::string synth_regress1d(std::uint64_t n, std::uint64_t seed, double noise_sigma) {
    if (n < 1) throw OutOfRange("need at least one row");
    if (!(noise_sigma > 0.0)) throw OutOfRange("noise sigma must be positive");
    Rng rng = make_rng(seed, "regress1d");
    std::ostringstream out;
    out << "# synth kind=regress1d n=" << n << " seed=" << seed
        << " noise_sigma=" << format_double(noise_sigma)
        << " model: x~U[-2.5,2.5], y=2*sin(x)+noise_sigma*N(0,1)\n";
    out << "x,y\n";
    for (std::uint64_t r = 0; r < n; ++r) {
        const double x = -2.5 + 5.0 * rng.uniform();
        const double y = 2.0 * std::sin(x) + noise_sigma * rng.normal();
        out << format_double(x) << ',' << format_double(y) << '\n';
    }
    return out.str();
}

// Two diagonal blocks of the unit square favor label A with probability skew;
// the off-diagonal blocks favor B equally strongly.
inline std::string synth_blocks2d(std::uint64_t n, std::uint64_t seed, double skew) {
    if (n < 1) throw OutOfRange("need at least one row");
    if (!(skew >= 0.0 && skew <= 1.0)) throw OutOfRange("skew outside [0,1]");
    Rng rng = make_rng(seed, "blocks2d");
    std::ostringstream out;
    out << "# synth kind=blocks2d n=" << n << " seed=" << seed
        << " skew=" << format_double(skew)
        << " model: f~U[0,1]^2, diagonal 2x2 blocks label A w.p. skew, else B\n";
    out << "f1,f2,label\n";
    for (std::uint64_t r = 0; r < n; ++r) {
        const double f1 = rng.uniform();
        const double f2 = rng.uniform();
        const bool diagonal = (f1 < 0.5) == (f2 < 0.5);
        const double p_a = diagonal ? skew : 1.0 - skew;
        const char* label = (rng.uniform() < p_a) ? "A" : "B";
        out << format_double(f1) << ',' << format_double(f2) << ',' << label << '\n';
    }
    return out.str();
}

// Smoothly mixed labels: P(A) falls linearly from 1 at the left edge to 0 at
// the right, so every region keeps some of both labels.
inline std::string synth_mixed2d(std::uint64_t n, std::uint64_t seed) {
    if (n < 1) throw OutOfRange("need at least one row");
    Rng rng = make_rng(seed, "mixed2d");
    std::ostringstream out;
    out << "# synth kind=mixed2d n=" << n << " seed=" << seed
        << " model: f~U[0,1]^2, P(A)=1-f1\n";
    out << "f1,f2,label\n";
    for (std::uint64_t r = 0; r < n; ++r) {
        const double f1 = rng.uniform();
        const double f2 = rng.uniform();
        const char* label = (rng.uniform() < 1.0 - f1) ? "A" : "B";
        out << format_double(f1) << ',' << format_double(f2) << ',' << label << '\n';
    }
    return out.str();
}

}  // namespace parsimony
