#pragma once

// ResultRow and its CSV encoding. The column list is versioned; bump
// kCsvVersion whenever columns are added, removed or reordered.

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sqaoa/error.hpp"

namespace sqaoa::runner {

inline constexpr int kCsvVersion = 1;

inline constexpr std::array<std::string_view, 16> kCsvColumns = {
    "graph_id", "n",           "m_original",       "variant",     "method", "detail",
    "p",        "m_used",      "scaled_p",         "phase_gate_count",      "expectation",
    "c_max",    "ratio",       "aligned_levels",   "seed",        "wall_time_ms"};

struct ResultRow {
    std::string graph_id;
    int n = 0;
    int m_original = 0;
    std::string variant;
    std::string method;
    std::string detail;
    int p = 0;
    int m_used = 0;
    double scaled_p = 0.0;
    long long phase_gate_count = 0;
    double expectation = 0.0;
    int c_max = 0;
    double ratio = 0.0;
    std::optional<int> aligned_levels;
    std::uint64_t seed = 0;
    double wall_time_ms = 0.0;

    // Series key used for plotting and joins.
    std::string series() const {
        std::string s = variant;
        if (!method.empty() && method != "-") s += ":" + method;
        if (!detail.empty()) s += " " + detail;
        return s;
    }
};

inline std::string format_double(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace detail {

inline std::string csv_escape(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace detail

inline void write_csv_header(std::ostream& out) {
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) out << (i ? "," : "") << kCsvColumns[i];
    out << '\n';
}

inline void write_csv_row(std::ostream& out, const ResultRow& r) {
    using detail::csv_escape;
    out << csv_escape(r.graph_id) << ',' << r.n << ',' << r.m_original << ',' << csv_escape(r.variant) << ','
        << csv_escape(r.method) << ',' << csv_escape(r.detail) << ',' << r.p << ',' << r.m_used << ','
        << format_double(r.scaled_p) << ',' << r.phase_gate_count << ',' << format_double(r.expectation) << ','
        << r.c_max << ',' << format_double(r.ratio) << ','
        << (r.aligned_levels ? std::to_string(*r.aligned_levels) : std::string()) << ',' << r.seed << ','
        << format_double(r.wall_time_ms, 6) << '\n';
}

inline void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    write_csv_header(out);
    for (const auto& r : rows) write_csv_row(out, r);
}

inline std::vector<ResultRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("CSV file is empty");
    const auto header = detail::csv_split(line);
    std::array<int, kCsvColumns.size()> index{};
    for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
        index[c] = -1;
        for (std::size_t h = 0; h < header.size(); ++h)
            if (header[h] == kCsvColumns[c]) index[c] = static_cast<int>(h);
        if (index[c] < 0) throw InputError("CSV header lacks column '" + std::string(kCsvColumns[c]) + "'");
    }
    std::vector<ResultRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = detail::csv_split(line);
        if (f.size() != header.size())
            throw InputError("CSV line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                             " fields, header has " + std::to_string(header.size()));
        auto get = [&](std::size_t c) -> const std::string& { return f[static_cast<std::size_t>(index[c])]; };
        try {
            ResultRow r;
            r.graph_id = get(0);
            r.n = std::stoi(get(1));
            r.m_original = std::stoi(get(2));
            r.variant = get(3);
            r.method = get(4);
            r.detail = get(5);
            r.p = std::stoi(get(6));
            r.m_used = std::stoi(get(7));
            r.scaled_p = std::stod(get(8));
            r.phase_gate_count = std::stoll(get(9));
            r.expectation = std::stod(get(10));
            r.c_max = std::stoi(get(11));
            r.ratio = std::stod(get(12));
            if (!get(13).empty()) r.aligned_levels = std::stoi(get(13));
            r.seed = std::stoull(get(14));
            r.wall_time_ms = std::stod(get(15));
            rows.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw InputError("CSV line " + std::to_string(line_no) + " has a malformed numeric field");
        }
    }
    return rows;
}

inline std::vector<ResultRow> read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open CSV file '" + path + "'");
    return read_csv(in);
}

}  // namespace sqaoa::runner
