#pragma once

// Energy-level alignment between a graph and a sparsified version of it.
//
// Level k of a graph is the set of assignments achieving its k-th largest
// distinct cut value. Levels k of G and G' are aligned when one level set
// contains the other.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqaoa/error.hpp"
#include "sqaoa/graph.hpp"

namespace sqaoa {

enum class Containment { none, equal, first_in_second, second_in_first };

inline std::string_view to_string(Containment c) {
    switch (c) {
        case Containment::none: return "none";
        case Containment::equal: return "equal";
        case Containment::first_in_second: return "first_in_second";
        case Containment::second_in_first: return "second_in_first";
    }
    return "?";
}

struct LevelDetail {
    int level = 0;  // 1-based
    std::size_t size_first = 0;
    std::size_t size_second = 0;
    Containment containment = Containment::none;
};

enum class AlignmentRule {
    prefix,         // levels 1..k must all be aligned
    largest_index,  // largest aligned k, gaps allowed
};

struct AlignmentReport {
    int aligned_levels = 0;
    bool ground_state_aligned = false;
    std::vector<LevelDetail> levels;
};

inline Containment level_containment(const std::vector<Bitstring>& a, const std::vector<Bitstring>& b) {
    const bool a_in_b = std::includes(b.begin(), b.end(), a.begin(), a.end());
    const bool b_in_a = std::includes(a.begin(), a.end(), b.begin(), b.end());
    if (a_in_b && b_in_a) return Containment::equal;
    if (a_in_b) return Containment::first_in_second;
    if (b_in_a) return Containment::second_in_first;
    return Containment::none;
}

inline AlignmentReport aligned_levels(const Spectrum& first, const Spectrum& second,
                                      AlignmentRule rule = AlignmentRule::prefix) {
    if (first.num_vertices != second.num_vertices)
        throw InputError("alignment needs graphs on the same vertex set");
    AlignmentReport report;
    const std::size_t common = std::min(first.levels.size(), second.levels.size());
    bool prefix_intact = true;
    for (std::size_t k = 0; k < common; ++k) {
        const auto& a = first.levels[k].members;
        const auto& b = second.levels[k].members;
        LevelDetail d{static_cast<int>(k + 1), a.size(), b.size(), level_containment(a, b)};
        const bool aligned = d.containment != Containment::none;
        if (rule == AlignmentRule::prefix) {
            prefix_intact = prefix_intact && aligned;
            if (prefix_intact) report.aligned_levels = d.level;
        } else if (aligned) {
            report.aligned_levels = d.level;
        }
        report.levels.push_back(d);
    }
    report.ground_state_aligned = !report.levels.empty() && report.levels.front().containment != Containment::none;
    return report;
}

inline AlignmentReport aligned_levels(const Graph& g, const Graph& g_sparse,
                                      AlignmentRule rule = AlignmentRule::prefix) {
    if (g.num_vertices() != g_sparse.num_vertices())
        throw InputError("alignment needs graphs on the same vertex set (" + std::to_string(g.num_vertices()) +
                         " vs " + std::to_string(g_sparse.num_vertices()) + " vertices)");
    return aligned_levels(spectrum(g), spectrum(g_sparse), rule);
}

struct AlignmentInstance {
    int aligned_levels = 0;
    double ratio_sparse = 0.0;
    double ratio_standard = 0.0;
};

struct AlignmentRow {
    int aligned_levels = 0;
    double ratio_delta = 0.0;  // positive: the sparsified phase operator did better
};

struct AlignmentBucket {
    int aligned_levels = 0;
    std::size_t count = 0;
    double mean_delta = 0.0;
};

struct AlignmentStudy {
    std::vector<AlignmentRow> rows;
    std::vector<AlignmentBucket> buckets;  // ascending aligned_levels

    // Mean delta over every row with aligned_levels >= min_levels (and
    // <= max_levels when given); nullopt when no row qualifies.
    std::optional<double> mean_delta(int min_levels, std::optional<int> max_levels = std::nullopt) const {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& r : rows) {
            if (r.aligned_levels < min_levels) continue;
            if (max_levels && r.aligned_levels > *max_levels) continue;
            sum += r.ratio_delta;
            ++count;
        }
        if (count == 0) return std::nullopt;
        return sum / static_cast<double>(count);
    }
};

inline AlignmentStudy alignment_ratio_study(const std::vector<AlignmentInstance>& instances) {
    AlignmentStudy study;
    std::map<int, std::pair<std::size_t, double>> groups;
    for (const auto& inst : instances) {
        if (inst.ratio_sparse < 0.0 || inst.ratio_sparse > 1.0 + 1e-9 || inst.ratio_standard < 0.0 ||
            inst.ratio_standard > 1.0 + 1e-9)
            throw InputError("approximation ratios must lie in [0, 1]");
        const double delta = inst.ratio_sparse - inst.ratio_standard;
        study.rows.push_back({inst.aligned_levels, delta});
        auto& [count, sum] = groups[inst.aligned_levels];
        ++count;
        sum += delta;
    }
    for (const auto& [levels, agg] : groups)
        study.buckets.push_back({levels, agg.first, agg.second / static_cast<double>(agg.first)});
    return study;
}

struct AlignmentCase {
    Graph original;
    Graph sparsified;
    double ratio_sparse = 0.0;
    double ratio_standard = 0.0;
};

inline AlignmentStudy alignment_ratio_study(const std::vector<AlignmentCase>& cases) {
    std::vector<AlignmentInstance> instances;
    instances.reserve(cases.size());
    for (const auto& c : cases)
        instances.push_back({aligned_levels(c.original, c.sparsified).aligned_levels, c.ratio_sparse, c.ratio_standard});
    return alignment_ratio_study(instances);
}

}  // namespace sqaoa
