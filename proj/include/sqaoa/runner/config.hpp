#pragma once

// Experiment configuration: a JSON document with nested sections.
//
//   {
//     "schema_version": 1,
//     "name": "example",
//     "root_seed": 7,
//     "output_dir": "results/example",      // relative to the working dir
//     "jobs": 1,
//     "graphs": [ {"id": "g1", "generate": {"n": 10, "m": 30, "seed": 1}},
//                 {"id": "g2", "file": "graphs/g2.txt"} ],  // relative to the config file
//     "p_values": [1, 2, 3],
//     "optimizer": { "num_random_starts": 30, "max_iterations": 20000, ... },
//     "variants": [ {"type": "standard"},
//                   {"type": "sparse", "initial": {"choice": "exact"}, "remove_counts": "all"},
//                   {"type": "random_sparse", "p_e": 0.5, "initial": {"choice": "distance", "d": [1, 2]}},
//                   {"type": "cut", "initial": {"choice": "gw"}},
//                   {"type": "random_cut", "p_e": 0.5, "initial": {"choice": "exact"}},
//                   {"type": "sparsifier", "method": "effective", "target_ratio": 0.66} ],
//     "alignment": true,
//     "plots": ["ratio_vs_p", "ratio_vs_scaled_p", "delta_vs_alignment"]
//   }
//
// Unknown keys are rejected so typos fail before any simulation starts.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqaoa/error.hpp"
#include "sqaoa/graph.hpp"
#include "sqaoa/heuristics.hpp"
#include "sqaoa/optimizer.hpp"
#include "sqaoa/runner/plot.hpp"
#include "sqaoa/sparsifiers.hpp"

namespace sqaoa::runner {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class VariantType { standard, sparse, random_sparse, cut, random_cut, sparsifier };

inline std::string_view to_string(VariantType v) {
    switch (v) {
        case VariantType::standard: return "standard";
        case VariantType::sparse: return "sparse";
        case VariantType::random_sparse: return "random_sparse";
        case VariantType::cut: return "cut";
        case VariantType::random_cut: return "random_cut";
        case VariantType::sparsifier: return "sparsifier";
    }
    return "?";
}

inline VariantType parse_variant_type(std::string_view s) {
    for (auto v : {VariantType::standard, VariantType::sparse, VariantType::random_sparse, VariantType::cut,
                   VariantType::random_cut, VariantType::sparsifier})
        if (to_string(v) == s) return v;
    throw ConfigError("unknown variant type '" + std::string(s) + "'");
}

struct GraphSource {
    std::string id;
    std::optional<std::filesystem::path> file;
    int n = 0;
    int m = 0;
    std::uint64_t seed = 0;
};

enum class InitialKind { exact, gw, local_search, given, distance };

struct InitialSpec {
    InitialKind kind = InitialKind::exact;
    std::vector<int> distances;  // kind == distance
    std::string assignment;      // kind == given
    // gw: retry with derived seeds until the rounding is suboptimal.
    bool gw_require_suboptimal = false;
    int gw_attempts = 50;
};

struct VariantSpec {
    std::string label;
    VariantType type = VariantType::standard;
    InitialSpec initial;
    std::optional<double> p_e;
    // sparse only: remove k uncut edges per listed k instead of all of them.
    std::optional<std::vector<int>> remove_counts;
    bool remove_all_counts = false;  // "remove_counts": "all" -> 0..|uncut|
    // cut only
    bool pin_equal_gammas = false;
    bool inject_standard_optimum = true;
    // sparsifier only
    SparsifyMethod method = SparsifyMethod::random;
    double target_ratio = 0.66;
    std::map<std::string, double> method_params;

    bool needs_solution() const {
        return type != VariantType::standard && type != VariantType::sparsifier;
    }
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string name = "experiment";
    std::uint64_t root_seed = 0;
    std::filesystem::path output_dir = "results";
    int jobs = 1;
    std::vector<GraphSource> graphs;
    std::vector<int> p_values;
    OptimizerConfig optimizer;
    std::vector<VariantSpec> variants;
    bool alignment = true;
    std::vector<PlotStyle> plots;
    std::string config_hash;  // FNV-1a of the canonical JSON this was parsed from
};

namespace detail {

inline void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    return get_as<T>(obj, key, where);
}

inline std::vector<int> int_or_list(const json& v, const std::string& where) {
    if (v.is_number_integer()) return {v.get<int>()};
    if (v.is_array()) {
        std::vector<int> out;
        for (const auto& x : v) {
            if (!x.is_number_integer()) throw ConfigError(where + " must contain integers");
            out.push_back(x.get<int>());
        }
        return out;
    }
    throw ConfigError(where + " must be an integer or a list of integers");
}

inline InitialSpec parse_initial(const json& j, const std::string& where) {
    check_keys(j, where, {"choice", "d", "assignment", "gw_require_suboptimal", "gw_attempts"});
    InitialSpec s;
    const auto choice = get_or<std::string>(j, "choice", "exact", where);
    if (choice == "exact") s.kind = InitialKind::exact;
    else if (choice == "gw") s.kind = InitialKind::gw;
    else if (choice == "local_search") s.kind = InitialKind::local_search;
    else if (choice == "given") s.kind = InitialKind::given;
    else if (choice == "distance") s.kind = InitialKind::distance;
    else throw ConfigError(where + ".choice: unknown initial solution choice '" + choice + "'");
    if (s.kind == InitialKind::distance) {
        if (!j.contains("d")) throw ConfigError(where + ": choice 'distance' requires 'd'");
        s.distances = int_or_list(j.at("d"), where + ".d");
        for (int d : s.distances)
            if (d < 0) throw ConfigError(where + ".d must be non-negative");
    } else if (j.contains("d")) {
        throw ConfigError(where + ": 'd' is only valid with choice 'distance'");
    }
    if (s.kind == InitialKind::given) {
        s.assignment = get_as<std::string>(j, "assignment", where);
        parse_assignment(s.assignment);
    }
    s.gw_require_suboptimal = get_or<bool>(j, "gw_require_suboptimal", false, where);
    s.gw_attempts = get_or<int>(j, "gw_attempts", 50, where);
    if (s.gw_attempts < 1) throw ConfigError(where + ".gw_attempts must be >= 1");
    return s;
}

inline OptimizerConfig parse_optimizer(const json& j, const std::string& where) {
    check_keys(j, where, {"max_iterations", "gradient_step", "gradient_tolerance", "objective_tolerance", "memory",
                          "num_random_starts", "start_low", "start_high", "ramp_start", "threads"});
    OptimizerConfig c;
    c.max_iterations = get_or(j, "max_iterations", c.max_iterations, where);
    c.gradient_step = get_or(j, "gradient_step", c.gradient_step, where);
    c.gradient_tolerance = get_or(j, "gradient_tolerance", c.gradient_tolerance, where);
    c.objective_tolerance = get_or(j, "objective_tolerance", c.objective_tolerance, where);
    c.memory = get_or(j, "memory", c.memory, where);
    c.num_random_starts = get_or(j, "num_random_starts", c.num_random_starts, where);
    c.start_low = get_or(j, "start_low", c.start_low, where);
    c.start_high = get_or(j, "start_high", c.start_high, where);
    c.ramp_start = get_or(j, "ramp_start", c.ramp_start, where);
    c.threads = get_or(j, "threads", c.threads, where);
    c.validate();
    return c;
}

inline VariantSpec parse_variant(const json& j, const std::string& where) {
    check_keys(j, where, {"type", "label", "initial", "p_e", "remove_counts", "pin_equal_gammas",
                          "inject_standard_optimum", "method", "target_ratio", "params"});
    VariantSpec v;
    v.type = parse_variant_type(get_as<std::string>(j, "type", where));
    v.label = get_or<std::string>(j, "label", "", where);
    const bool solution_based = v.needs_solution();

    if (j.contains("initial")) {
        if (!solution_based) throw ConfigError(where + ": variant '" + std::string(to_string(v.type)) +
                                               "' does not take an initial solution");
        v.initial = parse_initial(j.at("initial"), where + ".initial");
    }
    if (j.contains("p_e")) {
        if (v.type != VariantType::random_sparse && v.type != VariantType::random_cut)
            throw ConfigError(where + ": p_e applies only to random_sparse and random_cut");
        v.p_e = get_as<double>(j, "p_e", where);
        if (!(*v.p_e >= 0.0 && *v.p_e <= 1.0)) throw ConfigError(where + ".p_e must lie in [0, 1]");
    } else if (v.type == VariantType::random_sparse || v.type == VariantType::random_cut) {
        throw ConfigError(where + ": variant '" + std::string(to_string(v.type)) + "' requires p_e");
    }
    if (j.contains("remove_counts")) {
        if (v.type != VariantType::sparse) throw ConfigError(where + ": remove_counts applies only to sparse");
        const auto& rc = j.at("remove_counts");
        if (rc.is_string()) {
            if (rc.get<std::string>() != "all") throw ConfigError(where + ".remove_counts must be a list or \"all\"");
            v.remove_all_counts = true;
        } else {
            v.remove_counts = int_or_list(rc, where + ".remove_counts");
            for (int k : *v.remove_counts)
                if (k < 0) throw ConfigError(where + ".remove_counts must be non-negative");
        }
    }
    if (j.contains("pin_equal_gammas") || j.contains("inject_standard_optimum")) {
        if (v.type != VariantType::cut && v.type != VariantType::random_cut)
            throw ConfigError(where + ": pin_equal_gammas/inject_standard_optimum apply only to cut variants");
        v.pin_equal_gammas = get_or<bool>(j, "pin_equal_gammas", false, where);
        v.inject_standard_optimum = get_or<bool>(j, "inject_standard_optimum", true, where);
    }
    if (v.type == VariantType::sparsifier) {
        v.method = parse_sparsify_method(get_as<std::string>(j, "method", where));
        v.target_ratio = get_or<double>(j, "target_ratio", 0.66, where);
        if (!(v.target_ratio > 0.0 && v.target_ratio <= 1.0))
            throw ConfigError(where + ".target_ratio must lie in (0, 1]");
        if (j.contains("params")) {
            const auto& params = j.at("params");
            if (!params.is_object()) throw ConfigError(where + ".params must be an object");
            for (const auto& [key, value] : params.items()) {
                if (value.is_boolean()) v.method_params[key] = value.get<bool>() ? 1.0 : 0.0;
                else if (value.is_number()) v.method_params[key] = value.get<double>();
                else throw ConfigError(where + ".params." + key + " must be a number or boolean");
            }
        }
        // Reject bad method parameters now rather than mid-sweep.
        SparsifyConfig probe{v.method, v.target_ratio, 0, v.method_params};
        score_edges(Graph{3, {{0, 1}, {1, 2}, {0, 2}}}, probe);
    } else if (j.contains("method") || j.contains("target_ratio") || j.contains("params")) {
        throw ConfigError(where + ": method/target_ratio/params apply only to the sparsifier variant");
    }
    return v;
}

}  // namespace detail

// Parses an already-loaded JSON document. Relative graph file paths are
// resolved against base_dir.
inline ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir = ".") {
    using namespace detail;
    check_keys(j, "config", {"schema_version", "name", "root_seed", "output_dir", "jobs", "graphs", "p_values",
                             "optimizer", "variants", "alignment", "plots"});
    ExperimentConfig c;
    c.schema_version = get_as<int>(j, "schema_version", "config");
    if (c.schema_version != kSchemaVersion)
        throw ConfigError("config.schema_version " + std::to_string(c.schema_version) + " is not supported (expected " +
                          std::to_string(kSchemaVersion) + ")");
    c.name = get_or<std::string>(j, "name", c.name, "config");
    c.root_seed = get_or<std::uint64_t>(j, "root_seed", 0, "config");
    c.output_dir = get_or<std::string>(j, "output_dir", "results", "config");
    c.jobs = get_or<int>(j, "jobs", 1, "config");
    if (c.jobs < 0) throw ConfigError("config.jobs must be >= 0");
    c.alignment = get_or<bool>(j, "alignment", true, "config");

    if (!j.contains("graphs") || !j.at("graphs").is_array() || j.at("graphs").empty())
        throw ConfigError("config.graphs must be a non-empty list");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < j.at("graphs").size(); ++i) {
        const auto& gj = j.at("graphs")[i];
        const std::string where = "config.graphs[" + std::to_string(i) + "]";
        check_keys(gj, where, {"id", "file", "generate"});
        GraphSource g;
        g.id = get_as<std::string>(gj, "id", where);
        if (g.id.empty() || !ids.insert(g.id).second) throw ConfigError(where + ".id must be unique and non-empty");
        if (gj.contains("file") == gj.contains("generate"))
            throw ConfigError(where + " needs exactly one of 'file' or 'generate'");
        if (gj.contains("file")) {
            g.file = base_dir / get_as<std::string>(gj, "file", where);
        } else {
            const auto& gen = gj.at("generate");
            check_keys(gen, where + ".generate", {"n", "m", "seed"});
            g.n = get_as<int>(gen, "n", where + ".generate");
            g.m = get_as<int>(gen, "m", where + ".generate");
            g.seed = get_or<std::uint64_t>(gen, "seed", 0, where + ".generate");
            if (g.n < 2 || g.n > kMaxSpectrumVertices)
                throw ConfigError(where + ".generate.n must lie in [2, " + std::to_string(kMaxSpectrumVertices) + "]");
            if (g.m < 1 || g.m > g.n * (g.n - 1) / 2)
                throw ConfigError(where + ".generate.m must lie in [1, n(n-1)/2]");
        }
        c.graphs.push_back(std::move(g));
    }

    if (!j.contains("p_values")) throw ConfigError("config.p_values is required");
    c.p_values = int_or_list(j.at("p_values"), "config.p_values");
    if (c.p_values.empty()) throw ConfigError("config.p_values must not be empty");
    for (int p : c.p_values)
        if (p < 1) throw ConfigError("config.p_values entries must be >= 1");

    if (j.contains("optimizer")) c.optimizer = parse_optimizer(j.at("optimizer"), "config.optimizer");

    if (!j.contains("variants") || !j.at("variants").is_array() || j.at("variants").empty())
        throw ConfigError("config.variants must be a non-empty list");
    std::map<std::string, int> type_counts;
    std::set<std::string> labels;
    for (std::size_t i = 0; i < j.at("variants").size(); ++i) {
        auto v = parse_variant(j.at("variants")[i], "config.variants[" + std::to_string(i) + "]");
        const auto type_name = std::string(to_string(v.type));
        if (v.label.empty()) {
            const int k = type_counts[type_name]++;
            v.label = k == 0 ? type_name : type_name + "#" + std::to_string(k);
        }
        if (!labels.insert(v.label).second) throw ConfigError("duplicate variant label '" + v.label + "'");
        c.variants.push_back(std::move(v));
    }
    for (const auto& v : c.variants)
        if ((v.type == VariantType::cut || v.type == VariantType::random_cut) && v.inject_standard_optimum &&
            !v.pin_equal_gammas && std::none_of(c.variants.begin(), c.variants.end(), [](const VariantSpec& s) {
                return s.type == VariantType::standard;
            }))
            throw ConfigError("variant '" + v.label +
                              "' injects the standard optimum, so a 'standard' variant must be configured");

    if (j.contains("plots")) {
        if (!j.at("plots").is_array()) throw ConfigError("config.plots must be a list");
        for (const auto& p : j.at("plots")) {
            if (!p.is_string()) throw ConfigError("config.plots entries must be strings");
            c.plots.push_back(parse_plot_style(p.get<std::string>()));
        }
    }
    c.config_hash = [&] {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
        return std::string(buf);
    }();
    return c;
}

inline json load_config_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    try {
        return json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "': " + e.what());
    }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(load_config_json(path), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace sqaoa::runner
