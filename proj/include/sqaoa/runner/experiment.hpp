#pragma once

// Experiment orchestration: expands a config into (graph, variant instance,
// depth) jobs, runs them on a bounded worker pool and writes results.csv,
// alignment.csv, manifest.json and any requested plots.
//
// Seed hierarchy: root -> graph -> variant label -> instance detail for all
// variant-specific randomness. Optimizer starting points derive from
// root -> graph -> depth only, so every variant of a graph is optimised from
// the same random starts.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <tuple>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqaoa/alignment.hpp"
#include "sqaoa/graph.hpp"
#include "sqaoa/heuristics.hpp"
#include "sqaoa/optimizer.hpp"
#include "sqaoa/parallel.hpp"
#include "sqaoa/runner/config.hpp"
#include "sqaoa/runner/plot.hpp"
#include "sqaoa/runner/results.hpp"
#include "sqaoa/simulator.hpp"
#include "sqaoa/sparsifiers.hpp"
#include "sqaoa/version.hpp"

namespace sqaoa::runner {

struct LoadedGraph {
    GraphSource source;
    Graph graph;
    std::uint64_t seed = 0;
    int c_max = 0;
    bool connected = false;
    std::string error;
};

// One concrete phase operator derived from a variant for one graph.
struct VariantInstance {
    std::size_t variant_index = 0;
    std::string method;
    std::string detail;
    PhaseSpec spec;
    int m_used = 0;
    std::optional<int> aligned_levels;
    std::uint64_t seed = 0;
    std::string error;
};

struct Failure {
    std::string graph_id;
    std::string variant;
    std::string detail;
    int p = 0;
    std::string error;
};

struct RunOutcome {
    std::vector<ResultRow> rows;
    std::vector<Failure> failures;
    std::vector<LoadedGraph> graphs;
    std::vector<std::filesystem::path> files;
};

inline LoadedGraph load_graph(const GraphSource& src, std::uint64_t root_seed) {
    LoadedGraph lg;
    lg.source = src;
    lg.seed = derive_seed(root_seed, "graph:" + src.id);
    try {
        lg.graph = src.file ? read_edge_list_file(src.file->string()) : generate_random_graph(src.n, src.m, src.seed);
        if (lg.graph.num_vertices() > kMaxSpectrumVertices)
            throw CapabilityError("experiments support at most " + std::to_string(kMaxSpectrumVertices) + " vertices");
        lg.c_max = brute_force_maxcut(lg.graph).c_max;
        lg.connected = is_connected(lg.graph);
        if (lg.c_max == 0) throw InputError("graph has no edges; approximation ratio undefined");
    } catch (const std::exception& e) {
        lg.error = e.what();
    }
    return lg;
}

namespace detail {

struct LabeledSolution {
    CutSolution solution;
    std::string detail;
};

inline std::vector<LabeledSolution> initial_solutions(const Graph& g, int c_max, const InitialSpec& spec,
                                                      std::uint64_t seed) {
    switch (spec.kind) {
        case InitialKind::exact: return {{brute_force_maxcut(g).best(), ""}};
        case InitialKind::gw: {
            for (int attempt = 0; attempt < spec.gw_attempts; ++attempt) {
                GwConfig cfg;
                cfg.seed = derive_seed(seed, static_cast<std::uint64_t>(attempt));
                const auto sol = goemans_williamson(g, cfg).solution;
                if (!spec.gw_require_suboptimal || sol.value < c_max)
                    return {{sol, "cut=" + std::to_string(sol.value)}};
            }
            throw NotFoundError("Goemans-Williamson returned an optimal cut in all " +
                                std::to_string(spec.gw_attempts) + " attempts");
        }
        case InitialKind::local_search: {
            const auto sol = initial_solution(g, InitialChoice::local_search, seed);
            return {{sol, "cut=" + std::to_string(sol.value)}};
        }
        case InitialKind::given: {
            const auto x = parse_assignment(spec.assignment);
            if (spec.assignment.size() != static_cast<std::size_t>(g.num_vertices()))
                throw InputError("given assignment has " + std::to_string(spec.assignment.size()) +
                                 " characters, graph has " + std::to_string(g.num_vertices()) + " vertices");
            return {{make_solution(g, x), "cut=" + std::to_string(cut_value(g, x))}};
        }
        case InitialKind::distance: {
            std::vector<LabeledSolution> out;
            for (int d : spec.distances)
                out.push_back({solution_at_distance(g, d, derive_seed(seed, "d=" + std::to_string(d))),
                               "d=" + std::to_string(d)});
            return out;
        }
    }
    return {};
}

inline std::string initial_method(const InitialSpec& spec) {
    switch (spec.kind) {
        case InitialKind::exact: return "exact";
        case InitialKind::gw: return "gw";
        case InitialKind::local_search: return "local_search";
        case InitialKind::given: return "given";
        case InitialKind::distance: return "distance";
    }
    return "?";
}

inline std::string join_detail(const std::string& a, const std::string& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return a + " " + b;
}

inline std::string format_param(double v) { return format_double(v, 6); }

// Class 1 = uncut edges selected with probability p_e, class 2 = the rest.
inline PhaseSpec random_cut_spec(const Graph& g, const CutSolution& sol, double p_e, std::uint64_t seed) {
    auto rng = make_rng(derive_seed(seed, "random_cut"));
    std::vector<int> classes;
    for (const auto& e : g.edges()) {
        const bool cut = ((sol.assignment >> e.u) ^ (sol.assignment >> e.v)) & 1U;
        classes.push_back(!cut && uniform01(rng) < p_e ? 1 : 2);
    }
    return PhaseSpec::two_class(g, std::move(classes));
}

}  // namespace detail

inline std::vector<VariantInstance> expand_variant(const ExperimentConfig& config, const LoadedGraph& lg,
                                                   std::size_t variant_index) {
    const auto& v = config.variants[variant_index];
    const Graph& g = lg.graph;
    const std::uint64_t vseed = derive_seed(lg.seed, "variant:" + v.label);
    std::vector<VariantInstance> out;

    auto add = [&](std::string method, std::string detail, PhaseSpec spec, bool sparsified) {
        VariantInstance inst;
        inst.variant_index = variant_index;
        inst.method = std::move(method);
        inst.detail = std::move(detail);
        inst.m_used = spec.topology.num_edges();
        if (sparsified && config.alignment) inst.aligned_levels = aligned_levels(g, spec.topology).aligned_levels;
        inst.spec = std::move(spec);
        inst.seed = derive_seed(vseed, "instance:" + inst.detail);
        out.push_back(std::move(inst));
    };

    if (v.type == VariantType::standard) {
        add("-", "", PhaseSpec::standard(g), false);
        return out;
    }
    if (v.type == VariantType::sparsifier) {
        SparsifyConfig sc{v.method, v.target_ratio, derive_seed(vseed, "sparsifier"), v.method_params};
        add(std::string(to_string(v.method)), "ratio=" + detail::format_param(v.target_ratio), PhaseSpec::standard(sparsify(g, sc)), true);
        return out;
    }

    const auto method = detail::initial_method(v.initial);
    for (const auto& [sol, sol_detail] : detail::initial_solutions(g, lg.c_max, v.initial, derive_seed(vseed, "initial"))) {
        const std::uint64_t sseed = derive_seed(vseed, "solution:" + sol_detail);
        switch (v.type) {
            case VariantType::sparse: {
                if (v.remove_counts || v.remove_all_counts) {
                    std::vector<int> counts;
                    if (v.remove_all_counts) {
                        const auto uncut = partition_edges(g, sol).not_in_cut.size();
                        for (int k = 0; k <= static_cast<int>(uncut); ++k) counts.push_back(k);
                    } else {
                        counts = *v.remove_counts;
                    }
                    for (int k : counts)
                        add(method, detail::join_detail(sol_detail, "k=" + std::to_string(k)),
                            PhaseSpec::standard(remove_k_noncut_edges(g, sol, k, sseed)), true);
                } else {
                    add(method, sol_detail, PhaseSpec::standard(sparsify_by_solution(g, sol, 1.0, sseed)), true);
                }
                break;
            }
            case VariantType::random_sparse:
                add(method, detail::join_detail(sol_detail, "p_e=" + detail::format_param(*v.p_e)),
                    PhaseSpec::standard(sparsify_by_solution(g, sol, *v.p_e, sseed)), true);
                break;
            case VariantType::cut:
                add(method, detail::join_detail(sol_detail, v.pin_equal_gammas ? "pinned" : ""),
                    v.pin_equal_gammas ? PhaseSpec::standard(g) : PhaseSpec::cut_classes(g, sol), false);
                break;
            case VariantType::random_cut:
                add(method,
                    detail::join_detail(detail::join_detail(sol_detail, "p_e=" + detail::format_param(*v.p_e)),
                                        v.pin_equal_gammas ? "pinned" : ""),
                    v.pin_equal_gammas ? PhaseSpec::standard(g) : detail::random_cut_spec(g, sol, *v.p_e, sseed),
                    false);
                break;
            default: break;
        }
    }
    return out;
}

inline OptimizerConfig optimizer_for(const ExperimentConfig& config, const LoadedGraph& lg, int p) {
    OptimizerConfig oc = config.optimizer;
    oc.seed = derive_seed(lg.seed, "optimizer:p=" + std::to_string(p));
    return oc;
}

inline std::string describe_plan(const ExperimentConfig& config) {
    std::ostringstream os;
    os << "experiment '" << config.name << "' (config " << config.config_hash << ", root seed " << config.root_seed
       << ")\n";
    os << "  depths:";
    for (int p : config.p_values) os << ' ' << p;
    os << "\n  optimizer: " << config.optimizer.num_random_starts << " random starts"
       << (config.optimizer.ramp_start ? " + ramp" : "") << ", max " << config.optimizer.max_iterations
       << " iterations\n";
    for (const auto& src : config.graphs) {
        const auto lg = load_graph(src, config.root_seed);
        os << "  graph " << src.id << ": ";
        if (!lg.error.empty()) {
            os << "ERROR " << lg.error << '\n';
            continue;
        }
        os << "n=" << lg.graph.num_vertices() << " m=" << lg.graph.num_edges() << " c_max=" << lg.c_max
           << (lg.connected ? "" : " (disconnected)") << '\n';
        for (std::size_t vi = 0; vi < config.variants.size(); ++vi) {
            os << "    " << config.variants[vi].label << ": ";
            try {
                const auto inst = expand_variant(config, lg, vi);
                os << inst.size() << " instance(s) x " << config.p_values.size() << " depth(s)\n";
            } catch (const std::exception& e) {
                os << "ERROR " << e.what() << '\n';
            }
        }
    }
    return os.str();
}

namespace detail {

struct Job {
    std::size_t graph = 0;
    std::size_t instance = 0;  // index into the graph's instance list
    int p = 0;
};

}  // namespace detail

inline nlohmann::json build_manifest(const ExperimentConfig& config, const RunOutcome& outcome) {
    nlohmann::json m;
    m["schema_version"] = kSchemaVersion;
    m["library_version"] = std::string(kVersion);
    m["config_name"] = config.name;
    m["config_hash"] = config.config_hash;
    m["root_seed"] = config.root_seed;
    m["csv_version"] = kCsvVersion;
    m["csv_columns"] = nlohmann::json::array();
    for (auto c : kCsvColumns) m["csv_columns"].push_back(std::string(c));
    m["graphs"] = nlohmann::json::array();
    for (const auto& lg : outcome.graphs) {
        nlohmann::json g;
        g["id"] = lg.source.id;
        g["seed"] = lg.seed;
        if (lg.error.empty()) {
            g["n"] = lg.graph.num_vertices();
            g["m"] = lg.graph.num_edges();
            g["c_max"] = lg.c_max;
            g["connected"] = lg.connected;
        } else {
            g["error"] = lg.error;
        }
        m["graphs"].push_back(g);
    }
    m["rows"] = outcome.rows.size();
    m["failures"] = nlohmann::json::array();
    for (const auto& f : outcome.failures)
        m["failures"].push_back({{"graph_id", f.graph_id}, {"variant", f.variant}, {"detail", f.detail}, {"p", f.p},
                                 {"error", f.error}});
    return m;
}

inline void write_alignment_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    std::map<std::pair<std::string, int>, double> standard;
    for (const auto& r : rows)
        if (r.variant == "standard") standard[{r.graph_id, r.p}] = r.ratio;
    out << "graph_id,sparsifier,p,aligned_levels,ratio_sparse,ratio_standard,delta\n";
    for (const auto& r : rows) {
        if (!r.aligned_levels) continue;
        auto it = standard.find({r.graph_id, r.p});
        if (it == standard.end()) continue;
        out << ::sqaoa::runner::detail::csv_escape(r.graph_id) << ',' << ::sqaoa::runner::detail::csv_escape(r.series())
            << ',' << r.p << ',' << *r.aligned_levels << ',' << format_double(r.ratio) << ','
            << format_double(it->second) << ',' << format_double(r.ratio - it->second) << '\n';
    }
}

// Runs the full sweep. Per-row failures are collected, not thrown; the
// output directory is written only when write_files is set.
inline RunOutcome run_experiment(const ExperimentConfig& config, bool write_files = true) {
    RunOutcome outcome;
    for (const auto& src : config.graphs) outcome.graphs.push_back(load_graph(src, config.root_seed));

    // instances[g][k]
    std::vector<std::vector<VariantInstance>> instances(outcome.graphs.size());
    for (std::size_t gi = 0; gi < outcome.graphs.size(); ++gi) {
        const auto& lg = outcome.graphs[gi];
        if (!lg.error.empty()) {
            outcome.failures.push_back({lg.source.id, "", "", 0, lg.error});
            continue;
        }
        for (std::size_t vi = 0; vi < config.variants.size(); ++vi) {
            try {
                auto expanded = expand_variant(config, lg, vi);
                for (auto& inst : expanded) instances[gi].push_back(std::move(inst));
            } catch (const std::exception& e) {
                outcome.failures.push_back({lg.source.id, config.variants[vi].label, "", 0, e.what()});
            }
        }
    }

    std::vector<detail::Job> standard_jobs, other_jobs;
    for (std::size_t gi = 0; gi < instances.size(); ++gi)
        for (std::size_t k = 0; k < instances[gi].size(); ++k)
            for (int p : config.p_values) {
                const bool is_standard =
                    config.variants[instances[gi][k].variant_index].type == VariantType::standard;
                (is_standard ? standard_jobs : other_jobs).push_back({gi, k, p});
            }

    // Results keyed by (graph, instance, p); filled by workers, read in order.
    std::map<std::tuple<std::size_t, std::size_t, int>, ResultRow> results;
    std::map<std::tuple<std::size_t, std::size_t, int>, std::string> errors;
    std::map<std::pair<std::size_t, int>, QaoaParams> standard_optimum;
    std::mutex mutex;

    const int jobs = resolve_thread_count(config.jobs);
    auto run_job = [&](const detail::Job& job) {
        const auto& lg = outcome.graphs[job.graph];
        const auto& inst = instances[job.graph][job.instance];
        const auto& variant = config.variants[inst.variant_index];
        const auto t0 = std::chrono::steady_clock::now();
        try {
            OptimizerConfig oc = optimizer_for(config, lg, job.p);
            if (jobs > 1) oc.threads = 1;
            if ((variant.type == VariantType::cut || variant.type == VariantType::random_cut) &&
                variant.inject_standard_optimum && !variant.pin_equal_gammas) {
                QaoaParams std_opt;
                {
                    std::lock_guard lock(mutex);
                    auto it = standard_optimum.find({job.graph, job.p});
                    if (it == standard_optimum.end())
                        throw NotFoundError("standard optimum unavailable for injection");
                    std_opt = it->second;
                }
                QaoaParams lifted = QaoaParams::zeros(job.p, 2);
                for (int k = 0; k < job.p; ++k) {
                    lifted.gammas[static_cast<std::size_t>(2 * k)] = std_opt.gammas[static_cast<std::size_t>(k)];
                    lifted.gammas[static_cast<std::size_t>(2 * k + 1)] = std_opt.gammas[static_cast<std::size_t>(k)];
                }
                lifted.betas = std_opt.betas;
                oc.extra_starts.push_back(std::move(lifted));
            }
            const auto opt = multistart_optimize(inst.spec, lg.graph, job.p, oc, lg.c_max);
            const auto gates = gate_count(inst.spec, job.p, lg.graph.num_vertices());
            ResultRow row;
            row.graph_id = lg.source.id;
            row.n = lg.graph.num_vertices();
            row.m_original = lg.graph.num_edges();
            row.variant = std::string(to_string(variant.type));
            row.method = inst.method;
            row.detail = inst.detail;
            row.p = job.p;
            row.m_used = inst.m_used;
            row.scaled_p = scaled_depth(job.p, inst.m_used, lg.graph.num_edges());
            row.phase_gate_count = gates.phase_gates;
            row.expectation = opt.best_expectation;
            row.c_max = lg.c_max;
            row.ratio = opt.ratio;
            row.aligned_levels = inst.aligned_levels;
            row.seed = inst.seed;
            row.wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            std::lock_guard lock(mutex);
            if (variant.type == VariantType::standard) standard_optimum[{job.graph, job.p}] = opt.best_params;
            results[{job.graph, job.instance, job.p}] = std::move(row);
        } catch (const std::exception& e) {
            std::lock_guard lock(mutex);
            errors[{job.graph, job.instance, job.p}] = e.what();
        }
    };
    parallel_for(standard_jobs.size(), jobs, [&](std::size_t i, std::size_t) { run_job(standard_jobs[i]); });
    parallel_for(other_jobs.size(), jobs, [&](std::size_t i, std::size_t) { run_job(other_jobs[i]); });

    // Config order: graph, variant, instance, depth.
    for (std::size_t gi = 0; gi < instances.size(); ++gi)
        for (std::size_t k = 0; k < instances[gi].size(); ++k)
            for (int p : config.p_values) {
                const auto key = std::make_tuple(gi, k, p);
                if (auto it = results.find(key); it != results.end()) {
                    outcome.rows.push_back(it->second);
                } else {
                    const auto& inst = instances[gi][k];
                    outcome.failures.push_back({outcome.graphs[gi].source.id,
                                                config.variants[inst.variant_index].label, inst.detail, p,
                                                errors.count(key) ? errors[key] : "unknown failure"});
                }
            }

    if (!write_files) return outcome;
    std::filesystem::create_directories(config.output_dir);
    {
        const auto path = config.output_dir / "results.csv";
        std::ofstream out(path);
        if (!out) throw InputError("cannot write '" + path.string() + "'");
        write_csv(out, outcome.rows);
        outcome.files.push_back(path);
    }
    if (config.alignment && std::any_of(outcome.rows.begin(), outcome.rows.end(),
                                        [](const ResultRow& r) { return r.aligned_levels.has_value(); })) {
        const auto path = config.output_dir / "alignment.csv";
        std::ofstream out(path);
        write_alignment_csv(out, outcome.rows);
        outcome.files.push_back(path);
    }
    for (auto style : config.plots)
        for (auto& f : emit_plots(outcome.rows, style, config.output_dir)) outcome.files.push_back(f);
    {
        const auto path = config.output_dir / "manifest.json";
        std::ofstream out(path);
        out << build_manifest(config, outcome).dump(2) << '\n';
        outcome.files.push_back(path);
    }
    return outcome;
}

}  // namespace sqaoa::runner
