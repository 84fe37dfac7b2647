// sqaoa: command-line front end for the QAOA sparsification experiments.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqaoa/sqaoa.hpp"
#include "sqaoa/runner/config.hpp"
#include "sqaoa/runner/experiment.hpp"
#include "sqaoa/runner/plot.hpp"
#include "sqaoa/runner/results.hpp"

namespace {

using namespace sqaoa;

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::optional<std::string>& out_dir, std::optional<int> jobs, bool dry_run) {
    auto j = runner::load_config_json(config_path);
    if (seed) j["root_seed"] = *seed;
    if (out_dir) j["output_dir"] = *out_dir;
    if (jobs) j["jobs"] = *jobs;
    const std::filesystem::path path(config_path);
    const auto config = runner::parse_config(j, path.parent_path().empty() ? "." : path.parent_path());
    if (dry_run) {
        std::cout << runner::describe_plan(config);
        return 0;
    }
    const auto outcome = runner::run_experiment(config);
    std::cout << "wrote " << outcome.rows.size() << " rows to " << config.output_dir.string() << '\n';
    for (const auto& f : outcome.files) std::cout << "  " << f.string() << '\n';
    if (!outcome.failures.empty()) {
        std::cerr << outcome.failures.size() << " job(s) failed; see manifest.json\n";
        for (const auto& f : outcome.failures)
            std::cerr << "  " << f.graph_id << ' ' << f.variant << ' ' << f.detail << " p=" << f.p << ": " << f.error
                      << '\n';
        return 3;
    }
    return 0;
}

int cmd_plot(const std::string& csv, const std::string& style, const std::string& out_dir) {
    const auto rows = runner::read_csv_file(csv);
    for (const auto& f : runner::emit_plots(rows, runner::parse_plot_style(style), out_dir))
        std::cout << f.string() << '\n';
    return 0;
}

int cmd_align(const std::string& a, const std::string& b, const std::string& rule) {
    const auto ga = read_edge_list_file(a);
    const auto gb = read_edge_list_file(b);
    AlignmentRule r;
    if (rule == "prefix") r = AlignmentRule::prefix;
    else if (rule == "largest") r = AlignmentRule::largest_index;
    else throw ConfigError("unknown alignment rule '" + rule + "'");
    const auto report = aligned_levels(ga, gb, r);
    std::cout << "aligned_levels " << report.aligned_levels << '\n';
    std::cout << "ground_state_aligned " << (report.ground_state_aligned ? "yes" : "no") << '\n';
    std::cout << "level,size_a,size_b,containment\n";
    for (const auto& d : report.levels)
        std::cout << d.level << ',' << d.size_first << ',' << d.size_second << ',' << to_string(d.containment) << '\n';
    return 0;
}

int cmd_maxcut(const std::string& path, bool all) {
    const auto g = read_edge_list_file(path);
    const auto result = brute_force_maxcut(g);
    std::cout << "c_max " << result.c_max << '\n';
    std::cout << "optima " << result.optima.size() << " (up to complement)\n";
    const std::size_t shown = all ? result.optima.size() : std::min<std::size_t>(1, result.optima.size());
    for (std::size_t i = 0; i < shown; ++i) std::cout << format_assignment(result.optima[i], g.num_vertices()) << '\n';
    return 0;
}

int cmd_sparsify(const std::string& path, const std::string& method, double ratio, std::uint64_t seed,
                 const std::vector<std::string>& params) {
    const auto g = read_edge_list_file(path);
    SparsifyConfig cfg;
    cfg.method = parse_sparsify_method(method);
    cfg.target_ratio = ratio;
    cfg.seed = seed;
    for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--param expects key=value, got '" + kv + "'");
        try {
            cfg.method_params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::logic_error&) {
            throw ConfigError("--param value for '" + kv.substr(0, eq) + "' is not a number");
        }
    }
    write_edge_list(std::cout, sparsify(g, cfg));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulate QAOA for MaxCut with sparsified and two-parameter phase operators"};
    app.set_version_flag("--version", std::string(sqaoa::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> jobs;
    bool dry_run = false;
    auto* run = app.add_subcommand("run", "Run an experiment config and write CSV, manifest and plots");
    run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Override the root seed");
    run->add_option("--out-dir", out_dir, "Override the output directory");
    run->add_option("--jobs", jobs, "Worker count (0 = all cores)");
    run->add_flag("--dry-run", dry_run, "Validate the config and print the planned sweep");

    std::string csv_path, style = "ratio_vs_p", plot_dir = ".";
    auto* plot = app.add_subcommand("plot", "Render SVG plots from a results CSV");
    plot->add_option("csv", csv_path, "results.csv")->required()->check(CLI::ExistingFile);
    plot->add_option("--style", style, "ratio_vs_p | ratio_vs_scaled_p | delta_vs_alignment");
    plot->add_option("--out-dir", plot_dir, "Directory for the SVG files");

    std::string graph_a, graph_b, rule = "prefix";
    auto* align = app.add_subcommand("align", "Count aligned energy levels between two graphs");
    align->add_option("graph_a", graph_a)->required()->check(CLI::ExistingFile);
    align->add_option("graph_b", graph_b)->required()->check(CLI::ExistingFile);
    align->add_option("--rule", rule, "prefix (default) or largest");

    std::string maxcut_path;
    bool all_optima = false;
    auto* maxcut = app.add_subcommand("maxcut", "Exact MaxCut by enumeration");
    maxcut->add_option("graph", maxcut_path)->required()->check(CLI::ExistingFile);
    maxcut->add_flag("--all", all_optima, "List every optimum (one per complement pair)");

    std::string sparsify_path, method;
    double ratio = 0.66;
    std::uint64_t sparsify_seed = 0;
    std::vector<std::string> params;
    auto* sparsify = app.add_subcommand("sparsify", "Sparsify a graph and print the kept edge list");
    sparsify->add_option("graph", sparsify_path)->required()->check(CLI::ExistingFile);
    sparsify->add_option("--method", method, "random | algebraic | fire | degree | similarity | scan | simmelian | effective")
        ->required();
    sparsify->add_option("--ratio", ratio, "Fraction of edges to keep")->check(CLI::Range(0.0, 1.0));
    sparsify->add_option("--seed", sparsify_seed);
    sparsify->add_option("--param", params, "Method parameter key=value (repeatable)");

    int gen_n = 0, gen_m = 0;
    std::uint64_t gen_seed = 0;
    auto* generate = app.add_subcommand("generate", "Print a seeded G(n, m) random graph");
    generate->add_option("n", gen_n)->required();
    generate->add_option("m", gen_m)->required();
    generate->add_option("--seed", gen_seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path, seed, out_dir, jobs, dry_run);
        if (*plot) return cmd_plot(csv_path, style, plot_dir);
        if (*align) return cmd_align(graph_a, graph_b, rule);
        if (*maxcut) return cmd_maxcut(maxcut_path, all_optima);
        if (*sparsify) return cmd_sparsify(sparsify_path, method, ratio, sparsify_seed, params);
        if (*generate) {
            sqaoa::write_edge_list(std::cout, sqaoa::generate_random_graph(gen_n, gen_m, gen_seed));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
