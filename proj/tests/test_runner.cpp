#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "sqaoa/error.hpp"
#include "sqaoa/runner/config.hpp"
#include "sqaoa/runner/experiment.hpp"
#include "sqaoa/runner/plot.hpp"
#include "sqaoa/runner/results.hpp"

using namespace sqaoa;
using namespace sqaoa::runner;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sqaoa_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json small_config() {
    return json::parse(R"({
        "schema_version": 1,
        "name": "unit",
        "root_seed": 5,
        "graphs": [{"id": "g", "generate": {"n": 6, "m": 10, "seed": 2}}],
        "p_values": [1, 2],
        "optimizer": {"num_random_starts": 4},
        "variants": [{"type": "standard"},
                     {"type": "sparse", "initial": {"choice": "exact"}},
                     {"type": "cut", "initial": {"choice": "exact"}, "pin_equal_gammas": true, "label": "pinned"},
                     {"type": "cut", "initial": {"choice": "exact"}},
                     {"type": "random_sparse", "p_e": 0.5, "initial": {"choice": "distance", "d": [0, 1]}},
                     {"type": "sparsifier", "method": "effective", "target_ratio": 0.66}]
    })");
}

int count_matches(const std::string& s, const std::string& pattern) {
    const std::regex re(pattern);
    return static_cast<int>(std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator()));
}

std::string strip_timing(const std::vector<ResultRow>& rows) {
    auto copy = rows;
    for (auto& r : copy) r.wall_time_ms = 0.0;
    std::ostringstream os;
    write_csv(os, copy);
    return os.str();
}

}  // namespace

TEST(Csv, RoundTripWithEscaping) {
    ResultRow r;
    r.graph_id = "g,1";
    r.n = 10;
    r.m_original = 30;
    r.variant = "sparse";
    r.method = "exact";
    r.detail = "say \"hi\"";
    r.p = 3;
    r.m_used = 20;
    r.scaled_p = 2.0;
    r.phase_gate_count = 180;
    r.expectation = 17.123456789;
    r.c_max = 20;
    r.ratio = 0.85617283945;
    r.aligned_levels = 2;
    r.seed = 18446744073709551615ULL;
    r.wall_time_ms = 1.5;
    ResultRow none = r;
    none.aligned_levels.reset();
    std::stringstream ss;
    write_csv(ss, {r, none});
    const auto back = read_csv(ss);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].graph_id, r.graph_id);
    EXPECT_EQ(back[0].detail, r.detail);
    EXPECT_EQ(back[0].seed, r.seed);
    EXPECT_EQ(back[0].aligned_levels, 2);
    EXPECT_FALSE(back[1].aligned_levels.has_value());
    EXPECT_NEAR(back[0].ratio, r.ratio, 1e-12);
    EXPECT_EQ(back[0].phase_gate_count, 180);
}

TEST(Csv, RejectsMissingColumns) {
    std::istringstream in("graph_id,n\ng,3\n");
    EXPECT_THROW(read_csv(in), InputError);
    std::istringstream empty("");
    EXPECT_THROW(read_csv(empty), InputError);
}

TEST(Config, ParsesAndLabels) {
    const auto c = parse_config(small_config());
    EXPECT_EQ(c.variants.size(), 6u);
    EXPECT_EQ(c.variants[0].label, "standard");
    EXPECT_EQ(c.variants[2].label, "pinned");
    EXPECT_EQ(c.variants[3].label, "cut");
    EXPECT_EQ(c.optimizer.num_random_starts, 4);
    EXPECT_EQ(c.config_hash.size(), 16u);
}

TEST(Config, RejectsMistakes) {
    auto bad = [](auto mutate) {
        auto j = small_config();
        mutate(j);
        return j;
    };
    EXPECT_THROW(parse_config(bad([](json& j) { j["colour"] = 1; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["schema_version"] = 2; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["p_values"] = json::array({0}); })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["variants"][4].erase("p_e"); })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["variants"][0]["p_e"] = 0.5; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["variants"][5]["method"] = "spectral"; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["variants"][5]["params"] = {{"k", 2}}; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["optimizer"]["memory"] = 0; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["graphs"][0]["generate"]["m"] = 99; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["variants"].erase(0); })), ConfigError);  // cut needs standard
    EXPECT_THROW(parse_config(bad([](json& j) { j["variants"][1]["initial"]["choice"] = "magic"; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["plots"] = json::array({"pie"}); })), ConfigError);
}

TEST(Runner, PinnedCutMatchesStandardAndCutDominates) {
    const auto out = run_experiment(parse_config(small_config()), false);
    EXPECT_TRUE(out.failures.empty());
    std::map<int, double> standard, pinned, cut;
    for (const auto& r : out.rows) {
        if (r.variant == "standard") standard[r.p] = r.expectation;
        if (r.variant == "cut" && r.detail.find("pinned") != std::string::npos) pinned[r.p] = r.expectation;
        if (r.variant == "cut" && r.detail.find("pinned") == std::string::npos) cut[r.p] = r.expectation;
    }
    ASSERT_EQ(standard.size(), 2u);
    for (const auto& [p, e] : standard) {
        EXPECT_NEAR(pinned.at(p), e, 1e-9);
        EXPECT_GE(cut.at(p), e - 1e-9);
    }
}

TEST(Runner, SparseKeepsOnlyCutEdges) {
    auto j = small_config();
    j["graphs"] = json::array({{{"id", "thirty"}, {"generate", {{"n", 10}, {"m", 30}, {"seed", 1}}}}});
    j["p_values"] = json::array({1});
    j["variants"] = json::array({{{"type", "sparse"}, {"initial", {{"choice", "exact"}}}}});
    const auto c = parse_config(j);
    const auto lg = load_graph(c.graphs[0], c.root_seed);
    ASSERT_EQ(lg.c_max, 20);
    const auto inst = expand_variant(c, lg, 0);
    ASSERT_EQ(inst.size(), 1u);
    EXPECT_EQ(inst[0].m_used, 20);
    EXPECT_GE(*inst[0].aligned_levels, 1);
}

TEST(Runner, RemoveCountsAllExpandsEveryK) {
    auto j = small_config();
    j["variants"] = json::array({{{"type", "sparse"}, {"remove_counts", "all"}}});
    const auto c = parse_config(j);
    const auto lg = load_graph(c.graphs[0], c.root_seed);
    const auto inst = expand_variant(c, lg, 0);
    const int uncut = lg.graph.num_edges() - lg.c_max;
    ASSERT_EQ(static_cast<int>(inst.size()), uncut + 1);
    for (int k = 0; k <= uncut; ++k) EXPECT_EQ(inst[static_cast<std::size_t>(k)].m_used, lg.graph.num_edges() - k);
}

TEST(Runner, SingleEdgeFromFile) {
    const auto dir = scratch_dir("edge");
    std::ofstream(dir / "edge.txt") << "2 1\n0 1\n";
    std::ofstream(dir / "cfg.json") << R"({"schema_version": 1, "graphs": [{"id": "e", "file": "edge.txt"}],
        "p_values": [1], "variants": [{"type": "standard"}]})";
    auto c = load_config(dir / "cfg.json");
    c.output_dir = dir / "out";
    const auto out = run_experiment(c);
    ASSERT_EQ(out.rows.size(), 1u);
    EXPECT_NEAR(out.rows[0].ratio, 1.0, 1e-4);
    EXPECT_TRUE(fs::exists(dir / "out" / "results.csv"));
    EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
}

TEST(Runner, MissingGraphFileIsReportedNotThrown) {
    auto j = small_config();
    j["graphs"].push_back({{"id", "ghost"}, {"file", "/nonexistent/graph.txt"}});
    const auto out = run_experiment(parse_config(j), false);
    ASSERT_FALSE(out.failures.empty());
    EXPECT_EQ(out.failures[0].graph_id, "ghost");
    EXPECT_FALSE(out.rows.empty());
}

TEST(Runner, DeterministicAcrossRunsAndThreadCounts) {
    auto c = parse_config(small_config());
    const auto a = run_experiment(c, false);
    c.jobs = 4;
    const auto b = run_experiment(c, false);
    EXPECT_EQ(strip_timing(a.rows), strip_timing(b.rows));
}

TEST(Runner, DryRunDescribesPlan) {
    const auto plan = describe_plan(parse_config(small_config()));
    EXPECT_NE(plan.find("graph g: n=6 m=10"), std::string::npos);
    EXPECT_NE(plan.find("random_sparse: 2 instance(s) x 2 depth(s)"), std::string::npos);
}

TEST(Plot, ThreeMarkersAndLegend) {
    Chart c{"t", "x", "y", {Series{"s", {{1, 0.5}, {2, 0.6}, {3, 0.7}}, true}}};
    const auto svg = render_svg(c);
    EXPECT_EQ(count_matches(svg, "class=\"marker\""), 3);
    EXPECT_EQ(count_matches(svg, "class=\"legend\""), 1);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
}

TEST(Plot, ScaledDepthAxis) {
    ResultRow r;
    r.graph_id = "g";
    r.variant = "sparse";
    r.p = 3;
    r.m_used = 20;
    r.m_original = 30;
    r.scaled_p = scaled_depth(3, 20, 30);
    r.ratio = 0.9;
    const auto charts = build_charts({r}, PlotStyle::ratio_vs_scaled_p);
    ASSERT_EQ(charts.size(), 1u);
    EXPECT_DOUBLE_EQ(charts[0].series[0].points[0].first, 2.0);
}

TEST(Plot, DeltaVsAlignmentUsesStandardRows) {
    ResultRow s, a, b;
    s.graph_id = a.graph_id = b.graph_id = "g";
    s.p = a.p = b.p = 1;
    s.variant = "standard";
    s.ratio = 0.8;
    a.variant = b.variant = "sparse";
    a.ratio = 0.85;
    a.aligned_levels = 2;
    b.ratio = 0.7;
    b.aligned_levels = 0;
    b.detail = "x";
    const auto pts = alignment_deltas({s, a, b});
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_NEAR(pts[0].second, 0.05, 1e-12);
    EXPECT_NEAR(pts[1].second, -0.1, 1e-12);
    const auto charts = build_charts({s, a, b}, PlotStyle::delta_vs_alignment);
    ASSERT_EQ(charts.size(), 1u);
    EXPECT_EQ(charts[0].series.size(), 2u);
}

TEST(Plot, EmptyInputWritesNothing) {
    const auto dir = scratch_dir("plot_empty");
    EXPECT_TRUE(emit_plots({}, PlotStyle::ratio_vs_p, dir / "plots").empty());
    EXPECT_FALSE(fs::exists(dir / "plots"));
}
