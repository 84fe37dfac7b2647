#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sqaoa/error.hpp"
#include "sqaoa/heuristics.hpp"
#include "sqaoa/optimizer.hpp"

using namespace sqaoa;
using std::numbers::pi;

namespace {

Graph single_edge() { return Graph{2, {{0, 1}}}; }
Graph k3() { return Graph{3, {{0, 1}, {0, 2}, {1, 2}}}; }
Graph p3() { return Graph{3, {{0, 1}, {1, 2}}}; }

// Derivatives of 1/2 + 1/2 sin(4 beta) sin(gamma).
std::vector<double> single_edge_gradient(double gamma, double beta) {
    return {0.5 * std::sin(4 * beta) * std::cos(gamma), 2.0 * std::cos(4 * beta) * std::sin(gamma)};
}

// Best p = 1 expectation on a 400 x 400 grid over [-pi, pi]^2.
double grid_maximum(const Graph& g) {
    QaoaCircuit circuit(PhaseSpec::standard(g), g);
    double best = -1.0;
    const int steps = 400;
    for (int i = 0; i < steps; ++i)
        for (int j = 0; j < steps; ++j) {
            const double gamma = -pi + 2 * pi * (i + 0.5) / steps;
            const double beta = -pi + 2 * pi * (j + 0.5) / steps;
            best = std::max(best, circuit.expectation(QaoaParams{1, {gamma}, {beta}}));
        }
    return best;
}

}  // namespace

TEST(Objective, Examples) {
    const auto g = generate_random_graph(8, 13, 2);
    const auto spec = PhaseSpec::standard(g);
    EXPECT_NEAR(objective(spec, g, QaoaParams::zeros(2, 1)), 6.5, 1e-10);
    EXPECT_NEAR(objective(PhaseSpec::standard(single_edge()), single_edge(), QaoaParams{1, {pi / 2}, {pi / 8}}), 1.0,
                1e-9);
    const QaoaParams a{1, {0.4, -1.2}, {0.3, 0.9}};
    QaoaParams b = a;
    for (auto& x : b.gammas) x += 2 * pi;
    EXPECT_NEAR(objective(spec, g, a), objective(spec, g, b), 1e-10);
}

TEST(Gradient, MatchesClosedForm) {
    const auto g = single_edge();
    const auto spec = PhaseSpec::standard(g);
    auto rng = make_rng(1);
    for (int t = 0; t < 30; ++t) {
        const double gamma = uniform(rng, -pi, pi), beta = uniform(rng, -pi, pi);
        const auto fd = gradient(spec, g, QaoaParams{1, {gamma}, {beta}}, 1e-6);
        const auto exact = single_edge_gradient(gamma, beta);
        ASSERT_EQ(fd.size(), 2u);
        EXPECT_NEAR(fd[0], exact[0], 1e-5);
        EXPECT_NEAR(fd[1], exact[1], 1e-5);
    }
}

TEST(Gradient, LengthFollowsArity) {
    const auto g = k3();
    const auto spec = PhaseSpec::cut_classes(g, make_solution(g, 4));
    EXPECT_EQ(gradient(spec, g, QaoaParams::zeros(3, 2), 1e-6).size(), 9u);
}

TEST(LocalOptimize, StartAtOptimum) {
    const auto g = single_edge();
    OptimizerConfig cfg;
    const auto r = local_optimize(PhaseSpec::standard(g), g, QaoaParams{1, {pi / 2}, {pi / 8}}, cfg);
    EXPECT_LE(r.iterations, 2);
    EXPECT_NEAR(r.final_value, 1.0, 1e-9);
    EXPECT_NEAR(r.final_params.gammas[0], pi / 2, 1e-4);
    EXPECT_NEAR(r.final_params.betas[0], pi / 8, 1e-4);
}

TEST(LocalOptimize, SingleEdgeFromSmallStart) {
    const auto g = single_edge();
    OptimizerConfig cfg;
    const auto r = local_optimize(PhaseSpec::standard(g), g, QaoaParams{1, {0.1}, {0.1}}, cfg);
    EXPECT_TRUE(r.error.empty());
    EXPECT_NEAR(r.final_value, 1.0, 1e-4);
    EXPECT_GE(r.final_value, r.initial_value);
    const auto grad = gradient(PhaseSpec::standard(g), g, r.final_params, 1e-6);
    EXPECT_LE(std::hypot(grad[0], grad[1]), 1e-4);
}

TEST(LocalOptimize, StationaryOnRandomGraph) {
    const auto g = generate_random_graph(7, 12, 3);
    const auto spec = PhaseSpec::standard(g);
    OptimizerConfig cfg;
    const auto r = local_optimize(spec, g, QaoaParams{1, {0.2, 0.4}, {0.5, 0.3}}, cfg);
    const auto grad = gradient(spec, g, r.final_params, 1e-6);
    double norm = 0.0;
    for (double x : grad) norm += x * x;
    EXPECT_LE(std::sqrt(norm), 1e-4);
}

TEST(Multistart, SingleEdgeRatio) {
    const auto g = single_edge();
    OptimizerConfig cfg;
    cfg.seed = 11;
    const auto r = multistart_optimize(PhaseSpec::standard(g), g, 1, cfg);
    EXPECT_NEAR(r.ratio, 1.0, 1e-4);
    EXPECT_EQ(r.starts.size(), 31u);
}

TEST(Multistart, AgreesWithGridSearch) {
    for (const auto& g : {k3(), p3()}) {
        OptimizerConfig cfg;
        cfg.seed = 5;
        const auto r = multistart_optimize(PhaseSpec::standard(g), g, 1, cfg);
        const double grid = grid_maximum(g);
        EXPECT_NEAR(r.best_expectation, grid, 1e-3);
        EXPECT_GE(r.best_expectation, grid - 1e-9);
    }
}

TEST(Multistart, Deterministic) {
    const auto g = generate_random_graph(6, 9, 8);
    OptimizerConfig cfg;
    cfg.seed = 3;
    cfg.num_random_starts = 6;
    const auto a = multistart_optimize(PhaseSpec::standard(g), g, 2, cfg);
    cfg.threads = 4;
    const auto b = multistart_optimize(PhaseSpec::standard(g), g, 2, cfg);
    EXPECT_EQ(a.best_expectation, b.best_expectation);
    EXPECT_EQ(a.best_params.flatten(), b.best_params.flatten());
    EXPECT_EQ(a.best_start, b.best_start);
    ASSERT_EQ(a.starts.size(), b.starts.size());
    for (std::size_t i = 0; i < a.starts.size(); ++i) EXPECT_EQ(a.starts[i].final_value, b.starts[i].final_value);
}

TEST(Multistart, CutQaoaWithInjectedStandardOptimum) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto g = generate_random_graph(7, 12, seed);
        OptimizerConfig cfg;
        cfg.seed = seed;
        cfg.num_random_starts = 8;
        const auto standard = multistart_optimize(PhaseSpec::standard(g), g, 2, cfg);
        QaoaParams lifted = QaoaParams::zeros(2, 2);
        for (int k = 0; k < 2; ++k) {
            lifted.gammas[static_cast<std::size_t>(2 * k)] = standard.best_params.gammas[static_cast<std::size_t>(k)];
            lifted.gammas[static_cast<std::size_t>(2 * k + 1)] = standard.best_params.gammas[static_cast<std::size_t>(k)];
            lifted.betas[static_cast<std::size_t>(k)] = standard.best_params.betas[static_cast<std::size_t>(k)];
        }
        cfg.extra_starts = {lifted};
        const auto sol = initial_solution(g, InitialChoice::exact, 0);
        const auto cut = multistart_optimize(PhaseSpec::cut_classes(g, sol), g, 2, cfg);
        EXPECT_GE(cut.best_expectation, standard.best_expectation - 1e-9);
    }
}

TEST(Multistart, RejectsBadConfig) {
    const auto g = single_edge();
    OptimizerConfig cfg;
    cfg.gradient_step = 0.0;
    EXPECT_THROW(multistart_optimize(PhaseSpec::standard(g), g, 1, cfg), ConfigError);
    cfg = {};
    cfg.extra_starts = {QaoaParams::zeros(2, 1)};
    EXPECT_THROW(multistart_optimize(PhaseSpec::standard(g), g, 1, cfg), InputError);
    cfg = {};
    cfg.num_random_starts = 0;
    cfg.ramp_start = false;
    EXPECT_THROW(multistart_optimize(PhaseSpec::standard(g), g, 1, cfg), ConfigError);
    EXPECT_THROW(multistart_optimize(PhaseSpec::standard(g), g, 0, OptimizerConfig{}), InputError);
}
