#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dense_oracle.hpp"
#include "sqaoa/error.hpp"
#include "sqaoa/rng.hpp"
#include "sqaoa/simulator.hpp"

using namespace sqaoa;
using std::numbers::pi;

namespace {

oracle::Vec to_vec(const Statevector& s) {
    oracle::Vec v(static_cast<Eigen::Index>(s.dimension()));
    for (std::size_t i = 0; i < s.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
    return v;
}

Statevector random_state(int n, Rng& rng) {
    std::vector<Complex> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto& x : a) {
        x = {standard_normal(rng), standard_normal(rng)};
        norm += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(norm);
    return Statevector(n, a);
}

Graph random_graph_any_size(int n, Rng& rng) {
    const int max_m = n * (n - 1) / 2;
    return generate_random_graph(n, static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_m) + 1)), rng());
}

Graph single_edge() { return Graph{2, {{0, 1}}}; }
Graph k3() { return Graph{3, {{0, 1}, {0, 2}, {1, 2}}}; }

// <C> for one edge at p = 1, worked out by hand from the 2-qubit state.
double single_edge_closed_form(double gamma, double beta) { return 0.5 + 0.5 * std::sin(4 * beta) * std::sin(gamma); }

}  // namespace

TEST(PlusState, Amplitudes) {
    const auto s1 = prepare_plus_state(1);
    EXPECT_NEAR(s1[0].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s1[1].real(), 1 / std::sqrt(2.0), 1e-15);
    const auto s2 = prepare_plus_state(2);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s2[i] - Complex{0.5, 0}), 0.0, 1e-15);
    EXPECT_THROW(prepare_plus_state(0), CapabilityError);
    EXPECT_THROW(prepare_plus_state(kMaxVertices + 1), CapabilityError);
}

TEST(PhaseOperator, ZeroGammaIsIdentity) {
    auto rng = make_rng(1);
    auto s = random_state(4, rng);
    const auto before = to_vec(s);
    const std::vector<double> g{0.0};
    apply_phase(s, PhaseSpec::standard(generate_random_graph(4, 5, 2)), g);
    EXPECT_LT((to_vec(s) - before).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PhaseOperator, CutEdgeAtPiFlipsSign) {
    auto s = Statevector::basis(2, parse_assignment("01"));
    const std::vector<double> g{pi};
    apply_phase(s, PhaseSpec::standard(single_edge()), g);
    EXPECT_NEAR(std::abs(s[parse_assignment("01")] - Complex{-1, 0}), 0.0, 1e-15);
}

TEST(PhaseOperator, ArityMismatch) {
    auto s = prepare_plus_state(3);
    const std::vector<double> two{0.1, 0.2};
    EXPECT_THROW(apply_phase(s, PhaseSpec::standard(k3()), two), InputError);
    const std::vector<double> one{0.1};
    EXPECT_THROW(apply_phase(s, PhaseSpec::cut_classes(k3(), make_solution(k3(), 4)), one), InputError);
    EXPECT_THROW(PhaseSpec::two_class(k3(), {1, 2}), InputError);
    EXPECT_THROW(PhaseSpec::two_class(k3(), {1, 2, 3}), InputError);
}

TEST(PhaseOperator, MatchesEdgeGadgetsOnTriangle) {
    auto rng = make_rng(3);
    for (int t = 0; t < 20; ++t) {
        auto s = random_state(3, rng);
        const auto psi = to_vec(s);
        const double gamma = uniform(rng, -pi, pi);
        const std::vector<double> g{gamma};
        apply_phase(s, PhaseSpec::standard(k3()), g);
        oracle::Mat u = oracle::Mat::Identity(8, 8);
        const auto tri = k3();
        for (const auto& e : tri.edges()) u = oracle::edge_gadget(e.u, e.v, -gamma, 3) * u;
        EXPECT_LT(oracle::phase_aligned_distance(to_vec(s), u * psi), 1e-10);
    }
}

TEST(Mixer, Examples) {
    auto rng = make_rng(4);
    auto s = random_state(3, rng);
    const auto before = to_vec(s);
    apply_mixer(s, 0.0);
    EXPECT_LT((to_vec(s) - before).cwiseAbs().maxCoeff(), 1e-15);

    for (int n = 1; n <= 4; ++n) {
        auto z = Statevector::basis(n, 0);
        apply_mixer(z, pi / 2);
        const Complex expected = std::pow(Complex{0, -1}, n);
        EXPECT_NEAR(std::abs(z[full_mask(n)] - expected), 0.0, 1e-12) << n;
    }
}

TEST(Mixer, MatchesKroneckerOracle) {
    auto rng = make_rng(5);
    for (int t = 0; t < 20; ++t) {
        auto s = random_state(3, rng);
        const auto psi = to_vec(s);
        const double beta = uniform(rng, -pi, pi);
        apply_mixer(s, beta);
        const auto rx = oracle::rx(2 * beta);
        const oracle::Mat u = oracle::kron(oracle::kron(rx, rx), rx);
        EXPECT_LT((to_vec(s) - u * psi).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(TrialState, ZeroDepthAndZeroAnglesGivePlusState) {
    const auto g = generate_random_graph(5, 7, 1);
    const auto plus = to_vec(prepare_plus_state(5));
    const auto spec = PhaseSpec::standard(g);
    EXPECT_LT((to_vec(trial_state(5, spec, QaoaParams::zeros(0, 1))) - plus).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((to_vec(trial_state(5, spec, QaoaParams::zeros(3, 1))) - plus).cwiseAbs().maxCoeff(), 1e-15);
}

// The optimum of the exp(-i beta X) mixer convention sits at beta = pi/8.
TEST(TrialState, SingleEdgeOptimum) {
    const auto g = single_edge();
    const auto s = trial_state(2, PhaseSpec::standard(g), QaoaParams{1, {pi / 2}, {pi / 8}});
    EXPECT_NEAR(expectation(s, g), 1.0, 1e-9);
}

TEST(TrialState, SingleEdgeClosedForm) {
    const auto g = single_edge();
    auto rng = make_rng(6);
    for (int t = 0; t < 50; ++t) {
        const double gamma = uniform(rng, -pi, pi), beta = uniform(rng, -pi, pi);
        const auto s = trial_state(2, PhaseSpec::standard(g), QaoaParams{1, {gamma}, {beta}});
        EXPECT_NEAR(expectation(s, g), single_edge_closed_form(gamma, beta), 1e-12);
    }
}

TEST(TrialState, MatchesGateCircuit) {
    auto rng = make_rng(7);
    for (int t = 0; t < 40; ++t) {
        const int n = 2 + static_cast<int>(uniform_below(rng, 2));
        const int p = 1 + static_cast<int>(uniform_below(rng, 3));
        const auto g = random_graph_any_size(n, rng);
        const bool two = g.num_edges() > 0 && uniform01(rng) < 0.5;
        std::vector<int> classes;
        if (two)
            for (int e = 0; e < g.num_edges(); ++e) classes.push_back(1 + static_cast<int>(uniform_below(rng, 2)));
        const auto spec = two ? PhaseSpec::two_class(g, classes) : PhaseSpec::standard(g);
        QaoaParams params = QaoaParams::zeros(p, spec.gamma_arity());
        for (auto& x : params.gammas) x = uniform(rng, -pi, pi);
        for (auto& x : params.betas) x = uniform(rng, -pi, pi);
        const auto got = to_vec(trial_state(n, spec, params));
        const auto want = oracle::circuit_state(g, n, classes, spec.gamma_arity(), params.gammas, params.betas);
        EXPECT_LT(oracle::phase_aligned_distance(got, want), 1e-10);
    }
}

TEST(TrialState, ParamValidation) {
    const auto spec = PhaseSpec::standard(k3());
    EXPECT_THROW(trial_state(3, spec, QaoaParams{1, {0.1, 0.2}, {0.3}}), InputError);
    EXPECT_THROW(trial_state(3, spec, QaoaParams{2, {0.1, 0.2}, {0.3}}), InputError);
    EXPECT_THROW(trial_state(3, spec, QaoaParams{3, {0.1, 0.2, 0.3}, {0.3}}), InputError);
}

TEST(Expectation, PlusStateIsHalfTheEdges) {
    auto rng = make_rng(8);
    for (int t = 0; t < 20; ++t) {
        const auto g = random_graph_any_size(2 + static_cast<int>(uniform_below(rng, 9)), rng);
        EXPECT_NEAR(expectation(prepare_plus_state(g.num_vertices()), g), g.num_edges() / 2.0, 1e-10);
    }
}

TEST(Expectation, BasisStateIsCutValue) {
    const auto g = generate_random_graph(6, 9, 3);
    for (Bitstring x = 0; x < 64; ++x) EXPECT_NEAR(expectation(Statevector::basis(6, x), g), cut_value(g, x), 1e-12);
}

TEST(Expectation, MatchesDenseHamiltonian) {
    auto rng = make_rng(9);
    const auto h = oracle::maxcut_hamiltonian(k3());
    for (int t = 0; t < 20; ++t) {
        const auto s = random_state(3, rng);
        const auto v = to_vec(s);
        EXPECT_NEAR(expectation(s, k3()), (v.adjoint() * h * v)(0).real(), 1e-10);
    }
    EXPECT_THROW(expectation(prepare_plus_state(2), k3()), InputError);
}

TEST(ApproximationRatio, Examples) {
    EXPECT_DOUBLE_EQ(approximation_ratio(15.0, 20), 0.75);
    EXPECT_DOUBLE_EQ(approximation_ratio(1.0, 1), 1.0);
    EXPECT_DOUBLE_EQ(approximation_ratio(20.0, 20), 1.0);
    EXPECT_THROW(approximation_ratio(0.0, 0), InputError);
}

TEST(GateCount, Examples) {
    const auto g30 = generate_random_graph(10, 30, 1);
    const auto g20 = generate_random_graph(10, 20, 1);
    EXPECT_EQ(gate_count(PhaseSpec::standard(g30), 2, 10).phase_gates, 180);
    EXPECT_EQ(gate_count(PhaseSpec::standard(g20), 3, 10).phase_gates, 180);
    EXPECT_EQ(gate_count(PhaseSpec::standard(g30), 4, 10).phase_gates, 360);
    EXPECT_EQ(gate_count(PhaseSpec::standard(g20), 6, 10).phase_gates, 360);
    const auto zero = gate_count(PhaseSpec::standard(g30), 0, 10);
    EXPECT_EQ(zero.h, 10);
    EXPECT_EQ(zero.total, 10);
    const auto two = gate_count(PhaseSpec::standard(g20), 3, 10);
    EXPECT_EQ(two.total, 10 + 3 * (3 * 20 + 10));
    EXPECT_DOUBLE_EQ(scaled_depth(3, 20, 30), 2.0);
}

TEST(QaoaCircuit, MatchesFreeFunctions) {
    const auto g = generate_random_graph(7, 12, 4);
    const auto sparse = g.filter_edges([](std::size_t i) { return i % 3 != 0; });
    const auto spec = PhaseSpec::standard(sparse);
    QaoaCircuit circuit(spec, g);
    const QaoaParams params{1, {0.3, -0.7}, {0.2, 1.1}};
    EXPECT_NEAR(circuit.expectation(params), expectation(trial_state(7, spec, params), g), 1e-12);
    EXPECT_NEAR(circuit.expectation(params), circuit.expectation(params), 0.0);
}

TEST(CutClasses, EqualGammasMatchStandard) {
    auto rng = make_rng(10);
    for (int t = 0; t < 10; ++t) {
        const auto g = generate_random_graph(6, 9, rng());
        const auto sol = make_solution(g, static_cast<Bitstring>(uniform_below(rng, 64)));
        QaoaParams std_params = QaoaParams::zeros(2, 1), cut_params = QaoaParams::zeros(2, 2);
        for (int k = 0; k < 2; ++k) {
            const double gm = uniform(rng, -pi, pi), bt = uniform(rng, -pi, pi);
            std_params.gammas[static_cast<std::size_t>(k)] = gm;
            cut_params.gammas[static_cast<std::size_t>(2 * k)] = gm;
            cut_params.gammas[static_cast<std::size_t>(2 * k + 1)] = gm;
            std_params.betas[static_cast<std::size_t>(k)] = cut_params.betas[static_cast<std::size_t>(k)] = bt;
        }
        const double a = expectation(trial_state(6, PhaseSpec::standard(g), std_params), g);
        const double b = expectation(trial_state(6, PhaseSpec::cut_classes(g, sol), cut_params), g);
        EXPECT_NEAR(a, b, 1e-12);
    }
}
