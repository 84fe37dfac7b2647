#pragma once

// Edge scoring for graph sparsification and the two solution-guided
// sparsifiers. Every scorer produces one score per edge in canonical edge
// order; filter_to_ratio then keeps the best-ranked fraction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sqaoa/error.hpp"
#include "sqaoa/graph.hpp"
#include "sqaoa/rng.hpp"

namespace sqaoa {

enum class SparsifyMethod { random, algebraic, fire, degree, similarity, scan, simmelian, effective };

inline constexpr std::array<SparsifyMethod, 8> kAllSparsifyMethods = {
    SparsifyMethod::random,     SparsifyMethod::algebraic, SparsifyMethod::fire,
    SparsifyMethod::degree,     SparsifyMethod::similarity, SparsifyMethod::scan,
    SparsifyMethod::simmelian,  SparsifyMethod::effective};

inline std::string_view to_string(SparsifyMethod m) {
    switch (m) {
        case SparsifyMethod::random: return "random";
        case SparsifyMethod::algebraic: return "algebraic";
        case SparsifyMethod::fire: return "fire";
        case SparsifyMethod::degree: return "degree";
        case SparsifyMethod::similarity: return "similarity";
        case SparsifyMethod::scan: return "scan";
        case SparsifyMethod::simmelian: return "simmelian";
        case SparsifyMethod::effective: return "effective";
    }
    return "?";
}

inline SparsifyMethod parse_sparsify_method(std::string_view name) {
    for (auto m : kAllSparsifyMethods)
        if (to_string(m) == name) return m;
    throw ConfigError("unknown sparsification method '" + std::string(name) + "'");
}

enum class ScoreDirection { keep_high, keep_low };

struct EdgeScores {
    Graph graph;
    std::vector<double> scores;  // aligned with graph.edges()
    ScoreDirection direction = ScoreDirection::keep_high;
};

// method_params keys (all optional):
//   algebraic:  vectors (10), sweeps (20), omega (0.5), norm (2),
//               exponent (1), reverse (0; 1 keeps the largest distances)
//   fire:       burn_probability (0.7), budget_factor (100)
//   simmelian:  max_rank (10)
struct SparsifyConfig {
    SparsifyMethod method = SparsifyMethod::random;
    double target_ratio = 1.0;
    std::uint64_t seed = 0;
    std::map<std::string, double> method_params;
};

namespace detail {

class ParamReader {
public:
    ParamReader(const SparsifyConfig& cfg, std::initializer_list<std::string_view> allowed)
        : params_(cfg.method_params) {
        for (const auto& [key, value] : params_) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                throw ConfigError("method '" + std::string(to_string(cfg.method)) +
                                  "' has no parameter '" + key + "'");
            if (!std::isfinite(value)) throw ConfigError("parameter '" + key + "' is not finite");
        }
    }

    double get(const std::string& key, double fallback) const {
        auto it = params_.find(key);
        return it == params_.end() ? fallback : it->second;
    }

    int get_int(const std::string& key, int fallback, int min_value) const {
        const double v = get(key, fallback);
        if (v != std::floor(v) || v < min_value)
            throw ConfigError("parameter '" + key + "' must be an integer >= " + std::to_string(min_value));
        return static_cast<int>(v);
    }

private:
    const std::map<std::string, double>& params_;
};

inline void reject_params(const SparsifyConfig& cfg) {
    if (!cfg.method_params.empty())
        throw ConfigError("method '" + std::string(to_string(cfg.method)) + "' takes no parameters (got '" +
                          cfg.method_params.begin()->first + "')");
}

inline std::vector<std::vector<int>> adjacency_lists(const Graph& g) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) adj[static_cast<std::size_t>(v)] = g.neighbors(v);
    return adj;
}

inline std::vector<double> random_scores(const Graph& g, Rng& rng) {
    std::vector<double> s(static_cast<std::size_t>(g.num_edges()));
    for (auto& x : s) x = uniform01(rng);
    return s;
}

// Algebraic distance: relax random test vectors with weighted Jacobi on the
// homogeneous Laplacian system, then measure endpoint separation.
inline std::vector<double> algebraic_scores(const Graph& g, const detail::ParamReader& p, Rng& rng) {
    const int vectors = p.get_int("vectors", 10, 1);
    const int sweeps = p.get_int("sweeps", 20, 0);
    const double omega = p.get("omega", 0.5);
    const double norm = p.get("norm", 2.0);
    const double exponent = p.get("exponent", 1.0);
    if (!(omega > 0.0 && omega <= 1.0)) throw ConfigError("algebraic omega must lie in (0, 1]");
    if (!(norm >= 1.0)) throw ConfigError("algebraic norm must be >= 1");
    if (!(exponent > 0.0)) throw ConfigError("algebraic exponent must be > 0");

    const auto n = static_cast<std::size_t>(g.num_vertices());
    const auto adj = adjacency_lists(g);
    std::vector<double> accum(static_cast<std::size_t>(g.num_edges()), 0.0);
    std::vector<double> x(n), next(n);
    for (int r = 0; r < vectors; ++r) {
        for (auto& xi : x) xi = uniform(rng, -0.5, 0.5);
        for (int k = 0; k < sweeps; ++k) {
            for (std::size_t v = 0; v < n; ++v) {
                if (adj[v].empty()) {
                    next[v] = x[v];
                    continue;
                }
                double sum = 0.0;
                for (int w : adj[v]) sum += x[static_cast<std::size_t>(w)];
                next[v] = (1.0 - omega) * x[v] + omega * sum / static_cast<double>(adj[v].size());
            }
            std::swap(x, next);
        }
        // Rescale each test vector to [-0.5, 0.5] so all vectors weigh alike.
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        const double span = *hi - *lo;
        const double mid = 0.5 * (*hi + *lo);
        for (auto& xi : x) xi = span > 0.0 ? (xi - mid) / span : 0.0;

        std::size_t i = 0;
        for (const auto& e : g.edges())
            accum[i++] += std::pow(std::abs(x[static_cast<std::size_t>(e.u)] - x[static_cast<std::size_t>(e.v)]), norm);
    }
    for (auto& a : accum) a = std::pow(std::pow(a, 1.0 / norm), exponent);
    return accum;
}

// Edge forest fire: repeated fires from random vertices; each burning vertex
// ignites each unburnt neighbour with the burn probability. Score = number
// of times the edge carried fire.
inline std::vector<double> forest_fire_scores(const Graph& g, const detail::ParamReader& p, Rng& rng) {
    const double burn = p.get("burn_probability", 0.7);
    const double budget_factor = p.get("budget_factor", 100.0);
    if (!(burn > 0.0 && burn < 1.0)) throw ConfigError("fire burn_probability must lie in (0, 1)");
    if (!(budget_factor > 0.0)) throw ConfigError("fire budget_factor must be > 0");

    const int n = g.num_vertices();
    std::map<Edge, std::size_t> index;
    {
        std::size_t i = 0;
        for (const auto& e : g.edges()) index.emplace(e, i++);
    }
    std::vector<int> sources;
    for (int v = 0; v < n; ++v)
        if (g.degree(v) > 0) sources.push_back(v);

    std::vector<double> visits(static_cast<std::size_t>(g.num_edges()), 0.0);
    const auto budget = static_cast<std::uint64_t>(std::ceil(budget_factor * g.num_edges()));
    std::uint64_t spent = 0;
    std::vector<int> queue;
    while (spent < budget) {
        const int start = sources[static_cast<std::size_t>(uniform_below(rng, sources.size()))];
        Bitstring burnt = Bitstring{1} << start;
        queue.assign(1, start);
        for (std::size_t head = 0; head < queue.size() && spent < budget; ++head) {
            const int v = queue[head];
            auto nbrs = g.neighbors(v);
            shuffle(nbrs, rng);
            for (int w : nbrs) {
                if ((burnt >> w) & 1U) continue;
                if (uniform01(rng) >= burn) continue;
                burnt |= Bitstring{1} << w;
                visits[index.at(Edge{std::min(v, w), std::max(v, w)})] += 1.0;
                queue.push_back(w);
                if (++spent >= budget) break;
            }
        }
        // A fire that dies immediately still consumes one unit so the loop
        // terminates on graphs where burning rarely spreads.
        if (queue.size() == 1) ++spent;
    }
    return visits;
}

// Local degree: rank each vertex's neighbours by degree; an edge scores the
// better of the two percentiles it achieves at its endpoints.
inline std::vector<double> local_degree_scores(const Graph& g) {
    auto percentile = [&](int owner, int nbr) {
        const int d = g.degree(nbr);
        int higher = 0;
        for (int w : g.neighbors(owner))
            if (g.degree(w) > d) ++higher;
        return 1.0 - static_cast<double>(higher) / static_cast<double>(g.degree(owner));
    };
    std::vector<double> s;
    for (const auto& e : g.edges()) s.push_back(std::max(percentile(e.u, e.v), percentile(e.v, e.u)));
    return s;
}

// Jaccard overlap of open neighbourhoods.
inline std::vector<double> jaccard_scores(const Graph& g) {
    std::vector<double> s;
    for (const auto& e : g.edges()) {
        const Bitstring a = g.adjacency_mask(e.u);
        const Bitstring b = g.adjacency_mask(e.v);
        s.push_back(static_cast<double>(std::popcount(a & b)) / static_cast<double>(std::popcount(a | b)));
    }
    return s;
}

// SCAN structural similarity over closed neighbourhoods.
inline std::vector<double> scan_scores(const Graph& g) {
    std::vector<double> s;
    for (const auto& e : g.edges()) {
        const Bitstring a = g.adjacency_mask(e.u) | (Bitstring{1} << e.u);
        const Bitstring b = g.adjacency_mask(e.v) | (Bitstring{1} << e.v);
        s.push_back(static_cast<double>(std::popcount(a & b)) /
                    std::sqrt(static_cast<double>(std::popcount(a)) * std::popcount(b)));
    }
    return s;
}

// Non-parametric Simmelian backbone: tie strength is the triangle count of
// an edge; each vertex ranks its neighbours by tie strength and the edge
// score is the best Jaccard overlap of the two top-k lists, k <= max_rank.
inline std::vector<double> simmelian_scores(const Graph& g, const detail::ParamReader& p) {
    const int max_rank = p.get_int("max_rank", 10, 1);
    const int n = g.num_vertices();
    auto strength = [&](int u, int v) { return std::popcount(g.adjacency_mask(u) & g.adjacency_mask(v)); };

    std::vector<std::vector<int>> ranked(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        auto nbrs = g.neighbors(u);
        std::stable_sort(nbrs.begin(), nbrs.end(),
                         [&](int a, int b) { return strength(u, a) > strength(u, b); });
        ranked[static_cast<std::size_t>(u)] = std::move(nbrs);
    }
    std::vector<double> s;
    for (const auto& e : g.edges()) {
        const auto& ru = ranked[static_cast<std::size_t>(e.u)];
        const auto& rv = ranked[static_cast<std::size_t>(e.v)];
        const int kmax = std::min<int>(max_rank, static_cast<int>(std::max(ru.size(), rv.size())));
        Bitstring top_u = 0, top_v = 0;
        double best = 0.0;
        for (int k = 0; k < kmax; ++k) {
            if (k < static_cast<int>(ru.size())) top_u |= Bitstring{1} << ru[static_cast<std::size_t>(k)];
            if (k < static_cast<int>(rv.size())) top_v |= Bitstring{1} << rv[static_cast<std::size_t>(k)];
            const int uni = std::popcount(top_u | top_v);
            if (uni > 0) best = std::max(best, static_cast<double>(std::popcount(top_u & top_v)) / uni);
        }
        s.push_back(best);
    }
    return s;
}

}  // namespace detail

// Moore-Penrose pseudoinverse of the combinatorial Laplacian, via a dense
// symmetric eigendecomposition.
inline Eigen::MatrixXd laplacian_pseudoinverse(const Graph& g) {
    const int n = g.num_vertices();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
        lap(e.u, e.u) += 1.0;
        lap(e.v, e.v) += 1.0;
        lap(e.u, e.v) -= 1.0;
        lap(e.v, e.u) -= 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
    const auto& values = eig.eigenvalues();
    const auto& vecs = eig.eigenvectors();
    const double tol = 1e-9 * std::max(1.0, values.cwiseAbs().maxCoeff());
    Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k)
        if (values(k) > tol) pinv.noalias() += (vecs.col(k) / values(k)) * vecs.col(k).transpose();
    return pinv;
}

inline std::vector<double> effective_resistances(const Graph& g) {
    const auto pinv = laplacian_pseudoinverse(g);
    std::vector<double> r;
    for (const auto& e : g.edges()) r.push_back(pinv(e.u, e.u) + pinv(e.v, e.v) - 2.0 * pinv(e.u, e.v));
    return r;
}

inline EdgeScores score_edges(const Graph& g, const SparsifyConfig& config) {
    if (g.num_edges() == 0) throw InputError("cannot score the edges of an edgeless graph");
    auto rng = make_rng(derive_seed(config.seed, to_string(config.method)));
    EdgeScores out{g, {}, ScoreDirection::keep_high};
    switch (config.method) {
        case SparsifyMethod::random:
            detail::reject_params(config);
            out.scores = detail::random_scores(g, rng);
            out.direction = ScoreDirection::keep_low;
            break;
        case SparsifyMethod::algebraic: {
            detail::ParamReader p(config, {"vectors", "sweeps", "omega", "norm", "exponent", "reverse"});
            out.scores = detail::algebraic_scores(g, p, rng);
            out.direction = p.get("reverse", 0.0) != 0.0 ? ScoreDirection::keep_high : ScoreDirection::keep_low;
            break;
        }
        case SparsifyMethod::fire: {
            detail::ParamReader p(config, {"burn_probability", "budget_factor"});
            out.scores = detail::forest_fire_scores(g, p, rng);
            break;
        }
        case SparsifyMethod::degree:
            detail::reject_params(config);
            out.scores = detail::local_degree_scores(g);
            break;
        case SparsifyMethod::similarity:
            detail::reject_params(config);
            out.scores = detail::jaccard_scores(g);
            break;
        case SparsifyMethod::scan:
            detail::reject_params(config);
            out.scores = detail::scan_scores(g);
            break;
        case SparsifyMethod::simmelian: {
            detail::ParamReader p(config, {"max_rank"});
            out.scores = detail::simmelian_scores(g, p);
            break;
        }
        case SparsifyMethod::effective:
            detail::reject_params(config);
            out.scores = effective_resistances(g);
            break;
    }
    return out;
}

inline int kept_edge_count(int m, double target_ratio) {
    return static_cast<int>(std::lround(target_ratio * m));
}

// Keeps round(target_ratio * m) best-ranked edges. Equal scores are ordered
// by a seeded shuffle; the sort is stable, so the shuffle alone decides.
inline Graph filter_to_ratio(const EdgeScores& scores, double target_ratio, std::uint64_t seed) {
    if (!(target_ratio > 0.0 && target_ratio <= 1.0))
        throw InputError("target ratio must lie in (0, 1]");
    const int m = scores.graph.num_edges();
    if (static_cast<int>(scores.scores.size()) != m)
        throw InputError("score vector does not match the edge count");
    std::vector<std::size_t> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = make_rng(derive_seed(seed, "filter_to_ratio"));
    shuffle(order, rng);
    const bool high = scores.direction == ScoreDirection::keep_high;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return high ? scores.scores[a] > scores.scores[b] : scores.scores[a] < scores.scores[b];
    });
    std::vector<bool> keep(static_cast<std::size_t>(m), false);
    const int kept = kept_edge_count(m, target_ratio);
    for (int i = 0; i < kept; ++i) keep[order[static_cast<std::size_t>(i)]] = true;
    return scores.graph.filter_edges([&](std::size_t i) { return keep[i]; });
}

inline Graph sparsify(const Graph& g, const SparsifyConfig& config) {
    return filter_to_ratio(score_edges(g, config), config.target_ratio, config.seed);
}

// Keeps every edge cut by sol; drops each uncut edge independently with
// probability p_e. p_e = 1 removes all uncut edges.
inline Graph sparsify_by_solution(const Graph& g, const CutSolution& sol, double p_e, std::uint64_t seed) {
    check_assignment(g, sol.assignment);
    if (!(p_e >= 0.0 && p_e <= 1.0)) throw InputError("p_e must lie in [0, 1]");
    auto rng = make_rng(derive_seed(seed, "sparsify_by_solution"));
    const auto edges = g.edges();
    return g.filter_edges([&](std::size_t i) {
        const auto& e = edges[i];
        const bool cut = ((sol.assignment >> e.u) ^ (sol.assignment >> e.v)) & 1U;
        if (cut) return true;
        return !(uniform01(rng) < p_e);
    });
}

// Removes k uncut edges, picked as the first k of one seeded permutation, so
// the removal sets for k and k+1 are nested.
inline Graph remove_k_noncut_edges(const Graph& g, const CutSolution& sol, int k, std::uint64_t seed) {
    auto part = partition_edges(g, sol);
    if (k < 0 || k > static_cast<int>(part.not_in_cut.size()))
        throw InputError("cannot remove " + std::to_string(k) + " of " +
                         std::to_string(part.not_in_cut.size()) + " uncut edges");
    auto rng = make_rng(derive_seed(seed, "remove_k_noncut_edges"));
    shuffle(part.not_in_cut, rng);
    std::vector<Edge> removed(part.not_in_cut.begin(), part.not_in_cut.begin() + k);
    std::sort(removed.begin(), removed.end());
    const auto edges = g.edges();
    return g.filter_edges([&](std::size_t i) { return !std::binary_search(removed.begin(), removed.end(), edges[i]); });
}

}  // namespace sqaoa
