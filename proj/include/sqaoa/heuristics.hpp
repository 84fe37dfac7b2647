#pragma once

// Classical MaxCut heuristics used to seed the solution-guided variants.

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sqaoa/error.hpp"
#include "sqaoa/graph.hpp"
#include "sqaoa/rng.hpp"

namespace sqaoa {

struct GwConfig {
    int rank = 0;  // 0: ceil(sqrt(2n)) + 1
    int ascent_iterations = 500;
    double initial_step = 0.5;
    double tolerance = 1e-9;
    int rounding_trials = 100;
    std::uint64_t seed = 0;
};

struct GwResult {
    CutSolution solution;
    double relaxation_value = 0.0;
    bool converged = false;  // false: the ascent budget ran out first
    std::vector<double> relaxation_trace;  // value after each accepted step
};

// Goemans-Williamson with a low-rank (Burer-Monteiro) relaxation: maximise
// sum_{uv} (1 - <x_u, x_v>) / 2 over unit vectors in R^rank by projected
// gradient ascent, then keep the best of several random-hyperplane roundings.
inline GwResult goemans_williamson(const Graph& g, const GwConfig& config) {
    if (g.num_edges() < 1) throw InputError("Goemans-Williamson needs at least one edge");
    if (config.rounding_trials < 1) throw ConfigError("rounding_trials must be >= 1");
    if (config.ascent_iterations < 0) throw ConfigError("ascent_iterations must be >= 0");
    const int n = g.num_vertices();
    const int r = config.rank > 0 ? config.rank : static_cast<int>(std::ceil(std::sqrt(2.0 * n))) + 1;
    if (r < 2) throw ConfigError("relaxation rank must be >= 2");
    const auto nr = static_cast<std::size_t>(n);
    const auto rr = static_cast<std::size_t>(r);

    auto rng = make_rng(derive_seed(config.seed, "gw"));
    std::vector<double> vecs(nr * rr);
    auto row = [&](std::vector<double>& v, std::size_t u) { return v.data() + u * rr; };
    auto normalize_rows = [&](std::vector<double>& v) {
        for (std::size_t u = 0; u < nr; ++u) {
            double* x = row(v, u);
            double s = 0.0;
            for (std::size_t k = 0; k < rr; ++k) s += x[k] * x[k];
            s = std::sqrt(s);
            for (std::size_t k = 0; k < rr; ++k) x[k] /= s;
        }
    };
    for (auto& v : vecs) v = standard_normal(rng);
    normalize_rows(vecs);

    auto relaxation = [&](std::vector<double>& v) {
        double total = 0.0;
        for (const auto& e : g.edges()) {
            const double* a = row(v, static_cast<std::size_t>(e.u));
            const double* b = row(v, static_cast<std::size_t>(e.v));
            double d = 0.0;
            for (std::size_t k = 0; k < rr; ++k) d += a[k] * b[k];
            total += 0.5 * (1.0 - d);
        }
        return total;
    };

    GwResult result;
    double value = relaxation(vecs);
    double step = config.initial_step;
    std::vector<double> grad(nr * rr), trial(nr * rr);
    int it = 0;
    for (; it < config.ascent_iterations; ++it) {
        // d/dx_u of the relaxation is -1/2 sum_{v in N(u)} x_v; project it
        // onto the tangent space of the sphere at x_u.
        std::fill(grad.begin(), grad.end(), 0.0);
        for (const auto& e : g.edges()) {
            double* gu = row(grad, static_cast<std::size_t>(e.u));
            double* gv = row(grad, static_cast<std::size_t>(e.v));
            const double* xu = row(vecs, static_cast<std::size_t>(e.u));
            const double* xv = row(vecs, static_cast<std::size_t>(e.v));
            for (std::size_t k = 0; k < rr; ++k) {
                gu[k] -= 0.5 * xv[k];
                gv[k] -= 0.5 * xu[k];
            }
        }
        double gnorm = 0.0;
        for (std::size_t u = 0; u < nr; ++u) {
            double* gu = row(grad, u);
            const double* xu = row(vecs, u);
            double radial = 0.0;
            for (std::size_t k = 0; k < rr; ++k) radial += gu[k] * xu[k];
            for (std::size_t k = 0; k < rr; ++k) {
                gu[k] -= radial * xu[k];
                gnorm += gu[k] * gu[k];
            }
        }
        if (std::sqrt(gnorm) <= config.tolerance) {
            result.converged = true;
            break;
        }
        bool improved = false;
        while (step > 1e-12) {
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = vecs[i] + step * grad[i];
            normalize_rows(trial);
            const double candidate = relaxation(trial);
            if (candidate > value) {
                const double change = candidate - value;
                vecs.swap(trial);
                value = candidate;
                result.relaxation_trace.push_back(value);
                improved = true;
                step *= 1.25;
                if (change <= config.tolerance) result.converged = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) {
            result.converged = true;  // no ascent direction left at this precision
            break;
        }
        if (result.converged) break;
    }
    result.relaxation_value = value;

    // Random hyperplane rounding, best of T; ties keep the earliest trial.
    auto round_rng = make_rng(derive_seed(config.seed, "gw-rounding"));
    std::vector<double> normal(rr);
    CutSolution best{0, -1};
    for (int t = 0; t < config.rounding_trials; ++t) {
        for (auto& h : normal) h = standard_normal(round_rng);
        Bitstring x = 0;
        for (std::size_t u = 0; u < nr; ++u) {
            const double* xu = row(vecs, u);
            double side = 0.0;
            for (std::size_t k = 0; k < rr; ++k) side += xu[k] * normal[k];
            if (side < 0.0) x |= Bitstring{1} << u;
        }
        const int value_x = cut_value(g, x);
        if (value_x > best.value) best = {x, value_x};
    }
    result.solution = best;
    return result;
}

// Steepest single-vertex-flip ascent; ties go to the smallest vertex index.
inline CutSolution local_search_1flip(const Graph& g, Bitstring start) {
    check_assignment(g, start);
    Bitstring x = start;
    int value = cut_value(g, x);
    for (;;) {
        int best_gain = 0;
        int best_v = -1;
        for (int v = 0; v < g.num_vertices(); ++v) {
            const Bitstring adj = g.adjacency_mask(v);
            const int ones = std::popcount(adj & x);
            const int deg = std::popcount(adj);
            const int gain = ((x >> v) & 1U) ? 2 * ones - deg : deg - 2 * ones;
            if (gain > best_gain) {
                best_gain = gain;
                best_v = v;
            }
        }
        if (best_v < 0) break;
        x ^= Bitstring{1} << best_v;
        value += best_gain;
    }
    return {x, value};
}

enum class InitialChoice { exact, gw, local_search, given };

inline InitialChoice parse_initial_choice(std::string_view s) {
    if (s == "exact") return InitialChoice::exact;
    if (s == "gw") return InitialChoice::gw;
    if (s == "local_search") return InitialChoice::local_search;
    if (s == "given") return InitialChoice::given;
    throw ConfigError("unknown initial solution choice '" + std::string(s) + "'");
}

// exact: lexicographically smallest optimum; gw: GW with the given seed;
// local_search: 1-flip ascent from a seeded random assignment; given: the
// supplied assignment, evaluated.
inline CutSolution initial_solution(const Graph& g, InitialChoice choice, std::uint64_t seed,
                                    Bitstring given_assignment = 0) {
    switch (choice) {
        case InitialChoice::exact: return brute_force_maxcut(g).best();
        case InitialChoice::gw: {
            GwConfig cfg;
            cfg.seed = seed;
            return goemans_williamson(g, cfg).solution;
        }
        case InitialChoice::local_search: {
            auto rng = make_rng(derive_seed(seed, "local-search-start"));
            const auto start = static_cast<Bitstring>(rng()) & full_mask(g.num_vertices());
            return local_search_1flip(g, start);
        }
        case InitialChoice::given: return make_solution(g, given_assignment);
    }
    throw ConfigError("unhandled initial solution choice");
}

}  // namespace sqaoa
