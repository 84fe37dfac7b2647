#pragma once

// Classical outer loop: finite-difference gradients, a limited-memory
// quasi-Newton local search and the multi-start protocol.
//
// The QAOA objective is maximised; internally the search minimises its
// negation and every reported value is the (positive) expected cut.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sqaoa/error.hpp"
#include "sqaoa/graph.hpp"
#include "sqaoa/parallel.hpp"
#include "sqaoa/rng.hpp"
#include "sqaoa/simulator.hpp"

namespace sqaoa {

struct OptimizerConfig {
    int max_iterations = 20000;
    double gradient_step = 1e-6;
    double gradient_tolerance = 1e-8;   // infinity norm
    double objective_tolerance = 1e-10;  // relative change per accepted step
    int memory = 10;
    int num_random_starts = 30;
    double start_low = -2.0 * std::numbers::pi;
    double start_high = 2.0 * std::numbers::pi;
    // Deterministic linear-ramp start appended after the random ones.
    bool ramp_start = true;
    std::vector<QaoaParams> extra_starts;
    std::uint64_t seed = 0;
    int threads = 1;  // <= 0: hardware concurrency

    void validate() const {
        if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
        if (!(gradient_step > 0.0)) throw ConfigError("gradient_step must be > 0");
        if (!(gradient_tolerance > 0.0) || !(objective_tolerance > 0.0))
            throw ConfigError("tolerances must be > 0");
        if (memory < 1) throw ConfigError("memory must be >= 1");
        if (num_random_starts < 0) throw ConfigError("num_random_starts must be >= 0");
        if (!(start_low < start_high)) throw ConfigError("start box must satisfy low < high");
    }
};

struct StartRecord {
    QaoaParams start;
    QaoaParams final_params;
    double initial_value = 0.0;
    double final_value = -std::numeric_limits<double>::infinity();
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string error;  // non-empty when the start failed
};

struct OptimizationResult {
    QaoaParams best_params;
    double best_expectation = -std::numeric_limits<double>::infinity();
    double ratio = std::numeric_limits<double>::quiet_NaN();
    int best_start = -1;
    std::vector<StartRecord> starts;
};

inline double objective(const PhaseSpec& spec, const Graph& original, const QaoaParams& params) {
    QaoaCircuit circuit(spec, original);
    return circuit.expectation(params);
}

// Central differences, one coordinate at a time, in the flat parameter
// layout (gammas then betas).
inline std::vector<double> gradient(QaoaCircuit& circuit, const QaoaParams& params, double step) {
    auto x = params.flatten();
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + step;
        const double up = circuit.expectation(QaoaParams::unflatten(x, params.depth(), params.arity));
        x[i] = xi - step;
        const double down = circuit.expectation(QaoaParams::unflatten(x, params.depth(), params.arity));
        x[i] = xi;
        g[i] = (up - down) / (2.0 * step);
    }
    return g;
}

inline std::vector<double> gradient(const PhaseSpec& spec, const Graph& original, const QaoaParams& params,
                                    double step = 1e-6) {
    QaoaCircuit circuit(spec, original);
    return gradient(circuit, params, step);
}

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double inf_norm(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s = std::max(s, std::abs(v));
    return s;
}

struct CurvaturePair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
};

// Two-loop recursion: returns -H g for the implicit inverse Hessian H.
inline std::vector<double> lbfgs_direction(const std::vector<double>& grad, const std::deque<CurvaturePair>& mem) {
    std::vector<double> q = grad;
    std::vector<double> alpha(mem.size());
    for (std::size_t j = mem.size(); j-- > 0;) {
        alpha[j] = mem[j].rho * dot(mem[j].s, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[j] * mem[j].y[i];
    }
    if (!mem.empty()) {
        const auto& last = mem.back();
        const double scale = dot(last.s, last.y) / dot(last.y, last.y);
        for (auto& v : q) v *= scale;
    }
    for (std::size_t j = 0; j < mem.size(); ++j) {
        const double beta = mem[j].rho * dot(mem[j].y, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[j] - beta) * mem[j].s[i];
    }
    for (auto& v : q) v = -v;
    return q;
}

inline std::string describe(const std::vector<double>& x) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ']';
    return os.str();
}

}  // namespace detail

// Quasi-Newton ascent from one start. Accepted steps satisfy an Armijo
// sufficient-increase condition, so the objective never decreases.
inline StartRecord local_optimize(QaoaCircuit& circuit, const QaoaParams& start, const OptimizerConfig& config) {
    config.validate();
    start.validate();
    if (start.arity != circuit.arity()) throw InputError("start arity does not match the phase spec");

    const int depth = start.depth();
    const int arity = start.arity;
    StartRecord rec;
    rec.start = start;

    // f is the minimised function: the negated expected cut.
    auto f = [&](const std::vector<double>& x, int iteration) {
        ++rec.evaluations;
        const double v = -circuit.expectation(QaoaParams::unflatten(x, depth, arity));
        if (!std::isfinite(v))
            throw NumericalError("non-finite objective at iteration " + std::to_string(iteration) +
                                 ", parameters " + detail::describe(x));
        return v;
    };
    auto grad = [&](const std::vector<double>& x) {
        auto g = gradient(circuit, QaoaParams::unflatten(x, depth, arity), config.gradient_step);
        rec.evaluations += static_cast<int>(2 * x.size());
        for (auto& gi : g) gi = -gi;
        return g;
    };

    auto x = start.flatten();
    double fx = f(x, 0);
    rec.initial_value = -fx;
    auto g = grad(x);
    std::deque<detail::CurvaturePair> memory;

    constexpr double kArmijo = 1e-4;
    constexpr int kMaxBacktracks = 60;

    while (rec.iterations < config.max_iterations) {
        if (detail::inf_norm(g) <= config.gradient_tolerance) {
            rec.converged = true;
            break;
        }
        auto d = detail::lbfgs_direction(g, memory);
        double slope = detail::dot(g, d);
        if (!(slope < 0.0)) {
            memory.clear();
            d = g;
            for (auto& v : d) v = -v;
            slope = detail::dot(g, d);
        }
        // First step (no curvature yet) is scaled to move at most 1 rad.
        double step = memory.empty() ? std::min(1.0, 1.0 / detail::inf_norm(g)) : 1.0;

        std::vector<double> x_new(x.size());
        double f_new = fx;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            for (std::size_t i = 0; i < x.size(); ++i) x_new[i] = x[i] + step * d[i];
            f_new = f(x_new, rec.iterations + 1);
            if (f_new <= fx + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!memory.empty()) {
                memory.clear();  // retry along steepest descent
                continue;
            }
            // No decrease is attainable along -g: the gradient is at the
            // finite-difference noise floor.
            rec.converged = true;
            break;
        }

        ++rec.iterations;
        auto g_new = grad(x_new);
        std::vector<double> s(x.size()), y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double sy = detail::dot(s, y);
        if (sy > 1e-12 * std::sqrt(detail::dot(s, s) * detail::dot(y, y)) && sy > 0.0) {
            memory.push_back({std::move(s), std::move(y), 1.0 / sy});
            if (static_cast<int>(memory.size()) > config.memory) memory.pop_front();
        }
        const double change = fx - f_new;
        x = std::move(x_new);
        g = std::move(g_new);
        fx = f_new;
        if (change <= config.objective_tolerance * std::max({1.0, std::abs(fx)})) {
            rec.converged = true;
            break;
        }
    }
    rec.final_params = QaoaParams::unflatten(x, depth, arity);
    rec.final_value = -fx;
    return rec;
}

inline StartRecord local_optimize(const PhaseSpec& spec, const Graph& original, const QaoaParams& start,
                                  const OptimizerConfig& config) {
    QaoaCircuit circuit(spec, original);
    return local_optimize(circuit, start, config);
}

// Linear ramp: gammas grow and betas shrink across layers.
inline QaoaParams ramp_params(int depth, int arity, double delta = 0.75) {
    QaoaParams p = QaoaParams::zeros(depth, arity);
    for (int k = 0; k < depth; ++k) {
        const double t = (k + 0.5) / depth;
        for (int a = 0; a < arity; ++a) p.gammas[static_cast<std::size_t>(k * arity + a)] = t * delta;
        p.betas[static_cast<std::size_t>(k)] = (1.0 - t) * delta;
    }
    return p;
}

// The starting points multistart_optimize uses, in order: seeded uniform
// random points, the optional ramp, then the explicit extra starts.
inline std::vector<QaoaParams> multistart_points(int depth, int arity, const OptimizerConfig& config) {
    std::vector<QaoaParams> starts;
    for (int i = 0; i < config.num_random_starts; ++i) {
        auto rng = make_rng(derive_seed(config.seed, static_cast<std::uint64_t>(i)));
        QaoaParams p = QaoaParams::zeros(depth, arity);
        for (auto& v : p.gammas) v = uniform(rng, config.start_low, config.start_high);
        for (auto& v : p.betas) v = uniform(rng, config.start_low, config.start_high);
        starts.push_back(std::move(p));
    }
    if (config.ramp_start) starts.push_back(ramp_params(depth, arity));
    for (const auto& extra : config.extra_starts) {
        extra.validate();
        if (extra.depth() != depth || extra.arity != arity)
            throw InputError("extra start has depth " + std::to_string(extra.depth()) + "/arity " +
                             std::to_string(extra.arity) + ", expected " + std::to_string(depth) + "/" +
                             std::to_string(arity));
        starts.push_back(extra);
    }
    return starts;
}

inline OptimizationResult multistart_optimize(const PhaseSpec& spec, const Graph& original, int depth,
                                              const OptimizerConfig& config,
                                              std::optional<int> c_max = std::nullopt) {
    config.validate();
    if (depth < 1) throw InputError("multistart requires depth >= 1");
    const auto starts = multistart_points(depth, spec.gamma_arity(), config);
    if (starts.empty()) throw ConfigError("no starting points configured");

    OptimizationResult result;
    result.starts.resize(starts.size());
    const int workers = std::min<int>(resolve_thread_count(config.threads), static_cast<int>(starts.size()));
    std::vector<std::optional<QaoaCircuit>> circuits(static_cast<std::size_t>(std::max(workers, 1)));
    parallel_for(starts.size(), workers, [&](std::size_t i, std::size_t w) {
        auto& circuit = circuits[w];
        if (!circuit) circuit.emplace(spec, original);
        try {
            result.starts[i] = local_optimize(*circuit, starts[i], config);
        } catch (const std::exception& e) {
            StartRecord failed;
            failed.start = starts[i];
            failed.error = e.what();
            result.starts[i] = std::move(failed);
        }
    });

    for (std::size_t i = 0; i < result.starts.size(); ++i) {
        const auto& r = result.starts[i];
        if (r.error.empty() && r.final_value > result.best_expectation) {
            result.best_expectation = r.final_value;
            result.best_params = r.final_params;
            result.best_start = static_cast<int>(i);
        }
    }
    if (result.best_start < 0)
        throw NumericalError("every start failed; first error: " + result.starts.front().error);
    const int cmax = c_max ? *c_max : brute_force_maxcut(original).c_max;
    if (cmax > 0) result.ratio = approximation_ratio(result.best_expectation, cmax);
    return result;
}

}  // namespace sqaoa
