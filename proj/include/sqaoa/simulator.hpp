#pragma once

// Dense statevector simulation of the QAOA circuit for MaxCut.
//
// Conventions:
//   * amplitude index x is the bitstring with bit i = qubit i = vertex i;
//   * the phase operator multiplies |x> by exp(-i sum_e gamma_class(e) [e cut by x]),
//     i.e. exp(-i gamma H) with the constant identity part of H dropped;
//   * the mixer applies exp(-i beta X) to every qubit.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqaoa/error.hpp"
#include "sqaoa/graph.hpp"

namespace sqaoa {

using Complex = std::complex<double>;

class Statevector {
public:
    Statevector() = default;

    explicit Statevector(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 1 || num_qubits > kMaxVertices)
            throw CapabilityError("statevector supports 1.." + std::to_string(kMaxVertices) + " qubits");
        amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
        amplitudes_[0] = 1.0;
    }

    Statevector(int num_qubits, std::vector<Complex> amplitudes)
        : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
        if (num_qubits < 1 || num_qubits > kMaxVertices)
            throw CapabilityError("statevector supports 1.." + std::to_string(kMaxVertices) + " qubits");
        if (amplitudes_.size() != (std::size_t{1} << num_qubits))
            throw InputError("amplitude count does not equal 2^num_qubits");
    }

    static Statevector basis(int num_qubits, Bitstring x) {
        Statevector s(num_qubits);
        if ((x & ~full_mask(num_qubits)) != 0) throw InputError("basis index out of range");
        s.amplitudes_[0] = 0.0;
        s.amplitudes_[x] = 1.0;
        return s;
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }

    std::span<Complex> amplitudes() { return amplitudes_; }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex& operator[](std::size_t i) { return amplitudes_[i]; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amplitudes_) s += std::norm(a);
        return std::sqrt(s);
    }

private:
    int num_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

// Phase-operator topology. With edge classes present, class 1 edges take
// gamma_1 and class 2 edges take gamma_2 (two-gamma "Cut QAOA" layers).
struct PhaseSpec {
    Graph topology;
    std::optional<std::vector<int>> edge_class;

    static PhaseSpec standard(Graph g) { return {std::move(g), std::nullopt}; }

    static PhaseSpec two_class(Graph g, std::vector<int> classes) {
        if (classes.size() != static_cast<std::size_t>(g.num_edges()))
            throw InputError("edge class list must label every edge of the topology");
        for (int c : classes)
            if (c != 1 && c != 2) throw InputError("edge classes must be 1 or 2");
        return {std::move(g), std::move(classes)};
    }

    // Class 1 = edges cut by sol, class 2 = the rest.
    static PhaseSpec cut_classes(const Graph& g, const CutSolution& sol) {
        check_assignment(g, sol.assignment);
        std::vector<int> classes;
        for (const auto& e : g.edges())
            classes.push_back((((sol.assignment >> e.u) ^ (sol.assignment >> e.v)) & 1U) ? 1 : 2);
        return two_class(g, std::move(classes));
    }

    int gamma_arity() const { return edge_class ? 2 : 1; }
};

// Per-layer angles. gammas holds depth * arity values, layer-major; for
// arity 2 layer k uses (gammas[2k], gammas[2k+1]).
struct QaoaParams {
    int arity = 1;
    std::vector<double> gammas;
    std::vector<double> betas;

    int depth() const { return static_cast<int>(betas.size()); }
    std::size_t size() const { return gammas.size() + betas.size(); }

    std::span<const double> layer_gammas(int k) const {
        return std::span<const double>(gammas).subspan(static_cast<std::size_t>(k * arity),
                                                       static_cast<std::size_t>(arity));
    }

    void validate() const {
        if (arity != 1 && arity != 2) throw InputError("gamma arity must be 1 or 2");
        if (gammas.size() != betas.size() * static_cast<std::size_t>(arity))
            throw InputError("expected " + std::to_string(betas.size() * static_cast<std::size_t>(arity)) +
                             " gammas for depth " + std::to_string(betas.size()) + ", got " +
                             std::to_string(gammas.size()));
    }

    // Flat layout used by the optimizer: all gammas, then all betas.
    std::vector<double> flatten() const {
        std::vector<double> v(gammas);
        v.insert(v.end(), betas.begin(), betas.end());
        return v;
    }

    static QaoaParams unflatten(std::span<const double> v, int depth, int arity) {
        const auto ng = static_cast<std::size_t>(depth * arity);
        if (v.size() != ng + static_cast<std::size_t>(depth))
            throw InputError("parameter vector length does not match depth and arity");
        return {arity, std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(ng)),
                std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(ng), v.end())};
    }

    static QaoaParams zeros(int depth, int arity) {
        return {arity, std::vector<double>(static_cast<std::size_t>(depth * arity), 0.0),
                std::vector<double>(static_cast<std::size_t>(depth), 0.0)};
    }
};

// Phase operator compiled for a fixed register width: per basis state the
// number of cut edges in each class, plus the arity.
class PhaseOperator {
public:
    PhaseOperator(const PhaseSpec& spec, int num_qubits) : arity_(spec.gamma_arity()) {
        if (spec.topology.num_vertices() > num_qubits)
            throw InputError("phase topology has more vertices than the register has qubits");
        std::vector<Edge> class1, class2;
        const auto edges = spec.topology.edges();
        for (std::size_t i = 0; i < edges.size(); ++i)
            ((spec.edge_class && (*spec.edge_class)[i] == 2) ? class2 : class1).push_back(edges[i]);
        max_count_[0] = static_cast<int>(class1.size());
        max_count_[1] = static_cast<int>(class2.size());
        counts_[0] = cut_table(Graph{num_qubits, std::move(class1)});
        if (arity_ == 2) counts_[1] = cut_table(Graph{num_qubits, std::move(class2)});
    }

    int arity() const { return arity_; }

    void apply(Statevector& state, std::span<const double> gammas) const {
        if (static_cast<int>(gammas.size()) != arity_)
            throw InputError("phase operator expects " + std::to_string(arity_) + " gamma value(s), got " +
                             std::to_string(gammas.size()));
        if (state.dimension() != counts_[0].size())
            throw InputError("state width does not match the compiled phase operator");
        auto amps = state.amplitudes();
        double* a = reinterpret_cast<double*>(amps.data());
        auto rotate = [a](std::size_t x, Complex f) {
            const double re = a[2 * x], im = a[2 * x + 1];
            a[2 * x] = re * f.real() - im * f.imag();
            a[2 * x + 1] = re * f.imag() + im * f.real();
        };
        const auto f1 = phase_table(gammas[0], max_count_[0]);
        if (arity_ == 1) {
            const auto& c = counts_[0];
            for (std::size_t x = 0; x < amps.size(); ++x) rotate(x, f1[c[x]]);
        } else {
            // Combined phase per (class-1 count, class-2 count) pair.
            const auto width = static_cast<std::size_t>(max_count_[1]) + 1;
            std::vector<Complex> joint(f1.size() * width);
            for (std::size_t i = 0; i < f1.size(); ++i)
                for (std::size_t j = 0; j < width; ++j)
                    joint[i * width + j] = std::polar(1.0, -(gammas[0] * static_cast<double>(i) +
                                                             gammas[1] * static_cast<double>(j)));
            const auto& c1 = counts_[0];
            const auto& c2 = counts_[1];
            for (std::size_t x = 0; x < amps.size(); ++x) rotate(x, joint[c1[x] * width + c2[x]]);
        }
    }

private:
    static std::vector<Complex> phase_table(double gamma, int max_count) {
        std::vector<Complex> t(static_cast<std::size_t>(max_count) + 1);
        for (int k = 0; k <= max_count; ++k) t[static_cast<std::size_t>(k)] = std::polar(1.0, -gamma * k);
        return t;
    }

    int arity_;
    int max_count_[2] = {0, 0};
    std::vector<std::uint16_t> counts_[2];
};

inline Statevector prepare_plus_state(int n) {
    if (n < 1 || n > kMaxVertices)
        throw CapabilityError("plus state supports 1.." + std::to_string(kMaxVertices) + " qubits");
    const double a = std::pow(2.0, -0.5 * n);
    return Statevector(n, std::vector<Complex>(std::size_t{1} << n, Complex{a, 0.0}));
}

inline void apply_phase(Statevector& state, const PhaseSpec& spec, std::span<const double> gammas) {
    if (static_cast<int>(gammas.size()) != spec.gamma_arity())
        throw InputError("phase spec expects " + std::to_string(spec.gamma_arity()) + " gamma value(s), got " +
                         std::to_string(gammas.size()));
    PhaseOperator(spec, state.num_qubits()).apply(state, gammas);
}

// exp(-i beta X) on every qubit. Works on the interleaved re/im doubles
// (std::complex<double> is array-compatible) to keep the loop free of
// complex-multiply overhead.
inline void apply_mixer(Statevector& state, double beta) {
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    auto amps = state.amplitudes();
    double* a = reinterpret_cast<double*>(amps.data());
    const std::size_t dim = amps.size();
    for (int q = 0; q < state.num_qubits(); ++q) {
        const std::size_t stride = std::size_t{1} << q;
        for (std::size_t block = 0; block < dim; block += 2 * stride) {
            for (std::size_t i = block; i < block + stride; ++i) {
                double* x = a + 2 * i;
                double* y = a + 2 * (i + stride);
                const double xr = x[0], xi = x[1], yr = y[0], yi = y[1];
                // (c x - i s y, c y - i s x)
                x[0] = c * xr + s * yi;
                x[1] = c * xi - s * yr;
                y[0] = c * yr + s * xi;
                y[1] = c * yi - s * xr;
            }
        }
    }
}

inline Statevector trial_state(int n, const PhaseOperator& phase, const QaoaParams& params) {
    params.validate();
    if (params.arity != phase.arity()) throw InputError("gamma arity does not match the phase spec");
    auto state = prepare_plus_state(n);
    for (int k = 0; k < params.depth(); ++k) {
        phase.apply(state, params.layer_gammas(k));
        apply_mixer(state, params.betas[static_cast<std::size_t>(k)]);
    }
    return state;
}

inline Statevector trial_state(int n, const PhaseSpec& spec, const QaoaParams& params) {
    params.validate();
    if (params.arity != spec.gamma_arity()) throw InputError("gamma arity does not match the phase spec");
    return trial_state(n, PhaseOperator(spec, n), params);
}

// Expected cut value sum_x |a_x|^2 C(x), using a precomputed cut table.
inline double expectation(const Statevector& state, std::span<const std::uint16_t> cuts) {
    if (cuts.size() != state.dimension()) throw InputError("cut table size does not match the state");
    const auto amps = state.amplitudes();
    double sum = 0.0;
    for (std::size_t x = 0; x < amps.size(); ++x) {
        // re^2 + im^2 directly; std::norm may go through hypot.
        const double re = amps[x].real(), im = amps[x].imag();
        sum += (re * re + im * im) * cuts[x];
    }
    return sum;
}

inline double expectation(const Statevector& state, const Graph& original) {
    if (original.num_vertices() != state.num_qubits())
        throw InputError("graph has " + std::to_string(original.num_vertices()) + " vertices but the state has " +
                         std::to_string(state.num_qubits()) + " qubits");
    return expectation(state, cut_table(original));
}

inline double approximation_ratio(double expected_cut, int c_max) {
    if (c_max <= 0) throw InputError("approximation ratio undefined for C_max = 0");
    return expected_cut / c_max;
}

struct GateCount {
    long long cnot = 0;
    long long rz = 0;
    long long rx = 0;
    long long h = 0;
    long long total = 0;
    long long phase_gates = 0;  // cnot + rz: the part that scales with the topology
};

// Circuit cost: n Hadamards, then per layer 2 CNOT + 1 Rz per topology edge
// and one Rx per qubit.
inline GateCount gate_count(const PhaseSpec& spec, int p, int n) {
    if (p < 0) throw InputError("depth must be non-negative");
    const long long m = spec.topology.num_edges();
    GateCount c;
    c.cnot = 2LL * p * m;
    c.rz = 1LL * p * m;
    c.rx = 1LL * p * n;
    c.h = n;
    c.phase_gates = c.cnot + c.rz;
    c.total = c.cnot + c.rz + c.rx + c.h;
    return c;
}

// Depth of the full-graph circuit with the same phase-operator gate count.
inline double scaled_depth(int p, int m_used, int m_original) {
    if (m_original <= 0) throw InputError("original graph has no edges");
    return static_cast<double>(p) * m_used / m_original;
}

// Simulation context for repeated objective evaluations: compiled phase
// operator, the original graph's cut table and a reusable state buffer.
// Not thread-safe; give each concurrent task its own instance.
class QaoaCircuit {
public:
    QaoaCircuit(const PhaseSpec& spec, const Graph& original)
        : n_(original.num_vertices()), phase_(spec, original.num_vertices()), cuts_(cut_table(original)),
          state_(original.num_vertices()) {}

    int num_qubits() const { return n_; }
    int arity() const { return phase_.arity(); }
    const PhaseOperator& phase() const { return phase_; }
    std::span<const std::uint16_t> cut_values() const { return cuts_; }

    double expectation(const QaoaParams& params) {
        params.validate();
        if (params.arity != phase_.arity()) throw InputError("gamma arity does not match the phase spec");
        const double a = std::pow(2.0, -0.5 * n_);
        for (auto& amp : state_.amplitudes()) amp = Complex{a, 0.0};
        for (int k = 0; k < params.depth(); ++k) {
            phase_.apply(state_, params.layer_gammas(k));
            apply_mixer(state_, params.betas[static_cast<std::size_t>(k)]);
        }
        return sqaoa::expectation(state_, cuts_);
    }

    const Statevector& last_state() const { return state_; }

private:
    int n_;
    PhaseOperator phase_;
    std::vector<std::uint16_t> cuts_;
    Statevector state_;
};

}  // namespace sqaoa
