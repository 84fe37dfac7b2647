#pragma once

// Graph representation, cut evaluation and the exact MaxCut oracles.
//
// Bit convention (used throughout the library): an assignment is a
// Bitstring whose bit i gives the side of vertex i. Basis state |x> of the
// simulator uses the same encoding, qubit i <-> vertex i. The text form of
// an assignment lists vertex 0 first, so "001" puts vertex 2 alone.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sqaoa/error.hpp"
#include "sqaoa/rng.hpp"

namespace sqaoa {

using Bitstring = std::uint32_t;

inline constexpr int kMaxVertices = 28;   // exhaustive enumeration budget
inline constexpr int kMaxSpectrumVertices = 20;

struct Edge {
    int u = 0;
    int v = 0;

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

class Graph {
public:
    Graph() = default;

    // Endpoints may be given in either order; the edge list is stored sorted
    // with u < v. Self-loops, duplicates and out-of-range endpoints throw.
    Graph(int num_vertices, std::vector<Edge> edges)
        : num_vertices_(num_vertices), edges_(std::move(edges)) {
        if (num_vertices_ < 1) throw InputError("graph needs at least one vertex");
        if (num_vertices_ > kMaxVertices)
            throw CapabilityError("graph has " + std::to_string(num_vertices_) +
                                  " vertices; at most " + std::to_string(kMaxVertices) +
                                  " are supported");
        for (auto& e : edges_) {
            if (e.u > e.v) std::swap(e.u, e.v);
            if (e.u < 0 || e.v >= num_vertices_)
                throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                 ") has an endpoint outside [0, " +
                                 std::to_string(num_vertices_) + ")");
            if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
        }
        std::sort(edges_.begin(), edges_.end());
        if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end())
            throw InputError("duplicate edge (" + std::to_string(dup->u) + ", " +
                             std::to_string(dup->v) + ")");
        adjacency_.assign(static_cast<std::size_t>(num_vertices_), 0);
        for (const auto& e : edges_) {
            adjacency_[static_cast<std::size_t>(e.u)] |= Bitstring{1} << e.v;
            adjacency_[static_cast<std::size_t>(e.v)] |= Bitstring{1} << e.u;
        }
    }

    int num_vertices() const { return num_vertices_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    std::span<const Edge> edges() const& { return edges_; }
    // A span into a temporary would dangle.
    std::span<const Edge> edges() const&& = delete;

    // Neighbour set of v as a bit mask.
    Bitstring adjacency_mask(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return std::popcount(adjacency_mask(v)); }

    std::vector<int> neighbors(int v) const {
        std::vector<int> out;
        for (Bitstring m = adjacency_mask(v); m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
        return out;
    }

    bool has_edge(int u, int v) const { return (adjacency_mask(u) >> v) & 1U; }

    // Same vertex set, keeping only edges whose index satisfies keep(i).
    template <typename Pred>
    Graph filter_edges(Pred keep) const {
        std::vector<Edge> kept;
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (keep(i)) kept.push_back(edges_[i]);
        return Graph{num_vertices_, std::move(kept)};
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.num_vertices_ == b.num_vertices_ && a.edges_ == b.edges_;
    }

private:
    int num_vertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<Bitstring> adjacency_;
};

struct CutSolution {
    Bitstring assignment = 0;
    int value = 0;

    friend bool operator==(const CutSolution&, const CutSolution&) = default;
};

struct SpectrumLevel {
    int cut_value = 0;
    std::vector<Bitstring> members;  // ascending
};

// Distinct cut values in strictly decreasing order with their level sets.
struct Spectrum {
    int num_vertices = 0;
    std::vector<SpectrumLevel> levels;
};

struct MaxCutResult {
    int c_max = 0;
    // Every maximiser with bit 0 clear (one representative per complement
    // pair), sorted so that optima.front() is lexicographically smallest.
    std::vector<Bitstring> optima;

    CutSolution best() const { return {optima.front(), c_max}; }
};

struct EdgePartition {
    std::vector<Edge> in_cut;
    std::vector<Edge> not_in_cut;
};

inline Bitstring full_mask(int n) {
    return n >= 32 ? ~Bitstring{0} : (Bitstring{1} << n) - 1;
}

inline Bitstring complement(Bitstring x, int n) { return ~x & full_mask(n); }

// Lexicographic order on the text form (vertex 0 compared first).
inline bool lex_less(Bitstring a, Bitstring b) {
    if (a == b) return false;
    const Bitstring diff = a ^ b;
    return (a & (diff & (~diff + 1))) == 0;
}

inline std::string format_assignment(Bitstring x, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if ((x >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

inline Bitstring parse_assignment(std::string_view s) {
    if (s.empty() || s.size() > static_cast<std::size_t>(kMaxVertices))
        throw InputError("assignment string must have 1.." + std::to_string(kMaxVertices) +
                         " characters");
    Bitstring x = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            x |= Bitstring{1} << i;
        else if (s[i] != '0')
            throw InputError("assignment string may only contain '0' and '1'");
    }
    return x;
}

inline void check_assignment(const Graph& g, Bitstring x) {
    if ((x & ~full_mask(g.num_vertices())) != 0)
        throw InputError("assignment has bits set beyond vertex " +
                         std::to_string(g.num_vertices() - 1));
}

inline int cut_value(const Graph& g, Bitstring x) {
    check_assignment(g, x);
    int cut = 0;
    for (const auto& e : g.edges()) cut += static_cast<int>(((x >> e.u) ^ (x >> e.v)) & 1U);
    return cut;
}

inline CutSolution make_solution(const Graph& g, Bitstring x) { return {x, cut_value(g, x)}; }

// Cut value of every basis state, indexed by bitstring. Built with one
// popcount per entry: setting the top bit h of x changes the cut of
// x without h by deg(h) - 2 |N(h) & x|.
inline std::vector<std::uint16_t> cut_table(const Graph& g) {
    const int n = g.num_vertices();
    if (n > kMaxVertices)
        throw CapabilityError("cut table limited to " + std::to_string(kMaxVertices) + " vertices");
    std::vector<std::uint16_t> table(std::size_t{1} << n, 0);
    for (int h = 0; h < n; ++h) {
        const std::size_t half = std::size_t{1} << h;
        const Bitstring adj = g.adjacency_mask(h);
        const int deg = std::popcount(adj);
        for (std::size_t x = 0; x < half; ++x) {
            const int delta = deg - 2 * std::popcount(adj & static_cast<Bitstring>(x));
            table[half | x] = static_cast<std::uint16_t>(table[x] + delta);
        }
    }
    return table;
}

inline MaxCutResult brute_force_maxcut(const Graph& g) {
    const int n = g.num_vertices();
    if (n > kMaxVertices)
        throw CapabilityError("brute-force MaxCut limited to " + std::to_string(kMaxVertices) +
                              " vertices");
    MaxCutResult result;
    result.optima.push_back(0);
    // Gray-code walk over the free vertices 1..n-1 with vertex 0 pinned to 0.
    Bitstring x = 0;
    int cut = 0;
    const std::uint64_t count = std::uint64_t{1} << (n - 1);
    for (std::uint64_t k = 1; k < count; ++k) {
        const int v = std::countr_zero(k) + 1;
        const Bitstring adj = g.adjacency_mask(v);
        const int ones = std::popcount(adj & x);
        const int deg = std::popcount(adj);
        cut += ((x >> v) & 1U) ? 2 * ones - deg : deg - 2 * ones;
        x ^= Bitstring{1} << v;
        if (cut > result.c_max) {
            result.c_max = cut;
            result.optima.clear();
            result.optima.push_back(x);
        } else if (cut == result.c_max) {
            result.optima.push_back(x);
        }
    }
    std::sort(result.optima.begin(), result.optima.end(), lex_less);
    return result;
}

inline EdgePartition partition_edges(const Graph& g, const CutSolution& sol) {
    check_assignment(g, sol.assignment);
    EdgePartition part;
    for (const auto& e : g.edges()) {
        if (((sol.assignment >> e.u) ^ (sol.assignment >> e.v)) & 1U)
            part.in_cut.push_back(e);
        else
            part.not_in_cut.push_back(e);
    }
    return part;
}

inline Spectrum spectrum(const Graph& g) {
    const int n = g.num_vertices();
    if (n > kMaxSpectrumVertices)
        throw CapabilityError("spectrum enumeration limited to " +
                              std::to_string(kMaxSpectrumVertices) + " vertices");
    const auto table = cut_table(g);
    const int m = g.num_edges();
    std::vector<std::size_t> counts(static_cast<std::size_t>(m) + 1, 0);
    for (auto c : table) ++counts[c];

    Spectrum s;
    s.num_vertices = n;
    std::vector<int> level_of(static_cast<std::size_t>(m) + 1, -1);
    for (int c = m; c >= 0; --c) {
        if (counts[static_cast<std::size_t>(c)] == 0) continue;
        level_of[static_cast<std::size_t>(c)] = static_cast<int>(s.levels.size());
        SpectrumLevel level;
        level.cut_value = c;
        level.members.reserve(counts[static_cast<std::size_t>(c)]);
        s.levels.push_back(std::move(level));
    }
    for (std::size_t x = 0; x < table.size(); ++x)
        s.levels[static_cast<std::size_t>(level_of[table[x]])].members.push_back(
            static_cast<Bitstring>(x));
    return s;
}

// Number of connected components (isolated vertices count as components).
inline int connected_components(const Graph& g) {
    const int n = g.num_vertices();
    Bitstring unvisited = full_mask(n);
    int components = 0;
    while (unvisited != 0) {
        ++components;
        Bitstring frontier = unvisited & (~unvisited + 1);
        Bitstring reached = frontier;
        while (frontier != 0) {
            Bitstring next = 0;
            for (Bitstring f = frontier; f != 0; f &= f - 1) next |= g.adjacency_mask(std::countr_zero(f));
            frontier = next & ~reached;
            reached |= next;
        }
        unvisited &= ~reached;
    }
    return components;
}

inline bool is_connected(const Graph& g) { return connected_components(g) == 1; }

// G(n, m): m distinct edges drawn uniformly from all vertex pairs. The graph
// may be disconnected; callers that care check is_connected().
inline Graph generate_random_graph(int n, int m, std::uint64_t seed) {
    if (n < 1) throw InputError("random graph needs n >= 1");
    if (n > kMaxVertices) throw CapabilityError("random graph limited to " + std::to_string(kMaxVertices) + " vertices");
    const int max_edges = n * (n - 1) / 2;
    if (m < 0 || m > max_edges)
        throw InputError("cannot place " + std::to_string(m) + " edges on " + std::to_string(n) +
                         " vertices (max " + std::to_string(max_edges) + ")");
    std::vector<Edge> pairs;
    pairs.reserve(static_cast<std::size_t>(max_edges));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
    auto rng = make_rng(seed);
    // Partial Fisher-Yates: the first m slots become a uniform m-subset.
    for (int i = 0; i < m; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(max_edges - i)));
        std::swap(pairs[static_cast<std::size_t>(i)], pairs[j]);
    }
    pairs.resize(static_cast<std::size_t>(m));
    return Graph{n, std::move(pairs)};
}

// Seeded uniform choice among all assignments whose cut is C_max - d.
inline CutSolution solution_at_distance(const Graph& g, int d, std::uint64_t seed) {
    const int n = g.num_vertices();
    if (d < 0) throw InputError("distance must be non-negative");
    if (n > kMaxVertices) throw CapabilityError("enumeration limited to " + std::to_string(kMaxVertices) + " vertices");
    const int target = brute_force_maxcut(g).c_max - d;
    if (target < 0)
        throw NotFoundError("no assignment with cut value " + std::to_string(target));

    // Two enumeration passes (count, then select) keep memory constant.
    const std::uint64_t total = std::uint64_t{1} << n;
    auto walk = [&](auto&& visit) {
        Bitstring x = 0;
        int cut = 0;
        if (!visit(x, cut)) return;
        for (std::uint64_t k = 1; k < total; ++k) {
            const int v = std::countr_zero(k);
            const Bitstring adj = g.adjacency_mask(v);
            const int ones = std::popcount(adj & x);
            const int deg = std::popcount(adj);
            cut += ((x >> v) & 1U) ? 2 * ones - deg : deg - 2 * ones;
            x ^= Bitstring{1} << v;
            if (!visit(x, cut)) return;
        }
    };
    std::uint64_t matches = 0;
    walk([&](Bitstring, int cut) {
        matches += (cut == target);
        return true;
    });
    if (matches == 0)
        throw NotFoundError("no assignment has cut value " + std::to_string(target) +
                            " (C_max - " + std::to_string(d) + ")");
    auto rng = make_rng(seed);
    std::uint64_t pick = uniform_below(rng, matches);
    CutSolution chosen;
    walk([&](Bitstring x, int cut) {
        if (cut != target) return true;
        if (pick-- == 0) {
            chosen = {x, cut};
            return false;
        }
        return true;
    });
    return chosen;
}

// Edge-list text format: "n m" header, then m lines "u v"; '#' starts a
// comment. Returns the canonicalised graph.
inline Graph read_edge_list(std::istream& in) {
    std::vector<long long> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            long long value = 0;
            try {
                value = std::stoll(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size())
                throw InputError("edge list line " + std::to_string(line_no) + ": '" + tok +
                                 "' is not an integer");
            tokens.push_back(value);
        }
    }
    if (tokens.size() < 2) throw InputError("edge list is missing the 'n m' header");
    const long long n = tokens[0];
    const long long m = tokens[1];
    if (n < 1 || m < 0) throw InputError("edge list header must have n >= 1 and m >= 0");
    if (static_cast<long long>(tokens.size()) != 2 + 2 * m)
        throw InputError("edge list header declares " + std::to_string(m) + " edges but " +
                         std::to_string((tokens.size() - 2) / 2) + " endpoint pairs follow" +
                         ((tokens.size() % 2) ? " (odd token count)" : ""));
    if (n > kMaxVertices)
        throw CapabilityError("edge list has " + std::to_string(n) + " vertices; at most " +
                              std::to_string(kMaxVertices) + " are supported");
    std::vector<Edge> edges;
    for (long long i = 0; i < m; ++i) {
        const long long u = tokens[static_cast<std::size_t>(2 + 2 * i)];
        const long long v = tokens[static_cast<std::size_t>(3 + 2 * i)];
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                             ") out of range");
        edges.push_back({static_cast<int>(u), static_cast<int>(v)});
    }
    return Graph{static_cast<int>(n), std::move(edges)};
}

inline Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file '" + path + "'");
    return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace sqaoa
