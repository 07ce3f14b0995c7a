#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mshift/error.hpp"
#include "mshift/rational.hpp"

namespace mshift {

// Alphabet with letter weights: positive rationals summing to 1, distinct letter ids.
// Letter order is input order and is significant everywhere downstream.
struct Rho {
    std::vector<std::string> letters;
    std::vector<Rational> weights;

    int size() const { return static_cast<int>(letters.size()); }

    int index_of(const std::string& letter) const {
        for (int i = 0; i < size(); ++i)
            if (letters[i] == letter) return i;
        return -1;
    }

    void validate() const {
        if (letters.empty()) throw Error("rho: empty alphabet");
        if (letters.size() != weights.size()) throw Error("rho: letter/weight count mismatch");
        Rational sum = 0;
        for (int i = 0; i < size(); ++i) {
            if (weights[i] <= 0) throw Error("rho: weight of '" + letters[i] + "' not positive");
            for (int j = i + 1; j < size(); ++j)
                if (letters[i] == letters[j]) throw Error("rho: duplicate letter '" + letters[i] + "'");
            sum += weights[i];
        }
        if (sum != 1) throw Error("rho: weights sum to " + format_rational(sum) + ", expected 1");
    }

    // No two distinct letters share a weight.
    bool absolutely_non_homogeneous() const {
        for (int i = 0; i < size(); ++i)
            for (int j = i + 1; j < size(); ++j)
                if (weights[i] == weights[j]) return false;
        return true;
    }

    // Sorted weight multiset, the per-vertex fingerprint of rho-uniformity.
    std::vector<Rational> sorted_weights() const {
        std::vector<Rational> w = weights;
        std::sort(w.begin(), w.end());
        return w;
    }
};

struct GraphEdge {
    std::string id;
    int src = -1;
    int dst = -1;
    Rational weight;
};

// Finite directed multigraph with stochastic out-weights: at every vertex the
// out-edge weights sum to 1, and every vertex has at least one in-edge.
// Vertex and edge order is input order; all derived orderings respect it.
struct StochasticGraph {
    std::string name;
    std::vector<std::string> vertex_ids;
    std::vector<GraphEdge> edges;

    std::vector<std::vector<int>> out_edges;  // edge indices by source vertex, input order
    std::vector<std::vector<int>> in_edges;   // edge indices by target vertex, input order

    int num_vertices() const { return static_cast<int>(vertex_ids.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    int vertex_index(const std::string& id) const {
        for (int v = 0; v < num_vertices(); ++v)
            if (vertex_ids[v] == id) return v;
        return -1;
    }

    int edge_index(const std::string& id) const {
        for (int e = 0; e < num_edges(); ++e)
            if (edges[e].id == id) return e;
        return -1;
    }

    void build_adjacency() {
        out_edges.assign(vertex_ids.size(), {});
        in_edges.assign(vertex_ids.size(), {});
        for (int e = 0; e < num_edges(); ++e) {
            out_edges[edges[e].src].push_back(e);
            in_edges[edges[e].dst].push_back(e);
        }
    }

    void validate() const {
        if (vertex_ids.empty()) throw Error("graph: no vertices");
        {
            std::unordered_map<std::string, int> seen;
            for (const auto& id : vertex_ids)
                if (!seen.emplace(id, 1).second) throw Error("graph: duplicate vertex id '" + id + "'");
            seen.clear();
            for (const auto& e : edges)
                if (!seen.emplace(e.id, 1).second) throw Error("graph: duplicate edge id '" + e.id + "'");
        }
        for (const auto& e : edges) {
            if (e.src < 0 || e.src >= num_vertices() || e.dst < 0 || e.dst >= num_vertices())
                throw Error("graph: edge '" + e.id + "' has dangling endpoint");
            if (e.weight <= 0) throw Error("graph: edge '" + e.id + "' has non-positive weight");
        }
        if (out_edges.size() != vertex_ids.size() || in_edges.size() != vertex_ids.size())
            throw Error("graph: adjacency not built");
        for (int v = 0; v < num_vertices(); ++v) {
            if (out_edges[v].empty())
                throw Error("graph: vertex '" + vertex_ids[v] + "' has no out-edge");
            if (in_edges[v].empty())
                throw Error("graph: vertex '" + vertex_ids[v] + "' has no in-edge");
            Rational sum = 0;
            for (int e : out_edges[v]) sum += edges[e].weight;
            if (sum != 1)
                throw Error("graph: out-weights at vertex '" + vertex_ids[v] + "' sum to " +
                            format_rational(sum) + ", expected 1");
        }
    }

    static StochasticGraph make(std::string name, std::vector<std::string> vertex_ids,
                                std::vector<GraphEdge> edges) {
        StochasticGraph g;
        g.name = std::move(name);
        g.vertex_ids = std::move(vertex_ids);
        g.edges = std::move(edges);
        g.build_adjacency();
        g.validate();
        return g;
    }
};

// Path in the backward-composition convention: s(g_k) = t(g_{k+1}),
// so the last listed edge is traversed first.
struct Path {
    std::vector<int> edges;  // edge indices, nonempty

    int length() const { return static_cast<int>(edges.size()); }
};

inline void validate_path(const StochasticGraph& g, const Path& p) {
    if (p.edges.empty()) throw Error("path: empty");
    for (int e : p.edges)
        if (e < 0 || e >= g.num_edges()) throw Error("path: edge index out of range");
    for (int k = 0; k + 1 < p.length(); ++k)
        if (g.edges[p.edges[k]].src != g.edges[p.edges[k + 1]].dst)
            throw Error("path: edges " + std::to_string(k) + "," + std::to_string(k + 1) +
                        " not composable");
}

// Strong connectivity via forward and backward reachability from vertex 0.
inline bool is_irreducible(const StochasticGraph& g) {
    auto reach = [&](bool forward) {
        std::vector<char> seen(g.num_vertices(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            const auto& adj = forward ? g.out_edges[v] : g.in_edges[v];
            for (int e : adj) {
                int w = forward ? g.edges[e].dst : g.edges[e].src;
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        return seen;
    };
    auto fwd = reach(true), bwd = reach(false);
    for (int v = 0; v < g.num_vertices(); ++v)
        if (!fwd[v] || !bwd[v]) return false;
    return true;
}

// gcd of cycle lengths; computed as gcd over edges u->v of (dist(u) + 1 - dist(v))
// with dist = BFS levels from vertex 0. Requires irreducibility.
inline int period(const StochasticGraph& g) {
    if (!is_irreducible(g)) throw Error("period: graph not irreducible");
    std::vector<int> dist(g.num_vertices(), -1);
    std::vector<int> queue{0};
    dist[0] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (int e : g.out_edges[v]) {
            int w = g.edges[e].dst;
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    long long d = 0;
    for (const auto& e : g.edges) d = std::gcd(d, static_cast<long long>(dist[e.src]) + 1 - dist[e.dst]);
    return static_cast<int>(d < 0 ? -d : d);
}

// Unique solution of the stationary balance system:
//   sum over edges g with t(g) = v of p(g) * x(s(g)) = x(v),  sum_v x(v) = 1.
// Exact Gaussian elimination; pivot = first row with a nonzero entry in column order.
inline std::vector<Rational> stationary_distribution(const StochasticGraph& g) {
    const int n = g.num_vertices();
    // rows 0..n-1: balance at each vertex; row n: normalization. Columns 0..n-1 | rhs.
    std::vector<std::vector<Rational>> m(n + 1, std::vector<Rational>(n + 1, Rational(0)));
    for (int v = 0; v < n; ++v) {
        for (int e : g.in_edges[v]) m[v][g.edges[e].src] += g.edges[e].weight;
        m[v][v] -= 1;
    }
    for (int u = 0; u < n; ++u) m[n][u] = 1;
    m[n][n] = 1;

    std::vector<int> pivot_row(n, -1);
    int next_row = 0;
    std::vector<int> row_order(n + 1);
    std::iota(row_order.begin(), row_order.end(), 0);
    for (int col = 0; col < n; ++col) {
        int pr = -1;
        for (int r = next_row; r <= n; ++r)
            if (m[row_order[r]][col] != 0) {
                pr = r;
                break;
            }
        if (pr < 0) throw Error("stationary: balance system is singular (graph reducible?)");
        std::swap(row_order[next_row], row_order[pr]);
        int prow = row_order[next_row];
        pivot_row[col] = prow;
        for (int r = next_row + 1; r <= n; ++r) {
            int rr = row_order[r];
            if (m[rr][col] == 0) continue;
            Rational factor = m[rr][col] / m[prow][col];
            for (int c = col; c <= n; ++c) m[rr][c] -= factor * m[prow][c];
        }
        ++next_row;
    }
    for (int r = next_row; r <= n; ++r)
        if (m[row_order[r]][n] != 0) throw Error("stationary: balance system inconsistent");

    std::vector<Rational> x(n, Rational(0));
    for (int col = n - 1; col >= 0; --col) {
        int prow = pivot_row[col];
        Rational acc = m[prow][n];
        for (int c = col + 1; c < n; ++c) acc -= m[prow][c] * x[c];
        x[col] = acc / m[prow][col];
    }
    for (int v = 0; v < n; ++v)
        if (x[v] <= 0)
            throw Error("stationary: non-positive mass at vertex '" + g.vertex_ids[v] + "'");
    return x;
}

// rho-uniform: the out-weight multiset at every vertex equals rho's weight multiset.
inline bool check_rho_uniform(const StochasticGraph& g, const Rho& rho) {
    const std::vector<Rational> want = rho.sorted_weights();
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.out_edges[v].size() != want.size()) return false;
        std::vector<Rational> have;
        have.reserve(want.size());
        for (int e : g.out_edges[v]) have.push_back(g.edges[e].weight);
        std::sort(have.begin(), have.end());
        if (have != want) return false;
    }
    return true;
}

namespace detail {

// All k-paths listed lexicographically by their edge-index tuples.
inline std::vector<std::vector<int>> enumerate_paths(const StochasticGraph& g, int k) {
    std::vector<std::vector<int>> paths;
    if (k == 0) return paths;
    for (int e = 0; e < g.num_edges(); ++e) paths.push_back({e});
    for (int len = 2; len <= k; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& p : paths) {
            // extend at the back: new edge g_{len} must satisfy t(g_{len}) = s(g_{len-1})
            int need = g.edges[p.back()].src;
            for (int e = 0; e < g.num_edges(); ++e)
                if (g.edges[e].dst == need) {
                    auto q = p;
                    q.push_back(e);
                    next.push_back(std::move(q));
                }
        }
        paths = std::move(next);
    }
    return paths;
}

inline std::string join_ids(const StochasticGraph& g, const std::vector<int>& path) {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += '~';
        s += g.edges[path[i]].id;
    }
    return s;
}

}  // namespace detail

// n-stringing: vertices are (n-1)-paths, edges are n-paths; the n-path g1...gn runs
// from g2...gn to g1...g{n-1} and carries the weight of g1 (the most recently
// traversed edge), which keeps the graph stochastic and rho-uniformity intact.
inline StochasticGraph stringing(const StochasticGraph& g, int n) {
    if (n < 1) throw Error("stringing: n must be >= 1");
    if (n == 1) {
        StochasticGraph copy = g;
        copy.name = g.name.empty() ? "" : g.name + "^(1)";
        return copy;
    }
    auto vpaths = detail::enumerate_paths(g, n - 1);
    auto epaths = detail::enumerate_paths(g, n);
    std::map<std::vector<int>, int> vindex;
    std::vector<std::string> vertex_ids;
    for (const auto& p : vpaths) {
        vindex.emplace(p, static_cast<int>(vertex_ids.size()));
        vertex_ids.push_back(detail::join_ids(g, p));
    }
    std::vector<GraphEdge> edges;
    edges.reserve(epaths.size());
    for (const auto& p : epaths) {
        std::vector<int> src(p.begin() + 1, p.end());
        std::vector<int> dst(p.begin(), p.end() - 1);
        GraphEdge e;
        e.id = detail::join_ids(g, p);
        e.src = vindex.at(src);
        e.dst = vindex.at(dst);
        e.weight = g.edges[p.front()].weight;
        edges.push_back(std::move(e));
    }
    return StochasticGraph::make(g.name.empty() ? "" : g.name + "^(" + std::to_string(n) + ")",
                                 std::move(vertex_ids), std::move(edges));
}

// Edge map of the window projection stringing(g, n) -> g sending each n-path to
// its first edge. Matches the edge order produced by stringing().
inline std::vector<int> stringing_projection(const StochasticGraph& g, int n) {
    if (n < 1) throw Error("stringing: n must be >= 1");
    std::vector<int> proj;
    if (n == 1) {
        proj.resize(g.num_edges());
        std::iota(proj.begin(), proj.end(), 0);
        return proj;
    }
    for (const auto& p : detail::enumerate_paths(g, n)) proj.push_back(p.front());
    return proj;
}

// m(g1...gn) = p(g1) ... p(gn) * p0(s(gn)).
inline Rational cylinder_measure(const StochasticGraph& g, const Path& p,
                                 const std::vector<Rational>& stationary) {
    validate_path(g, p);
    if (static_cast<int>(stationary.size()) != g.num_vertices())
        throw Error("cylinder: stationary vector size mismatch");
    Rational m = stationary[g.edges[p.edges.back()].src];
    for (int e : p.edges) m *= g.edges[e].weight;
    return m;
}

struct ReturnWord {
    Path path;
    Rational weight;  // product of edge weights along the path
};

// First-return paths at u with length <= max_len: t(g1) = s(gn) = u and no
// intermediate vertex equals u. Listed in DFS order over traversal-order
// out-edge choices (deterministic given input order).
inline std::vector<ReturnWord> return_words(const StochasticGraph& g, int u, int max_len) {
    if (u < 0 || u >= g.num_vertices()) throw Error("return_words: bad vertex");
    if (max_len < 1) throw Error("return_words: max_len must be >= 1");
    std::vector<ReturnWord> out;
    std::vector<int> walk;  // edges in traversal order
    auto dfs = [&](auto&& self, int v, const Rational& w) -> void {
        for (int e : g.out_edges[v]) {
            int t = g.edges[e].dst;
            walk.push_back(e);
            Rational w2 = w * g.edges[e].weight;
            if (t == u) {
                ReturnWord r;
                r.path.edges.assign(walk.rbegin(), walk.rend());
                r.weight = w2;
                out.push_back(std::move(r));
            } else if (static_cast<int>(walk.size()) < max_len) {
                self(self, t, w2);
            }
            walk.pop_back();
        }
    };
    dfs(dfs, u, Rational(1));
    return out;
}

}  // namespace mshift
