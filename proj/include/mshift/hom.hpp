#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mshift/graph.hpp"

namespace mshift {

// Weight-preserving deterministic graph homomorphism: the vertex map is onto,
// and on each out-edge set G_u the edge map is a weight-preserving bijection
// onto H_{phi0(u)}.
struct GraphHom {
    const StochasticGraph* src = nullptr;
    const StochasticGraph* dst = nullptr;
    std::vector<int> edge_map;    // source edge -> target edge
    std::vector<int> vertex_map;  // derived from edge_map
};

// Validates edge_map and derives the vertex map. Throws with the first offending
// edge or vertex named.
inline GraphHom check_hom(const StochasticGraph& src, const StochasticGraph& dst,
                          std::vector<int> edge_map) {
    if (edge_map.size() != static_cast<std::size_t>(src.num_edges()))
        throw Error("hom: edge map size mismatch");
    for (int e : edge_map)
        if (e < 0 || e >= dst.num_edges()) throw Error("hom: edge map image out of range");

    std::vector<int> vmap(src.num_vertices(), -1);
    auto assign = [&](int u, int v, const std::string& why) {
        if (vmap[u] < 0)
            vmap[u] = v;
        else if (vmap[u] != v)
            throw Error("hom: inconsistent vertex image at '" + src.vertex_ids[u] + "' (" + why + ")");
    };
    for (int e = 0; e < src.num_edges(); ++e) {
        const auto& se = src.edges[e];
        const auto& te = dst.edges[edge_map[e]];
        assign(se.src, te.src, "edge '" + se.id + "'");
        assign(se.dst, te.dst, "edge '" + se.id + "'");
        if (se.weight != te.weight)
            throw Error("hom: edge '" + se.id + "' maps to '" + te.id + "' with different weight");
    }
    for (int u = 0; u < src.num_vertices(); ++u)
        if (vmap[u] < 0) throw Error("hom: vertex '" + src.vertex_ids[u] + "' has no image");

    std::vector<char> hit(dst.num_vertices(), 0);
    for (int v : vmap) hit[v] = 1;
    for (int v = 0; v < dst.num_vertices(); ++v)
        if (!hit[v]) throw Error("hom: vertex map misses '" + dst.vertex_ids[v] + "'");

    for (int u = 0; u < src.num_vertices(); ++u) {
        const auto& out = src.out_edges[u];
        const auto& target_out = dst.out_edges[vmap[u]];
        if (out.size() != target_out.size())
            throw Error("hom: out-degree mismatch at '" + src.vertex_ids[u] + "'");
        std::vector<char> used(dst.num_edges(), 0);
        for (int e : out) {
            if (used[edge_map[e]])
                throw Error("hom: not injective on out-edges of '" + src.vertex_ids[u] + "'");
            used[edge_map[e]] = 1;
        }
    }

    GraphHom h;
    h.src = &src;
    h.dst = &dst;
    h.edge_map = std::move(edge_map);
    h.vertex_map = std::move(vmap);
    return h;
}

inline GraphHom compose(const GraphHom& outer, const GraphHom& inner) {
    if (inner.dst != outer.src) throw Error("hom: composition endpoint mismatch");
    std::vector<int> em(inner.edge_map.size());
    for (std::size_t e = 0; e < em.size(); ++e) em[e] = outer.edge_map[inner.edge_map[e]];
    return check_hom(*inner.src, *outer.dst, std::move(em));
}

// Single-vertex graph of an alphabet: one loop per letter.
inline StochasticGraph bernoulli_graph(const Rho& rho) {
    rho.validate();
    std::vector<GraphEdge> edges;
    for (int i = 0; i < rho.size(); ++i) {
        GraphEdge e;
        e.id = rho.letters[i];
        e.src = 0;
        e.dst = 0;
        e.weight = rho.weights[i];
        edges.push_back(std::move(e));
    }
    return StochasticGraph::make("", {"o"}, std::move(edges));
}

// Letter index per source edge; a homomorphism onto the alphabet graph.
using Coloring = std::vector<int>;

// Validates a coloring: per vertex, letters are assigned bijectively and each
// edge's weight equals its letter's rho weight.
inline void check_coloring(const StochasticGraph& g, const Rho& rho, const Coloring& coloring) {
    if (coloring.size() != static_cast<std::size_t>(g.num_edges()))
        throw Error("coloring: size mismatch");
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.out_edges[v].size() != static_cast<std::size_t>(rho.size()))
            throw Error("coloring: out-degree at '" + g.vertex_ids[v] + "' differs from alphabet size");
        std::vector<char> used(rho.size(), 0);
        for (int e : g.out_edges[v]) {
            int i = coloring[e];
            if (i < 0 || i >= rho.size()) throw Error("coloring: letter index out of range");
            if (used[i]) throw Error("coloring: letter repeated at vertex '" + g.vertex_ids[v] + "'");
            used[i] = 1;
            if (g.edges[e].weight != rho.weights[i])
                throw Error("coloring: edge '" + g.edges[e].id + "' weight differs from rho('" +
                            rho.letters[i] + "')");
        }
    }
}

// The vertex dynamics of a coloring: f_i(u) = target of the unique i-labeled
// edge leaving u. Also usable standalone (abstract letter action on a vertex set).
struct LetterMaps {
    int letters = 0;
    int vertices = 0;
    std::vector<std::vector<int>> f;        // f[i][u]
    std::vector<std::vector<int>> edge_of;  // edge_of[i][u]; empty when abstract

    void validate() const {
        if (letters <= 0 || vertices <= 0) throw Error("letter maps: empty");
        if (f.size() != static_cast<std::size_t>(letters)) throw Error("letter maps: bad shape");
        for (const auto& fi : f) {
            if (fi.size() != static_cast<std::size_t>(vertices)) throw Error("letter maps: bad shape");
            for (int v : fi)
                if (v < 0 || v >= vertices) throw Error("letter maps: image out of range");
        }
    }
};

inline LetterMaps letter_maps(const StochasticGraph& g, const Rho& rho, const Coloring& coloring) {
    check_coloring(g, rho, coloring);
    LetterMaps lm;
    lm.letters = rho.size();
    lm.vertices = g.num_vertices();
    lm.f.assign(lm.letters, std::vector<int>(lm.vertices, -1));
    lm.edge_of.assign(lm.letters, std::vector<int>(lm.vertices, -1));
    for (int v = 0; v < g.num_vertices(); ++v)
        for (int e : g.out_edges[v]) {
            lm.f[coloring[e]][v] = g.edges[e].dst;
            lm.edge_of[coloring[e]][v] = e;
        }
    return lm;
}

// Word over the alphabet, leftmost letter applied last:
// f_{i1 i2 ... in} = f_{i1} o f_{i2} o ... o f_{in}.
using Word = std::vector<int>;

inline int apply_word(const LetterMaps& lm, const Word& w, int u) {
    if (u < 0 || u >= lm.vertices) throw Error("apply_word: vertex out of range");
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (*it < 0 || *it >= lm.letters) throw Error("apply_word: letter out of range");
        u = lm.f[*it][u];
    }
    return u;
}

inline std::string format_word(const Rho& rho, const Word& w) {
    bool single = true;
    for (const auto& l : rho.letters) single = single && l.size() == 1;
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k && !single) out += ',';
        out += rho.letters[w[k]];
    }
    return out;
}

// Edgewise image of a path; a valid path maps to a valid path of equal length.
inline Path factor_prefix(const GraphHom& hom, const Path& p) {
    validate_path(*hom.src, p);
    Path q;
    q.edges.reserve(p.edges.size());
    for (int e : p.edges) q.edges.push_back(hom.edge_map[e]);
    validate_path(*hom.dst, q);
    return q;
}

// Streams every coloring of a rho-uniform graph in lexicographic order of the
// per-vertex, per-weight-class assignment odometer. Deterministic.
class ColoringEnumerator {
public:
    ColoringEnumerator(const StochasticGraph& g, const Rho& rho) : g_(&g), rho_(&rho) {
        const auto want = rho.sorted_weights();
        for (int v = 0; v < g.num_vertices(); ++v) {
            std::vector<Rational> have;
            for (int e : g.out_edges[v]) have.push_back(g.edges[e].weight);
            std::sort(have.begin(), have.end());
            if (have != want) throw Error("colorings: graph is not rho-uniform");
        }
        // one factor per (vertex, weight class): edges of that weight at that
        // vertex vs. letters of that weight, matched by an index permutation
        for (int v = 0; v < g.num_vertices(); ++v) {
            std::map<Rational, Factor> classes;
            for (int e : g.out_edges[v]) classes[g.edges[e].weight].edges.push_back(e);
            for (int i = 0; i < rho.size(); ++i) classes[rho.weights[i]].letters.push_back(i);
            for (auto& [w, f] : classes) factors_.push_back(std::move(f));
        }
        for (auto& f : factors_) {
            f.perm.resize(f.edges.size());
            for (std::size_t k = 0; k < f.perm.size(); ++k) f.perm[k] = static_cast<int>(k);
        }
        done_ = false;
    }

    // Total count, saturating at cap.
    std::uint64_t count(std::uint64_t cap = UINT64_MAX) const {
        std::uint64_t total = 1;
        for (const auto& f : factors_) {
            std::uint64_t fact = 1;
            for (std::uint64_t k = 2; k <= f.edges.size(); ++k) {
                if (fact > cap / k) return cap;
                fact *= k;
            }
            if (total > cap / fact) return cap;
            total *= fact;
        }
        return total;
    }

    std::optional<Coloring> next() {
        if (done_) return std::nullopt;
        Coloring c(g_->num_edges(), -1);
        for (const auto& f : factors_)
            for (std::size_t k = 0; k < f.edges.size(); ++k)
                c[f.edges[k]] = f.letters[f.perm[k]];
        // advance odometer: rightmost factor is least significant
        for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
            if (std::next_permutation(it->perm.begin(), it->perm.end())) return c;
        }
        done_ = true;
        return c;
    }

private:
    struct Factor {
        std::vector<int> edges;
        std::vector<int> letters;
        std::vector<int> perm;
    };
    const StochasticGraph* g_;
    const Rho* rho_;
    std::vector<Factor> factors_;
    bool done_ = true;
};

struct ColoringList {
    std::vector<Coloring> colorings;
    bool truncated = false;
};

inline ColoringList enumerate_colorings(const StochasticGraph& g, const Rho& rho,
                                        std::uint64_t budget) {
    ColoringEnumerator it(g, rho);
    ColoringList out;
    while (auto c = it.next()) {
        if (out.colorings.size() >= budget) {
            out.truncated = true;
            break;
        }
        out.colorings.push_back(std::move(*c));
    }
    return out;
}

inline GraphHom coloring_to_hom(const StochasticGraph& g, const Rho& rho,
                                const StochasticGraph& bern, const Coloring& coloring) {
    check_coloring(g, rho, coloring);
    return check_hom(g, bern, coloring);
}

}  // namespace mshift
