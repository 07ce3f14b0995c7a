#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "mshift/contraction.hpp"
#include "mshift/permutation.hpp"
#include "mshift/sgf.hpp"

namespace mshift {

// Graph skew product over a synchronizing base: vertices J x {0..d-1}, one edge
// per letter i from (j, y) to (f_i j, a(i,j) y) with weight rho(i). The base
// letter action must contract to a single point.
struct GspExtension {
    Rho rho;
    std::vector<std::string> base_ids;       // J, input order
    LetterMaps base;                         // f[i][j]
    int d = 0;
    std::vector<std::vector<Permutation>> a; // a[i][j]

    int base_size() const { return static_cast<int>(base_ids.size()); }
};

inline void validate_gsp(const GspExtension& e, std::uint64_t subset_budget) {
    e.rho.validate();
    e.base.validate();
    if (e.base.letters != e.rho.size()) throw Error("gsp: base letters differ from rho");
    if (e.base.vertices != e.base_size()) throw Error("gsp: base id count mismatch");
    if (e.d < 1) throw Error("gsp: fiber size must be >= 1");
    if (e.a.size() != static_cast<std::size_t>(e.rho.size())) throw Error("gsp: cocycle not total");
    for (const auto& row : e.a) {
        if (row.size() != static_cast<std::size_t>(e.base_size())) throw Error("gsp: cocycle not total");
        for (const auto& p : row)
            if (p.degree() != e.d) throw Error("gsp: cocycle permutation degree mismatch");
    }
    auto rep = contraction_degree(e.base, subset_budget);
    if (!rep.exhausted) throw BudgetError("gsp: base contraction check hit budget");
    if (rep.degree != 1) throw Error("gsp: base is not 1-contractive");
}

inline GspExtension build_gsp(Rho rho, std::vector<std::string> base_ids, LetterMaps base, int d,
                              std::vector<std::vector<Permutation>> a, std::uint64_t subset_budget) {
    GspExtension e;
    e.rho = std::move(rho);
    e.base_ids = std::move(base_ids);
    e.base = std::move(base);
    e.d = d;
    e.a = std::move(a);
    validate_gsp(e, subset_budget);
    return e;
}

// The base graph H: one i-labeled edge j -> f_i(j) of weight rho(i) per letter.
// Edge order: vertex-major, letter-minor.
inline StochasticGraph base_graph(const GspExtension& e) {
    std::vector<GraphEdge> edges;
    for (int j = 0; j < e.base_size(); ++j)
        for (int i = 0; i < e.rho.size(); ++i) {
            GraphEdge ed;
            ed.id = e.rho.letters[i] + "@" + e.base_ids[j];
            ed.src = j;
            ed.dst = e.base.f[i][j];
            ed.weight = e.rho.weights[i];
            edges.push_back(std::move(ed));
        }
    return StochasticGraph::make("", e.base_ids, std::move(edges));
}

inline std::vector<std::string> base_graph_labels(const GspExtension& e) {
    std::vector<std::string> labels;
    for (int j = 0; j < e.base_size(); ++j)
        for (int i = 0; i < e.rho.size(); ++i) labels.push_back(e.rho.letters[i]);
    return labels;
}

// Vertex (j, y) has index j*d + y and id "<j>.<y+1>".
inline StochasticGraph materialize(const GspExtension& e) {
    std::vector<std::string> vids;
    for (int j = 0; j < e.base_size(); ++j)
        for (int y = 0; y < e.d; ++y) vids.push_back(e.base_ids[j] + "." + std::to_string(y + 1));
    std::vector<GraphEdge> edges;
    for (int j = 0; j < e.base_size(); ++j)
        for (int y = 0; y < e.d; ++y)
            for (int i = 0; i < e.rho.size(); ++i) {
                GraphEdge ed;
                ed.id = e.rho.letters[i] + "@" + vids[j * e.d + y];
                ed.src = j * e.d + y;
                ed.dst = e.base.f[i][j] * e.d + e.a[i][j](y);
                ed.weight = e.rho.weights[i];
                edges.push_back(std::move(ed));
            }
    return StochasticGraph::make("", std::move(vids), std::move(edges));
}

inline std::vector<std::string> materialize_labels(const GspExtension& e) {
    std::vector<std::string> labels;
    for (int j = 0; j < e.base_size(); ++j)
        for (int y = 0; y < e.d; ++y)
            for (int i = 0; i < e.rho.size(); ++i) labels.push_back(e.rho.letters[i]);
    return labels;
}

// Letter action on J x {0..d-1}: f-bar_i (j, y) = (f_i j, a(i,j) y).
inline LetterMaps extended_letter_maps(const GspExtension& e) {
    LetterMaps lm;
    lm.letters = e.rho.size();
    lm.vertices = e.base_size() * e.d;
    lm.f.assign(lm.letters, std::vector<int>(lm.vertices, -1));
    for (int i = 0; i < lm.letters; ++i)
        for (int j = 0; j < e.base_size(); ++j)
            for (int y = 0; y < e.d; ++y)
                lm.f[i][j * e.d + y] = e.base.f[i][j] * e.d + e.a[i][j](y);
    return lm;
}

// Extension file = base SGF (edges labeled by letters) + cocycle lines.
inline std::string emit_extension(const GspExtension& e, const std::string& name = "") {
    StochasticGraph h = base_graph(e);
    h.name = name;
    std::vector<CocycleLine> lines;
    for (int i = 0; i < e.rho.size(); ++i)
        for (int j = 0; j < e.base_size(); ++j)
            lines.push_back({e.rho.letters[i], e.base_ids[j], e.a[i][j]});
    return emit_sgf(h, e.rho, base_graph_labels(e), lines);
}

inline GspExtension parse_extension(const std::string& text, std::uint64_t subset_budget) {
    SgfDocument doc = parse_sgf(text);
    if (!doc.rho) throw ParseError("extension: missing rho section");
    if (doc.cocycles.empty()) throw ParseError("extension: missing cocycle lines");
    Coloring coloring = doc.coloring();
    GspExtension e;
    e.rho = *doc.rho;
    e.base_ids = doc.graph.vertex_ids;
    e.base = letter_maps(doc.graph, e.rho, coloring);
    e.d = doc.cocycles.front().perm.degree();
    e.a.assign(e.rho.size(), std::vector<Permutation>(e.base_ids.size(), Permutation::identity(e.d)));
    std::vector<std::vector<char>> seen(e.rho.size(), std::vector<char>(e.base_ids.size(), 0));
    for (const auto& c : doc.cocycles) {
        int i = e.rho.index_of(c.letter);
        int j = doc.graph.vertex_index(c.vertex);
        if (i < 0) throw ParseError("extension: cocycle letter '" + c.letter + "' not in rho");
        if (j < 0) throw ParseError("extension: cocycle vertex '" + c.vertex + "' unknown");
        if (seen[i][j]) throw ParseError("extension: duplicate cocycle entry");
        seen[i][j] = 1;
        e.a[i][j] = c.perm;
    }
    for (const auto& row : seen)
        for (char s : row)
            if (!s) throw ParseError("extension: cocycle lines incomplete");
    validate_gsp(e, subset_budget);
    return e;
}

// ---- skew-product structure on a d-extension -------------------------------

struct NormalizedCocycle {
    std::vector<Permutation> a;           // per target edge
    std::vector<std::vector<int>> fibers; // per target vertex, source vertices in id order
    std::vector<int> fiber_pos;           // per source vertex, its index inside its fiber
};

// Chooses the vertex-order bijection of each fiber onto {0..d-1} and reads the
// cocycle off the edge fibers: a(h) sends the position of s(g) to the position
// of t(g) for the unique g over h leaving each fiber point. Errors when fibers
// have unequal sizes or an edge fiber fails to wire a bijection (then no
// skew-product structure exists over this homomorphism).
inline NormalizedCocycle gsp_normalize(const GraphHom& phi, int d) {
    const StochasticGraph& g = *phi.src;
    const StochasticGraph& h = *phi.dst;
    NormalizedCocycle out;
    out.fibers.assign(h.num_vertices(), {});
    out.fiber_pos.assign(g.num_vertices(), -1);
    for (int u = 0; u < g.num_vertices(); ++u) {
        out.fiber_pos[u] = static_cast<int>(out.fibers[phi.vertex_map[u]].size());
        out.fibers[phi.vertex_map[u]].push_back(u);
    }
    for (int v = 0; v < h.num_vertices(); ++v)
        if (out.fibers[v].size() != static_cast<std::size_t>(d))
            throw Error("gsp_normalize: fiber over '" + h.vertex_ids[v] + "' has size " +
                        std::to_string(out.fibers[v].size()) + ", expected " + std::to_string(d));

    std::vector<std::map<int, int>> lift(g.num_vertices());
    for (int u = 0; u < g.num_vertices(); ++u)
        for (int e : g.out_edges[u]) lift[u][phi.edge_map[e]] = e;

    out.a.reserve(h.num_edges());
    for (int he = 0; he < h.num_edges(); ++he) {
        std::vector<int> img(d, -1);
        for (int y = 0; y < d; ++y) {
            int u = out.fibers[h.edges[he].src][y];
            auto it = lift[u].find(he);
            if (it == lift[u].end())
                throw Error("gsp_normalize: no edge over '" + h.edges[he].id + "' at fiber point '" +
                            g.vertex_ids[u] + "'");
            img[y] = out.fiber_pos[g.edges[it->second].dst];
        }
        try {
            out.a.emplace_back(img);
        } catch (const Error&) {
            throw Error("gsp_normalize: edge fiber over '" + h.edges[he].id +
                        "' does not wire a bijection between vertex fibers");
        }
    }
    return out;
}

// ---- canonical lift of a coloring ------------------------------------------

struct LiftedExtension {
    GspExtension ext;
    StochasticGraph hbar;                           // materialize(ext)
    std::vector<int> psi_bar;                       // hbar edge -> source edge
    std::vector<std::vector<int>> persistent_sets;  // L_j, sorted source vertex lists
    ContractionReport contraction;
};

// Builds the standard extension over a coloring phi: the base J indexes the
// persistent d-sets of the letter action, the intermediate graph has vertices
// (j, u in L_j), and the vertex-order normalization of its projection onto the
// base yields the cocycle. The induced map of the skew product onto the source
// graph sends (i, j, y) to the i-labeled edge leaving the y-th point of L_j.
inline LiftedExtension lift_phi_bar(const StochasticGraph& g, const Rho& rho,
                                    const Coloring& coloring, std::uint64_t subset_budget) {
    LetterMaps lm = letter_maps(g, rho, coloring);
    ContractionReport rep = contraction_degree(lm, subset_budget);
    if (!rep.exhausted) throw BudgetError("lift: contraction search hit budget");
    const int d = rep.degree;
    const auto& L = rep.persistent_sets;  // sorted lexicographically
    const int nj = static_cast<int>(L.size());
    std::map<std::vector<int>, int> index_of;
    for (int j = 0; j < nj; ++j) index_of.emplace(L[j], j);

    LetterMaps fj;
    fj.letters = rho.size();
    fj.vertices = nj;
    fj.f.assign(fj.letters, std::vector<int>(nj, -1));
    for (int i = 0; i < rho.size(); ++i)
        for (int j = 0; j < nj; ++j) {
            auto img = detail::apply_letter_to_set(lm, i, L[j]);
            auto it = index_of.find(img);
            if (it == index_of.end()) throw Error("lift: persistent sets not closed under letters");
            fj.f[i][j] = it->second;
        }

    std::vector<std::string> base_ids;
    for (int j = 0; j < nj; ++j) {
        std::string id;
        for (std::size_t k = 0; k < L[j].size(); ++k) {
            if (k) id += '+';
            id += g.vertex_ids[L[j][k]];
        }
        base_ids.push_back(std::move(id));
    }

    // intermediate graph: vertices (j, u in L_j), one i-edge per vertex onto
    // (f_i^J j, f_i u); project onto the base and normalize
    std::vector<std::string> ihat_vids;
    std::vector<std::pair<int, int>> ihat_coord;  // (j, position in L_j)
    for (int j = 0; j < nj; ++j)
        for (int y = 0; y < d; ++y) {
            ihat_vids.push_back(base_ids[j] + "|" + g.vertex_ids[L[j][y]]);
            ihat_coord.emplace_back(j, y);
        }
    auto vert_at = [&](int j, int u) {
        const auto& Lj = L[j];
        int pos = static_cast<int>(std::lower_bound(Lj.begin(), Lj.end(), u) - Lj.begin());
        return j * d + pos;
    };
    std::vector<GraphEdge> ihat_edges;
    std::vector<int> ihat_to_base;  // edge map of the projection
    std::vector<int> ihat_to_g;
    GspExtension proto;
    proto.rho = rho;
    proto.base_ids = base_ids;
    proto.base = fj;
    proto.d = 1;  // placeholder; base graph layout only
    StochasticGraph hgraph = base_graph(proto);
    for (int j = 0; j < nj; ++j)
        for (int y = 0; y < d; ++y)
            for (int i = 0; i < rho.size(); ++i) {
                int u = L[j][y];
                GraphEdge ed;
                ed.id = rho.letters[i] + "@" + ihat_vids[j * d + y];
                ed.src = j * d + y;
                ed.dst = vert_at(fj.f[i][j], lm.f[i][u]);
                ed.weight = rho.weights[i];
                ihat_edges.push_back(std::move(ed));
                ihat_to_base.push_back(j * rho.size() + i);
                ihat_to_g.push_back(lm.edge_of[i][u]);
            }
    StochasticGraph ihat = StochasticGraph::make("", ihat_vids, std::move(ihat_edges));
    GraphHom phi_hat = check_hom(ihat, hgraph, ihat_to_base);
    NormalizedCocycle nc = gsp_normalize(phi_hat, d);

    LiftedExtension out;
    out.ext.rho = rho;
    out.ext.base_ids = std::move(base_ids);
    out.ext.base = fj;
    out.ext.d = d;
    out.ext.a.assign(rho.size(), std::vector<Permutation>(nj, Permutation::identity(d)));
    for (int j = 0; j < nj; ++j)
        for (int i = 0; i < rho.size(); ++i) out.ext.a[i][j] = nc.a[j * rho.size() + i];
    out.hbar = materialize(out.ext);
    // materialize order is (j, y, i); the fiber order chosen by gsp_normalize is
    // the vertex order of ihat, which is (j, y) by construction, so indices align
    out.psi_bar.assign(out.hbar.num_edges(), -1);
    for (int j = 0; j < nj; ++j)
        for (int y = 0; y < d; ++y)
            for (int i = 0; i < rho.size(); ++i)
                out.psi_bar[(j * d + y) * rho.size() + i] = lm.edge_of[i][L[j][y]];
    out.persistent_sets = L;
    out.contraction = std::move(rep);
    return out;
}

// ---- persistent transversal partitions --------------------------------------

// Partition of {0..n-1} into disjoint blocks; canonical form sorts members and
// orders blocks by least member.
struct VertexPartition {
    int n = 0;
    std::vector<std::vector<int>> blocks;

    void canonicalize() {
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        std::sort(blocks.begin(), blocks.end(),
                  [](const auto& x, const auto& y) { return x.front() < y.front(); });
    }

    std::vector<int> block_of() const {
        std::vector<int> owner(n, -1);
        for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
            for (int v : blocks[b]) owner[v] = b;
        return owner;
    }

    bool all_singletons() const { return blocks.size() == static_cast<std::size_t>(n); }

    friend bool operator==(const VertexPartition& a, const VertexPartition& b) {
        return a.n == b.n && a.blocks == b.blocks;
    }
};

// A transversal partition in function form: block R_y = {(j, c(j)^{-1} y)},
// normalized so that c at the first base vertex is the identity.
using PersistentFunction = std::vector<Permutation>;

struct PersistentCensus {
    std::vector<PersistentFunction> funcs;  // sorted lexicographically
    bool exhausted = false;
};

// Every synchronizing word w gives the transversal partition of its accumulated
// cocycle c_w = a(w, .); the persistent partitions are exactly the partitions of
// such functions. Search over states (f_w, c_w), appending one letter at a time:
// (f, c) -> (f o f_i, j -> c(f_i j) a(i,j)). States with constant f are collected
// and normalized; expansion continues from every state until closure.
inline PersistentCensus persistent_partitions(const GspExtension& e, std::uint64_t budget) {
    const int nj = e.base_size();
    const int ni = e.rho.size();
    struct State {
        std::vector<int> f;
        std::vector<Permutation> c;
    };
    auto key_of = [&](const State& s) {
        std::vector<int> k = s.f;
        for (const auto& p : s.c) k.insert(k.end(), p.img.begin(), p.img.end());
        return k;
    };
    State start;
    start.f.resize(nj);
    for (int j = 0; j < nj; ++j) start.f[j] = j;
    start.c.assign(nj, Permutation::identity(e.d));

    std::map<std::vector<int>, int> seen;
    std::vector<State> queue{start};
    seen.emplace(key_of(start), 0);
    std::map<PersistentFunction, int> collected;
    PersistentCensus out;
    out.exhausted = true;

    auto collect = [&](const State& s) {
        for (int j = 1; j < nj; ++j)
            if (s.f[j] != s.f[0]) return;
        PersistentFunction c(nj, Permutation::identity(e.d));
        Permutation inv0 = s.c[0].inverse();
        for (int j = 0; j < nj; ++j) c[j] = inv0 * s.c[j];
        collected.emplace(std::move(c), 0);
    };
    collect(start);  // covers the degenerate single-vertex base

    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        State cur = queue[qi];
        for (int i = 0; i < ni; ++i) {
            State nxt;
            nxt.f.resize(nj);
            nxt.c.resize(nj, Permutation::identity(e.d));
            for (int j = 0; j < nj; ++j) {
                int fij = e.base.f[i][j];
                nxt.f[j] = cur.f[fij];
                nxt.c[j] = cur.c[fij] * e.a[i][j];
            }
            auto key = key_of(nxt);
            if (seen.count(key)) continue;
            if (seen.size() >= budget) {
                out.exhausted = false;
                continue;
            }
            seen.emplace(std::move(key), 0);
            collect(nxt);
            queue.push_back(std::move(nxt));
        }
    }
    for (const auto& [c, v] : collected) out.funcs.push_back(c);
    return out;
}

// The partition named by a persistent function, over J x {0..d-1} with the
// materialize() vertex indexing (j, y) -> j*d + y.
inline VertexPartition partition_of(const PersistentFunction& c, int d) {
    const int nj = static_cast<int>(c.size());
    VertexPartition part;
    part.n = nj * d;
    for (int y = 0; y < d; ++y) {
        std::vector<int> block;
        for (int j = 0; j < nj; ++j) block.push_back(j * d + c[j].inverse()(y));
        part.blocks.push_back(std::move(block));
    }
    part.canonicalize();
    return part;
}

}  // namespace mshift
