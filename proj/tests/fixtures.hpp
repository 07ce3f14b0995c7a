#pragma once

// Shared fixtures. The recurring cast:
//  - ruin walk: birth-death chain on {1..n}, letter 1 climbs (weight p),
//    letter 0 falls back toward 1; synchronizes at the floor.
//  - parity extension: Z2 skew product over the ruin base that flips the
//    parity bit exactly when letter 1 fires at the floor vertex.
//  - bern_ext: fiber extension of the one-vertex alphabet graph by a
//    permutation per letter.

#include <string>
#include <vector>

#include "mshift/mshift.hpp"

namespace fx {

using namespace mshift;

inline Rho ruin_rho(const Rational& p) {
    Rho r;
    r.letters = {"0", "1"};
    r.weights = {1 - p, p};
    r.validate();
    return r;
}

inline std::vector<std::string> site_ids(int n) {
    std::vector<std::string> ids;
    for (int j = 1; j <= n; ++j) ids.push_back(std::to_string(j));
    return ids;
}

// edges in vertex-major, letter-minor order; ids "letter@site"
inline StochasticGraph ruin_graph(int n, const Rational& p) {
    auto vids = site_ids(n);
    std::vector<GraphEdge> edges;
    for (int j = 0; j < n; ++j) {
        edges.push_back({"0@" + vids[j], j, std::max(j - 1, 0), 1 - p});
        edges.push_back({"1@" + vids[j], j, std::min(j + 1, n - 1), p});
    }
    return StochasticGraph::make("walk" + std::to_string(n), std::move(vids), std::move(edges));
}

inline Coloring ruin_coloring(int n) {
    Coloring c;
    for (int j = 0; j < n; ++j) {
        c.push_back(0);
        c.push_back(1);
    }
    return c;
}

inline std::vector<std::string> ruin_labels(int n) {
    std::vector<std::string> l;
    for (int j = 0; j < n; ++j) {
        l.push_back("0");
        l.push_back("1");
    }
    return l;
}

inline LetterMaps ruin_maps(int n) {
    LetterMaps lm;
    lm.letters = 2;
    lm.vertices = n;
    lm.f.assign(2, std::vector<int>(n));
    for (int j = 0; j < n; ++j) {
        lm.f[0][j] = std::max(j - 1, 0);
        lm.f[1][j] = std::min(j + 1, n - 1);
    }
    return lm;
}

inline Permutation swap2() { return Permutation({1, 0}); }

// Z2 extension of the ruin walk: the climb letter at the floor flips the bit.
inline GspExtension ruin_parity(int n, const Rational& p, std::uint64_t budget = 1u << 20) {
    std::vector<std::vector<Permutation>> a(2, std::vector<Permutation>(n, Permutation::identity(2)));
    a[1][0] = swap2();
    return build_gsp(ruin_rho(p), site_ids(n), ruin_maps(n), 2, std::move(a), budget);
}

// Extension of the one-vertex graph: one permutation per letter.
inline GspExtension bern_ext(const Rho& rho, const std::vector<Permutation>& a,
                             std::uint64_t budget = 1u << 20) {
    LetterMaps base;
    base.letters = rho.size();
    base.vertices = 1;
    base.f.assign(rho.size(), {0});
    std::vector<std::vector<Permutation>> aa;
    for (const auto& p : a) aa.push_back({p});
    return build_gsp(rho, {"o"}, std::move(base), static_cast<int>(a.front().degree()), std::move(aa),
                     budget);
}

// letter index per edge of materialize(e), in its (j, y, i) edge order
inline Coloring materialize_coloring(const GspExtension& e) {
    Coloring c;
    for (int j = 0; j < e.base_size(); ++j)
        for (int y = 0; y < e.d; ++y)
            for (int i = 0; i < e.rho.size(); ++i) c.push_back(i);
    return c;
}

inline Rho half_half() {
    Rho r;
    r.letters = {"0", "1"};
    r.weights = {Rational(1, 2), Rational(1, 2)};
    return r;
}

// Isomorphic copy with scrambled vertex order, edge order, and fresh ids.
inline StochasticGraph relabel(const StochasticGraph& g, SplitMix64& rng) {
    auto shuffled = [&](int n) {
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = i;
        for (int i = n - 1; i > 0; --i) {
            int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(i + 1));
            std::swap(p[i], p[j]);
        }
        return p;
    };
    auto vperm = shuffled(g.num_vertices());  // new position -> old vertex
    auto eperm = shuffled(g.num_edges());
    std::vector<int> vpos(g.num_vertices());  // old vertex -> new position
    for (int k = 0; k < g.num_vertices(); ++k) vpos[vperm[k]] = k;

    std::vector<std::string> vids;
    for (int k = 0; k < g.num_vertices(); ++k) vids.push_back("n" + std::to_string(k));
    std::vector<GraphEdge> edges;
    for (int k = 0; k < g.num_edges(); ++k) {
        const auto& old = g.edges[eperm[k]];
        edges.push_back({"e" + std::to_string(k), vpos[old.src], vpos[old.dst], old.weight});
    }
    return StochasticGraph::make(g.name.empty() ? "copy" : g.name + "-copy", std::move(vids),
                                 std::move(edges));
}

}  // namespace fx
