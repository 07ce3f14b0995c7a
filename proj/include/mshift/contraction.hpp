#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "mshift/hom.hpp"

namespace mshift {

struct ContractionReport {
    int degree = 0;
    Word witness;                                  // f_witness(U) is a minimal image
    std::vector<std::vector<int>> persistent_sets; // sorted sets, listed lexicographically
    bool exhausted = false;                        // result is proven, not budget-limited
};

namespace detail {

inline std::vector<int> apply_letter_to_set(const LetterMaps& lm, int i, const std::vector<int>& s) {
    std::vector<int> out;
    out.reserve(s.size());
    for (int u : s) out.push_back(lm.f[i][u]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

// Minimal image cardinality of the word action, by best-first search over image
// subsets from the full vertex set. Queue order is (cardinality, discovery order),
// so the first minimal image found carries a short witness. Once the minimum d is
// known, the persistent d-sets are the closure of the found minimal images under
// all letters (the semigroup acts transitively on them, so one closure pass from
// any minimal image collects them all).
inline ContractionReport contraction_degree(const LetterMaps& lm, std::uint64_t budget) {
    lm.validate();
    struct State {
        std::vector<int> set;
        int parent = -1;
        int letter = -1;
    };
    std::vector<State> states;
    std::map<std::vector<int>, int> seen;
    std::vector<std::deque<int>> buckets(lm.vertices + 1);

    std::vector<int> full(lm.vertices);
    for (int u = 0; u < lm.vertices; ++u) full[u] = u;
    states.push_back({full, -1, -1});
    seen.emplace(full, 0);
    buckets[lm.vertices].push_back(0);

    int best_state = 0;
    std::size_t best_size = full.size();
    bool exhausted = true;
    std::uint64_t visited = 1;

    while (true) {
        int cur = -1;
        for (auto& b : buckets)
            if (!b.empty()) {
                cur = b.front();
                b.pop_front();
                break;
            }
        if (cur < 0) break;
        if (best_size == 1) break;  // nothing smaller exists
        for (int i = 0; i < lm.letters; ++i) {
            auto img = detail::apply_letter_to_set(lm, i, states[cur].set);
            if (seen.count(img)) continue;
            if (visited >= budget) {
                exhausted = false;
                break;
            }
            ++visited;
            int id = static_cast<int>(states.size());
            seen.emplace(img, id);
            states.push_back({img, cur, i});
            buckets[img.size()].push_back(id);
            if (img.size() < best_size) {
                best_size = img.size();
                best_state = id;
            }
        }
        if (!exhausted || best_size == 1) break;
    }

    ContractionReport rep;
    rep.degree = static_cast<int>(best_size);
    rep.exhausted = exhausted || best_size == 1;
    for (int s = best_state; states[s].parent >= 0; s = states[s].parent)
        rep.witness.push_back(states[s].letter);

    if (rep.exhausted) {
        // closure of the minimal images under every letter
        std::map<std::vector<int>, int> persist;
        std::deque<std::vector<int>> queue;
        if (best_size == 1) {
            persist.emplace(states[best_state].set, 0);
            queue.push_back(states[best_state].set);
        } else {
            for (const auto& [set, id] : seen)
                if (set.size() == best_size) {
                    persist.emplace(set, 0);
                    queue.push_back(set);
                }
        }
        while (!queue.empty()) {
            auto s = queue.front();
            queue.pop_front();
            for (int i = 0; i < lm.letters; ++i) {
                auto img = detail::apply_letter_to_set(lm, i, s);
                if (img.size() != best_size)
                    throw Error("contraction: letter image escapes the minimal cardinality");
                if (persist.emplace(img, 0).second) {
                    queue.push_back(img);
                    if (persist.size() > budget) {
                        rep.exhausted = false;
                        queue.clear();
                        break;
                    }
                }
            }
        }
        for (const auto& [set, id] : persist) rep.persistent_sets.push_back(set);
    }
    return rep;
}

// A word collapsing every vertex to one point, by repeated pair merging: while the
// running image has two points, find a shortest word merging its first pair and
// prepend it. Absence of a merging word for some pair proves no such word exists.
inline std::optional<Word> synchronizing_word(const LetterMaps& lm) {
    lm.validate();
    auto merge_pair = [&](int a, int b) -> std::optional<Word> {
        struct PState {
            int x, y, parent, letter;
        };
        std::vector<PState> states;
        std::map<std::pair<int, int>, int> seen;
        auto norm = [](int x, int y) { return std::make_pair(std::min(x, y), std::max(x, y)); };
        states.push_back({std::min(a, b), std::max(a, b), -1, -1});
        seen.emplace(norm(a, b), 0);
        for (std::size_t qi = 0; qi < states.size(); ++qi) {
            auto [x, y, p, l] = states[qi];
            for (int i = 0; i < lm.letters; ++i) {
                int x2 = lm.f[i][x], y2 = lm.f[i][y];
                if (x2 == y2) {
                    Word w{i};
                    for (int s = static_cast<int>(qi); states[s].parent >= 0; s = states[s].parent)
                        w.push_back(states[s].letter);
                    return w;
                }
                auto key = norm(x2, y2);
                if (seen.emplace(key, static_cast<int>(states.size())).second)
                    states.push_back({key.first, key.second, static_cast<int>(qi), i});
            }
        }
        return std::nullopt;
    };

    std::vector<int> image(lm.vertices);
    for (int u = 0; u < lm.vertices; ++u) image[u] = u;
    std::sort(image.begin(), image.end());
    Word word;
    while (image.size() > 1) {
        auto m = merge_pair(image[0], image[1]);
        if (!m) return std::nullopt;
        word.insert(word.begin(), m->begin(), m->end());
        std::vector<int> next;
        for (int u : image) next.push_back(apply_word(lm, *m, u));
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        image = std::move(next);
    }
    return word;
}

inline bool is_d_contractive(const LetterMaps& lm, int d, std::uint64_t budget) {
    auto rep = contraction_degree(lm, budget);
    return rep.exhausted && rep.degree == d;
}

struct HomDegreeReport {
    bool degree_is_one = false;
    bool exhausted = false;
};

// Degree-1 test for a general homomorphism: search over states (target vertex v,
// subset of the fiber over v), started from every full fiber and advanced along
// target edges by the induced fiber maps. A reachable singleton pins the lift of
// almost every trajectory coordinate-by-coordinate, i.e. the factor map is a.e.
// injective; if no singleton is reachable the degree is at least 2.
inline HomDegreeReport hom_degree_one(const GraphHom& hom, std::uint64_t budget) {
    const StochasticGraph& g = *hom.src;
    const StochasticGraph& h = *hom.dst;
    // fiber lists in vertex order; per source vertex, target-edge -> source-edge
    std::vector<std::vector<int>> fiber(h.num_vertices());
    for (int u = 0; u < g.num_vertices(); ++u) fiber[hom.vertex_map[u]].push_back(u);
    std::vector<std::map<int, int>> lift(g.num_vertices());
    for (int u = 0; u < g.num_vertices(); ++u)
        for (int e : g.out_edges[u]) lift[u][hom.edge_map[e]] = e;

    std::map<std::pair<int, std::vector<int>>, int> seen;
    std::vector<std::pair<int, std::vector<int>>> queue;
    HomDegreeReport rep;
    rep.exhausted = true;
    std::uint64_t visited = 0;
    auto push = [&](int v, std::vector<int> s) {
        if (s.size() == 1) {
            rep.degree_is_one = true;
            return;
        }
        auto key = std::make_pair(v, s);
        if (seen.count(key)) return;
        if (visited >= budget) {
            rep.exhausted = false;
            return;
        }
        ++visited;
        seen.emplace(key, 1);
        queue.emplace_back(v, std::move(s));
    };
    for (int v = 0; v < h.num_vertices(); ++v) {
        push(v, fiber[v]);
        if (rep.degree_is_one) return rep;
    }
    for (std::size_t qi = 0; qi < queue.size() && !rep.degree_is_one; ++qi) {
        auto [v, s] = queue[qi];
        for (int he : h.out_edges[v]) {
            std::vector<int> img;
            img.reserve(s.size());
            for (int u : s) {
                auto it = lift[u].find(he);
                if (it == lift[u].end()) throw Error("hom degree: missing edge lift");
                img.push_back(g.edges[it->second].dst);
            }
            std::sort(img.begin(), img.end());
            img.erase(std::unique(img.begin(), img.end()), img.end());
            push(h.edges[he].dst, std::move(img));
            if (rep.degree_is_one) break;
        }
    }
    return rep;
}

}  // namespace mshift
