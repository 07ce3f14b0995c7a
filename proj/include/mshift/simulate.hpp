#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "mshift/extension.hpp"
#include "mshift/graph.hpp"
#include "mshift/hom.hpp"

namespace mshift {

// Deterministic 64-bit generator (Weyl sequence with a finalizer), chosen so
// sampled trajectories are reproducible across platforms from the seed alone.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

namespace detail {

// least k with u/2^64 < c_0 + ... + c_k, compared exactly in rationals; the
// draw bias is at most 2^-64 per step
inline int pick(const std::vector<Rational>& weights, std::uint64_t u) {
    Rational x(Int(u), Int(1) << 64);
    Rational acc = 0;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
        acc += weights[k];
        if (x < acc) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size()) - 1;
}

}  // namespace detail

// One stationary trajectory, reported most-recent-symbol-first: sample[0] is the
// latest edge drawn, sample[k+1] was drawn before sample[k], and
// s(sample[k]) = t(sample[k+1]) throughout. The start vertex comes from the
// stationary distribution, so every window of the output is a cylinder sample.
inline std::vector<int> sample(const StochasticGraph& g, std::uint64_t seed, int length) {
    auto p0 = stationary_distribution(g);
    SplitMix64 rng(seed);
    int v = detail::pick(p0, rng.next());
    std::vector<int> out;
    out.reserve(length);
    for (int k = 0; k < length; ++k) {
        const auto& outs = g.out_edges[v];
        std::vector<Rational> w;
        w.reserve(outs.size());
        for (int e : outs) w.push_back(g.edges[e].weight);
        int e = outs[detail::pick(w, rng.next())];
        out.push_back(e);
        v = g.edges[e].dst;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

// Fraction of trajectory windows equal to the given backward path.
inline double empirical_cylinder(const std::vector<int>& traj, const Path& cyl) {
    const int n = static_cast<int>(cyl.edges.size());
    const int total = static_cast<int>(traj.size()) - n + 1;
    if (total <= 0) return 0.0;
    int hits = 0;
    for (int s = 0; s < total; ++s) {
        bool eq = true;
        for (int k = 0; k < n && eq; ++k) eq = traj[s + k] == cyl.edges[k];
        if (eq) ++hits;
    }
    return static_cast<double>(hits) / total;
}

// Fraction of steps spent at each vertex (source of the traversed edge).
inline std::vector<double> empirical_occupation(const StochasticGraph& g,
                                                const std::vector<int>& traj) {
    std::vector<double> freq(g.num_vertices(), 0.0);
    if (traj.empty()) return freq;
    for (int e : traj) freq[g.edges[e].src] += 1.0;
    for (double& f : freq) f /= static_cast<double>(traj.size());
    return freq;
}

// Letter word of a trajectory in the order the symbols occurred (oldest first),
// read through a coloring of the sampled graph.
inline std::vector<int> letter_stream(const std::vector<int>& traj, const Coloring& coloring) {
    std::vector<int> w;
    w.reserve(traj.size());
    for (auto it = traj.rbegin(); it != traj.rend(); ++it) w.push_back(coloring[*it]);
    return w;
}

// Tracks the image of the full vertex set J x Y_d under the extension's letter
// action along a letter stream (oldest letter applied first) and reports the
// limiting cardinality. On a valid extension this settles at exactly d.
inline int empirical_fiber_collapse(const GspExtension& e, const std::vector<int>& letters) {
    LetterMaps lm = extended_letter_maps(e);
    std::vector<int> img(lm.vertices);
    for (int u = 0; u < lm.vertices; ++u) img[u] = u;
    for (int i : letters) {
        for (int& u : img) u = lm.f[i][u];
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
    }
    return static_cast<int>(img.size());
}

// Runs both letter actions from their first vertex along a shared letter stream
// and collects the pairs visited after the burn-in prefix, sorted. On fixtures
// this equals the forward orbit of a doubly synchronized pair.
inline std::vector<std::pair<int, int>> empirical_pair_positivity(const LetterMaps& b1,
                                                                  const LetterMaps& b2,
                                                                  const std::vector<int>& letters,
                                                                  int burn_in) {
    b1.validate();
    b2.validate();
    int j1 = 0, j2 = 0;
    std::vector<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < letters.size(); ++k) {
        j1 = b1.f[letters[k]][j1];
        j2 = b2.f[letters[k]][j2];
        if (static_cast<int>(k) >= burn_in) seen.emplace_back(j1, j2);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    return seen;
}

}  // namespace mshift
