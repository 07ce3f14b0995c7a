#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "mshift/extension.hpp"

namespace mshift {

// Coarsest partition of the base on which every pair of persistent functions
// differs by a block-constant permutation: group vertices by the signature
// j -> (c'(j) c(j)^{-1} for all function pairs).
inline VertexPartition xi_zero(const std::vector<PersistentFunction>& funcs, int base_size) {
    std::map<std::vector<Permutation>, std::vector<int>> groups;
    for (int j = 0; j < base_size; ++j) {
        std::vector<Permutation> sig;
        for (std::size_t k = 0; k < funcs.size(); ++k)
            for (std::size_t l = k + 1; l < funcs.size(); ++l)
                sig.push_back(funcs[l][j] * funcs[k][j].inverse());
        groups[std::move(sig)].push_back(j);
    }
    VertexPartition part;
    part.n = base_size;
    for (auto& [sig, members] : groups) part.blocks.push_back(std::move(members));
    part.canonicalize();
    return part;
}

// Coarsest refinement of seed that the letter action maps block-into-block,
// by Moore-style splitting on the tuple of successor blocks.
inline VertexPartition coarsest_congruence(const VertexPartition& seed, const LetterMaps& base) {
    if (seed.n != base.vertices) throw Error("congruence: partition size mismatch");
    std::vector<int> owner = seed.block_of();
    std::size_t classes = seed.blocks.size();
    while (true) {
        std::map<std::vector<int>, int> sigs;
        std::vector<int> next(base.vertices);
        for (int j = 0; j < base.vertices; ++j) {
            std::vector<int> sig{owner[j]};
            for (int i = 0; i < base.letters; ++i) sig.push_back(owner[base.f[i][j]]);
            auto [it, fresh] = sigs.emplace(std::move(sig), static_cast<int>(sigs.size()));
            next[j] = it->second;
        }
        // splitting is monotone, so an unchanged class count means a fixed point
        if (sigs.size() == classes) break;
        classes = sigs.size();
        owner = std::move(next);
    }
    std::map<int, std::vector<int>> blocks;
    for (int j = 0; j < base.vertices; ++j) blocks[owner[j]].push_back(j);
    VertexPartition part;
    part.n = base.vertices;
    for (auto& [b, members] : blocks) part.blocks.push_back(std::move(members));
    part.canonicalize();
    return part;
}

// Cohomologous rewrite a'(i,j) = c(f_i j) a(i,j) c(j)^{-1}. On a partition that
// is a congruence and refines xi_zero, the rewritten cocycle cannot depend on j
// within a block; that is asserted, not assumed.
inline GspExtension recoordinatize(const GspExtension& e, const PersistentFunction& c,
                                   const VertexPartition& xi) {
    if (static_cast<int>(c.size()) != e.base_size() || xi.n != e.base_size())
        throw Error("recoordinatize: size mismatch");
    GspExtension out = e;
    for (int i = 0; i < e.rho.size(); ++i)
        for (int j = 0; j < e.base_size(); ++j)
            out.a[i][j] = c[e.base.f[i][j]] * e.a[i][j] * c[j].inverse();
    for (const auto& block : xi.blocks)
        for (int i = 0; i < e.rho.size(); ++i)
            for (std::size_t k = 1; k < block.size(); ++k)
                if (out.a[i][block[k]] != out.a[i][block[0]])
                    throw Error("recoordinatize: rewritten cocycle varies inside a block");
    return out;
}

struct QuotientResult {
    GspExtension ext;
    std::vector<int> block_of;  // base vertex -> quotient vertex
};

// Collapses each block to its least member. Requires the letter action to be
// block-consistent and the cocycle block-constant (as recoordinatize arranges).
inline QuotientResult quotient(const GspExtension& e, const VertexPartition& xi,
                               std::uint64_t subset_budget) {
    if (xi.n != e.base_size()) throw Error("quotient: partition size mismatch");
    std::vector<int> owner = xi.block_of();
    const int nb = static_cast<int>(xi.blocks.size());

    LetterMaps base;
    base.letters = e.rho.size();
    base.vertices = nb;
    base.f.assign(base.letters, std::vector<int>(nb, -1));
    std::vector<std::vector<Permutation>> a(e.rho.size(),
                                            std::vector<Permutation>(nb, Permutation::identity(e.d)));
    for (int b = 0; b < nb; ++b) {
        const auto& block = xi.blocks[b];
        for (int i = 0; i < e.rho.size(); ++i) {
            int target = owner[e.base.f[i][block[0]]];
            for (int j : block) {
                if (owner[e.base.f[i][j]] != target)
                    throw Error("quotient: partition is not a congruence");
                if (e.a[i][j] != e.a[i][block[0]])
                    throw Error("quotient: cocycle varies inside a block");
            }
            base.f[i][b] = target;
            a[i][b] = e.a[i][block[0]];
        }
    }
    std::vector<std::string> ids;
    for (const auto& block : xi.blocks) ids.push_back(e.base_ids[block[0]]);

    QuotientResult out;
    out.ext = build_gsp(e.rho, std::move(ids), std::move(base), e.d, std::move(a), subset_budget);
    out.block_of = std::move(owner);
    return out;
}

struct ReductionResult {
    VertexPartition xi_star;
    PersistentFunction relabeling;  // the persistent function used to recoordinatize
    GspExtension reduced;
    std::vector<int> block_of;
    bool irreducible = false;  // input was already irreducible (xi_star trivial)
};

// Full reduction: census the persistent functions, intersect their pairwise
// constancy partition with the coarsest congruence it contains, recoordinatize by
// the lexicographically least persistent function, and quotient.
inline ReductionResult reduce_to_irreducible(const GspExtension& e, std::uint64_t persistent_budget,
                                             std::uint64_t subset_budget) {
    PersistentCensus census = persistent_partitions(e, persistent_budget);
    if (!census.exhausted) throw BudgetError("reduce: persistent-function search hit budget");
    if (census.funcs.empty()) throw Error("reduce: no persistent function found");

    VertexPartition xi0 = xi_zero(census.funcs, e.base_size());
    VertexPartition xs = coarsest_congruence(xi0, e.base);
    GspExtension rec = recoordinatize(e, census.funcs.front(), xs);
    QuotientResult q = quotient(rec, xs, subset_budget);

    ReductionResult out;
    out.xi_star = std::move(xs);
    out.relabeling = census.funcs.front();
    out.reduced = std::move(q.ext);
    out.block_of = std::move(q.block_of);
    out.irreducible = out.xi_star.all_singletons();
    return out;
}

}  // namespace mshift
