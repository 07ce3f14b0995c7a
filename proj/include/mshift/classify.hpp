#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mshift/config.hpp"
#include "mshift/reduction.hpp"

namespace mshift {

struct SearchLogEntry {
    int n = 0;
    std::uint64_t colorings_tried = 0;
    bool colorings_truncated = false;
    bool contraction_truncated = false;
    int best_d = 0;  // best upper bound found at this level, 0 = none
};

struct MinimalIndexReport {
    int d_found = 0;
    int n_at = 0;                    // stringing level of the achieving coloring
    std::uint64_t coloring_index = 0;
    Coloring coloring;               // on stringing(g, n_at)
    bool certified = false;
    std::string certificate;         // "unit-degree" | "distinct-letter-weights" |
                                     // "period-bound" | "budget-accepted" | ""
    int graph_period = 0;
    std::vector<SearchLogEntry> log;
    bool search_exhausted = true;    // no budget/time truncation anywhere
};

// Upper-bound search for the minimal extension size: every coloring of every
// stringing level yields an extension of the shift, and the least image
// cardinality of its letter action bounds the minimal index from above.
// Certification of a matching lower bound comes from one of three facts:
// a degree-1 witness is unbeatable; with pairwise-distinct letter weights the
// unique level-1 coloring already achieves the minimum; the graph period is a
// lower bound (the tail of a d-point extension of an exact system has at most
// d atoms). Otherwise the result is an upper bound unless the caller opted
// into budget-relative certification.
inline MinimalIndexReport minimal_index(const StochasticGraph& g, const Rho& rho,
                                        const Config& cfg) {
    rho.validate();
    if (!is_irreducible(g)) throw Error("minimal_index: graph not irreducible");
    if (!check_rho_uniform(g, rho)) throw Error("minimal_index: graph not rho-uniform");

    MinimalIndexReport rep;
    rep.graph_period = period(g);
    rep.d_found = 0;
    const bool distinct_weights = rho.absolutely_non_homogeneous();
    const auto t0 = std::chrono::steady_clock::now();
    auto out_of_time = [&]() {
        if (cfg.time_budget_ms == 0) return false;
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        return static_cast<std::uint64_t>(ms) >= cfg.time_budget_ms;
    };

    for (int n = 1; n <= cfg.n_max; ++n) {
        StochasticGraph gn = stringing(g, n);
        SearchLogEntry log;
        log.n = n;
        ColoringEnumerator cenum(gn, rho);
        std::uint64_t index = 0;
        bool level_done = false;
        while (!level_done) {
            // one deterministic batch; worker threads split it, merge keeps index order
            std::vector<std::pair<std::uint64_t, Coloring>> batch;
            const std::size_t batch_cap = cfg.jobs > 1 ? 1024 * static_cast<std::size_t>(cfg.jobs) : 64;
            while (batch.size() < batch_cap) {
                if (index >= cfg.coloring_budget) {
                    log.colorings_truncated = true;
                    rep.search_exhausted = false;
                    level_done = true;
                    break;
                }
                auto c = cenum.next();
                if (!c) {
                    level_done = true;
                    break;
                }
                batch.emplace_back(index++, std::move(*c));
            }
            if (batch.empty()) break;
            log.colorings_tried += batch.size();

            std::vector<ContractionReport> results(batch.size());
            auto run = [&](std::size_t lo, std::size_t hi) {
                for (std::size_t k = lo; k < hi; ++k)
                    results[k] =
                        contraction_degree(letter_maps(gn, rho, batch[k].second), cfg.subset_budget);
            };
            if (cfg.jobs > 1 && batch.size() > 1) {
                std::vector<std::thread> pool;
                std::size_t chunk = (batch.size() + cfg.jobs - 1) / cfg.jobs;
                for (int t = 0; t < cfg.jobs; ++t) {
                    std::size_t lo = t * chunk, hi = std::min(batch.size(), lo + chunk);
                    if (lo < hi) pool.emplace_back(run, lo, hi);
                }
                for (auto& th : pool) th.join();
            } else {
                run(0, batch.size());
            }

            for (std::size_t k = 0; k < batch.size(); ++k) {
                const auto& r = results[k];
                if (!r.exhausted) {
                    log.contraction_truncated = true;
                    rep.search_exhausted = false;
                }
                if (log.best_d == 0 || r.degree < log.best_d) log.best_d = r.degree;
                if (rep.d_found == 0 || r.degree < rep.d_found) {
                    rep.d_found = r.degree;
                    rep.n_at = n;
                    rep.coloring_index = batch[k].first;
                    rep.coloring = batch[k].second;
                }
            }
            if (rep.d_found == 1) level_done = true;
            if (out_of_time()) {
                log.colorings_truncated = true;
                rep.search_exhausted = false;
                level_done = true;
            }
        }
        rep.log.push_back(log);

        if (rep.d_found == 1) {
            rep.certified = true;
            rep.certificate = "unit-degree";
            break;
        }
        if (n == 1 && distinct_weights && !log.colorings_truncated && !log.contraction_truncated) {
            rep.certified = true;
            rep.certificate = "distinct-letter-weights";
            break;
        }
        if (rep.d_found == rep.graph_period && !log.contraction_truncated) {
            rep.certified = true;
            rep.certificate = "period-bound";
            break;
        }
        if (out_of_time()) break;
    }
    if (!rep.certified && cfg.accept_budgeted_minimality && rep.search_exhausted) {
        rep.certified = true;
        rep.certificate = "budget-accepted";
    }
    return rep;
}

// ---- cocycle cohomology ------------------------------------------------------

// Solves a2(i,j) w(j) = w(f_i j) a1(i,j) for w : J -> permutations. The base must
// be irreducible; the solution is propagated from vertex 0 along letter edges in
// both directions, one candidate root value at a time in lexicographic order.
// Returns the first consistent w, or absent if none exists.
inline std::optional<std::vector<Permutation>> cohomologous(
    const LetterMaps& base, const std::vector<std::vector<Permutation>>& a1,
    const std::vector<std::vector<Permutation>>& a2, int d, const Config& cfg) {
    base.validate();
    if (d > cfg.d_max)
        throw Error("cohomologous: fiber size " + std::to_string(d) + " exceeds supported maximum " +
                    std::to_string(cfg.d_max));
    const int nj = base.vertices;
    for (const Permutation& root : all_permutations(d)) {
        std::vector<Permutation> w(nj);
        std::vector<char> known(nj, 0);
        w[0] = root;
        known[0] = 1;
        std::vector<int> queue{0};
        bool ok = true;
        for (std::size_t qi = 0; qi < queue.size() && ok; ++qi) {
            int j = queue[qi];
            for (int i = 0; i < base.letters && ok; ++i) {
                int k = base.f[i][j];
                Permutation need = a2[i][j] * w[j] * a1[i][j].inverse();
                if (!known[k]) {
                    w[k] = need;
                    known[k] = 1;
                    queue.push_back(k);
                } else if (w[k] != need) {
                    ok = false;
                }
            }
        }
        if (!ok) continue;
        for (int j = 0; j < nj; ++j)
            if (!known[j]) throw Error("cohomologous: base is not irreducible");
        if (ok) return w;
    }
    return std::nullopt;
}

struct EquivCertificate {
    std::vector<int> kappa;        // base iso J1 -> J2, conjugating the letter actions
    std::vector<Permutation> w;    // per J1 vertex: a2(i, kappa j) w(j) = w(f1_i j) a1(i, j)
};

inline bool verify_equivalence(const GspExtension& e1, const GspExtension& e2,
                               const EquivCertificate& cert) {
    const int nj = e1.base_size();
    if (e2.base_size() != nj || e1.d != e2.d) return false;
    if (static_cast<int>(cert.kappa.size()) != nj || static_cast<int>(cert.w.size()) != nj) return false;
    std::vector<char> hit(nj, 0);
    for (int v : cert.kappa) {
        if (v < 0 || v >= nj || hit[v]) return false;
        hit[v] = 1;
    }
    for (int i = 0; i < e1.rho.size(); ++i)
        for (int j = 0; j < nj; ++j) {
            if (cert.kappa[e1.base.f[i][j]] != e2.base.f[i][cert.kappa[j]]) return false;
            if (e2.a[i][cert.kappa[j]] * cert.w[j] != cert.w[e1.base.f[i][j]] * e1.a[i][j])
                return false;
        }
    return true;
}

// Equivalence of two extensions over the same alphabet: a base isomorphism
// conjugating the letter actions plus a cohomology between the transported
// cocycles. Candidate isomorphisms are scarce: fixing the image of base vertex 0
// forces kappa on the whole forward orbit, which is everything.
inline std::optional<EquivCertificate> extensions_equivalent(const GspExtension& e1,
                                                             const GspExtension& e2,
                                                             const Config& cfg) {
    if (e1.rho.letters != e2.rho.letters || e1.rho.weights != e2.rho.weights)
        throw Error("equivalence: extensions use different alphabets");
    if (e1.d != e2.d || e1.base_size() != e2.base_size()) return std::nullopt;
    const int nj = e1.base_size();
    const int ni = e1.rho.size();
    for (int v0 = 0; v0 < nj; ++v0) {
        std::vector<int> kappa(nj, -1);
        kappa[0] = v0;
        std::vector<int> queue{0};
        bool ok = true;
        for (std::size_t qi = 0; qi < queue.size() && ok; ++qi) {
            int j = queue[qi];
            for (int i = 0; i < ni && ok; ++i) {
                int j2 = e1.base.f[i][j], v2 = e2.base.f[i][kappa[j]];
                if (kappa[j2] < 0) {
                    kappa[j2] = v2;
                    queue.push_back(j2);
                } else if (kappa[j2] != v2) {
                    ok = false;
                }
            }
        }
        if (!ok) continue;
        std::vector<char> hit(nj, 0);
        for (int j = 0; j < nj && ok; ++j) {
            if (kappa[j] < 0 || hit[kappa[j]]) ok = false;
            else hit[kappa[j]] = 1;
        }
        if (!ok) continue;
        // transport e2's cocycle back along kappa and solve for w on e1's base
        std::vector<std::vector<Permutation>> a2k(ni,
                                                  std::vector<Permutation>(nj, Permutation::identity(e1.d)));
        for (int i = 0; i < ni; ++i)
            for (int j = 0; j < nj; ++j) a2k[i][j] = e2.a[i][kappa[j]];
        auto w = cohomologous(e1.base, e1.a, a2k, e1.d, cfg);
        if (w) {
            EquivCertificate cert{kappa, *w};
            if (!verify_equivalence(e1, e2, cert))
                throw Error("equivalence: internal certificate check failed");
            return cert;
        }
    }
    return std::nullopt;
}

// ---- canonical form ----------------------------------------------------------

struct CanonicalForm {
    GspExtension ext;  // irreducible reduced extension at the found index
    MinimalIndexReport index;
    LiftedExtension lift;
    ReductionResult reduction;
    StochasticGraph stringed;  // stringing(g, index.n_at)
    std::vector<int> window_proj;  // stringed edge -> input edge
};

// Minimal-index search, lift of the best coloring, reduction to an irreducible
// extension, and degree-1 verification of the whole connecting chain.
inline CanonicalForm canonical_form(const StochasticGraph& g, const Rho& rho, const Config& cfg) {
    CanonicalForm cf;
    cf.index = minimal_index(g, rho, cfg);
    if (cf.index.d_found == 0) {
        if (!cf.index.search_exhausted)
            throw BudgetError("canonical_form: search budget exhausted before any coloring");
        throw Error("canonical_form: no coloring found");
    }
    cf.stringed = stringing(g, cf.index.n_at);
    cf.window_proj = stringing_projection(g, cf.index.n_at);
    cf.lift = lift_phi_bar(cf.stringed, rho, cf.index.coloring, cfg.subset_budget);
    cf.reduction = reduce_to_irreducible(cf.lift.ext, cfg.persistent_budget, cfg.subset_budget);
    cf.ext = cf.reduction.reduced;

    // verify the chain: window projection, lift projection, reduction map are
    // homomorphisms of degree 1, and the lifted skew product is irreducible
    GraphHom window = check_hom(cf.stringed, g, cf.window_proj);
    if (!hom_degree_one(window, cfg.subset_budget).degree_is_one)
        throw Error("canonical_form: window projection failed the degree-1 check");
    if (!is_irreducible(cf.lift.hbar))
        throw Error("canonical_form: lifted skew product is not irreducible");
    GraphHom psi_bar = check_hom(cf.lift.hbar, cf.stringed, cf.lift.psi_bar);
    if (!hom_degree_one(psi_bar, cfg.subset_budget).degree_is_one)
        throw Error("canonical_form: lift projection failed the degree-1 check");

    const int d = cf.ext.d, ni = rho.size();
    StochasticGraph reduced_bar = materialize(cf.ext);
    std::vector<int> kbar(cf.lift.hbar.num_edges(), -1);
    const auto& c = cf.reduction.relabeling;
    const auto& blk = cf.reduction.block_of;
    for (int j = 0; j < cf.lift.ext.base_size(); ++j)
        for (int y = 0; y < d; ++y)
            for (int i = 0; i < ni; ++i)
                kbar[(j * d + y) * ni + i] = (blk[j] * d + c[j](y)) * ni + i;
    GraphHom kappa_bar = check_hom(cf.lift.hbar, reduced_bar, kbar);
    if (!hom_degree_one(kappa_bar, cfg.subset_budget).degree_is_one)
        throw Error("canonical_form: reduction map failed the degree-1 check");
    return cf;
}

// ---- isomorphism decision ----------------------------------------------------

enum class IsoStatus { Yes, No, Unknown };

struct IsoVerdict {
    IsoStatus status = IsoStatus::Unknown;
    std::string reason;  // NO: "period" | "minimal-index" | "canonical-form"; UNKNOWN: caveat
    std::optional<EquivCertificate> cert;
    std::optional<CanonicalForm> cf1, cf2;
    int period1 = 0, period2 = 0;
};

// Three-valued by design: YES always carries a re-checkable certificate, NO only
// rests on certified invariants, and budget truncation degrades to UNKNOWN.
inline IsoVerdict shifts_isomorphic(const StochasticGraph& g1, const StochasticGraph& g2,
                                    const Rho& rho, const Config& cfg) {
    rho.validate();
    for (const auto* g : {&g1, &g2}) {
        if (!is_irreducible(*g)) throw Error("iso: input graph not irreducible");
        if (!check_rho_uniform(*g, rho)) throw Error("iso: input graph not rho-uniform");
    }
    IsoVerdict v;
    v.period1 = period(g1);
    v.period2 = period(g2);
    if (v.period1 != v.period2) {
        v.status = IsoStatus::No;
        v.reason = "period";
        return v;
    }
    try {
        v.cf1 = canonical_form(g1, rho, cfg);
        v.cf2 = canonical_form(g2, rho, cfg);
    } catch (const BudgetError& e) {
        v.status = IsoStatus::Unknown;
        v.reason = std::string("budget: ") + e.what();
        return v;
    }
    const bool certified = v.cf1->index.certified && v.cf2->index.certified;
    if (v.cf1->ext.d != v.cf2->ext.d) {
        if (certified) {
            v.status = IsoStatus::No;
            v.reason = "minimal-index";
        } else {
            v.status = IsoStatus::Unknown;
            v.reason = "uncertified minimal indices differ";
        }
        return v;
    }
    v.cert = extensions_equivalent(v.cf1->ext, v.cf2->ext, cfg);
    if (v.cert) {
        v.status = IsoStatus::Yes;
        return v;
    }
    if (certified) {
        v.status = IsoStatus::No;
        v.reason = "canonical-form";
    } else {
        v.status = IsoStatus::Unknown;
        v.reason = "canonical forms inequivalent but minimality uncertified";
    }
    return v;
}

// ---- common extensions -------------------------------------------------------

struct CommonBase {
    LetterMaps f;                            // pair action
    std::vector<std::pair<int, int>> pairs;  // vertex -> (j1, j2), discovery order
    std::vector<int> proj1, proj2;
    Word sync;  // word synchronizing both factors
};

// Degree-1 common extension of two synchronizing letter actions: the orbit of a
// doubly synchronized pair under the diagonal action. Projections are onto and
// the pair action is itself synchronizing.
inline CommonBase common_extension_degree1(const LetterMaps& lm1, const LetterMaps& lm2) {
    lm1.validate();
    lm2.validate();
    if (lm1.letters != lm2.letters) throw Error("common base: different alphabets");
    auto w1 = synchronizing_word(lm1);
    auto w2 = synchronizing_word(lm2);
    if (!w1 || !w2) throw Error("common base: a factor is not synchronizing");
    CommonBase out;
    out.sync = *w1;
    out.sync.insert(out.sync.end(), w2->begin(), w2->end());
    int s1 = apply_word(lm1, out.sync, 0);
    int s2 = apply_word(lm2, out.sync, 0);

    std::map<std::pair<int, int>, int> index;
    out.pairs.emplace_back(s1, s2);
    index.emplace(std::make_pair(s1, s2), 0);
    for (std::size_t qi = 0; qi < out.pairs.size(); ++qi) {
        auto [j1, j2] = out.pairs[qi];
        for (int i = 0; i < lm1.letters; ++i) {
            std::pair<int, int> nxt{lm1.f[i][j1], lm2.f[i][j2]};
            if (index.emplace(nxt, static_cast<int>(out.pairs.size())).second)
                out.pairs.push_back(nxt);
        }
    }
    const int np = static_cast<int>(out.pairs.size());
    out.f.letters = lm1.letters;
    out.f.vertices = np;
    out.f.f.assign(lm1.letters, std::vector<int>(np, -1));
    for (int p = 0; p < np; ++p)
        for (int i = 0; i < lm1.letters; ++i)
            out.f.f[i][p] =
                index.at({lm1.f[i][out.pairs[p].first], lm2.f[i][out.pairs[p].second]});
    out.proj1.resize(np);
    out.proj2.resize(np);
    for (int p = 0; p < np; ++p) {
        out.proj1[p] = out.pairs[p].first;
        out.proj2[p] = out.pairs[p].second;
    }
    return out;
}

struct CommonExtension {
    StochasticGraph ghat;
    std::vector<int> hom1;  // ghat edge -> g1 edge
    std::vector<int> hom2;  // ghat edge -> g2 edge
    GspExtension ext;       // ghat as a skew product over the common base
};

// A single graph with degree-1 homomorphisms onto both inputs, assembled from a
// YES verdict: skew product of the pulled-back cocycle of side 1 over the common
// base of the two lifted extensions; the cohomology transporting side 1 to side 2
// is built from the reduction relabelings, block maps and the certificate.
inline CommonExtension common_extension_shifts(const StochasticGraph& g1,
                                               const StochasticGraph& g2, const Rho& rho,
                                               const IsoVerdict& verdict, const Config& cfg) {
    if (verdict.status != IsoStatus::Yes || !verdict.cf1 || !verdict.cf2 || !verdict.cert)
        throw Error("common extension: requires a YES verdict with certificate");
    const CanonicalForm& c1 = *verdict.cf1;
    const CanonicalForm& c2 = *verdict.cf2;
    const int d = c1.ext.d, ni = rho.size();

    CommonBase cb = common_extension_degree1(c1.lift.ext.base, c2.lift.ext.base);
    const int np = static_cast<int>(cb.pairs.size());

    std::vector<std::vector<Permutation>> b1(ni, std::vector<Permutation>(np, Permutation::identity(d)));
    std::vector<std::vector<Permutation>> b2 = b1;
    for (int i = 0; i < ni; ++i)
        for (int p = 0; p < np; ++p) {
            b1[i][p] = c1.lift.ext.a[i][cb.proj1[p]];
            b2[i][p] = c2.lift.ext.a[i][cb.proj2[p]];
        }

    // w-tilde(j1, j2) = c2(j2)^{-1} * w(q1 j1) * c1(j1): transports the reduced
    // certificate to the unreduced common base (the orbit stays over the graph of
    // kappa, which is checked below)
    const auto& cert = *verdict.cert;
    std::vector<Permutation> wt(np, Permutation::identity(d));
    for (int p = 0; p < np; ++p) {
        int j1 = cb.proj1[p], j2 = cb.proj2[p];
        if (cert.kappa[c1.reduction.block_of[j1]] != c2.reduction.block_of[j2])
            throw Error("common extension: orbit leaves the certificate graph");
        wt[p] = c2.reduction.relabeling[j2].inverse() * cert.w[c1.reduction.block_of[j1]] *
                c1.reduction.relabeling[j1];
    }
    for (int i = 0; i < ni; ++i)
        for (int p = 0; p < np; ++p)
            if (b2[i][p] * wt[p] != wt[cb.f.f[i][p]] * b1[i][p])
                throw Error("common extension: transported cohomology failed verification");

    std::vector<std::string> ids;
    for (int p = 0; p < np; ++p)
        ids.push_back(c1.lift.ext.base_ids[cb.proj1[p]] + "&" + c2.lift.ext.base_ids[cb.proj2[p]]);

    CommonExtension out;
    out.ext = build_gsp(rho, std::move(ids), cb.f, d, b1, cfg.subset_budget);
    out.ghat = materialize(out.ext);

    // edge (i, p, y) of ghat maps through the trivial lifts into each side's
    // skew product, then through its lift projection and window projection
    out.hom1.assign(out.ghat.num_edges(), -1);
    out.hom2.assign(out.ghat.num_edges(), -1);
    for (int p = 0; p < np; ++p)
        for (int y = 0; y < d; ++y)
            for (int i = 0; i < ni; ++i) {
                int ge = (p * d + y) * ni + i;
                int e1 = (cb.proj1[p] * d + y) * ni + i;
                int e2 = (cb.proj2[p] * d + wt[p](y)) * ni + i;
                out.hom1[ge] = c1.window_proj[c1.lift.psi_bar[e1]];
                out.hom2[ge] = c2.window_proj[c2.lift.psi_bar[e2]];
            }
    GraphHom h1 = check_hom(out.ghat, g1, out.hom1);
    GraphHom h2 = check_hom(out.ghat, g2, out.hom2);
    if (!hom_degree_one(h1, cfg.subset_budget).degree_is_one ||
        !hom_degree_one(h2, cfg.subset_budget).degree_is_one)
        throw Error("common extension: projection failed the degree-1 check");
    return out;
}

}  // namespace mshift
