#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"

using namespace mshift;

namespace {

// three binomial standard deviations; fixed seeds make these deterministic,
// the margin only documents how close the estimate is expected to land
double three_sigma(double p, int n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST_CASE("sampling is deterministic in the seed") {
    StochasticGraph g = fx::ruin_graph(3, Rational(1, 3));
    auto t1 = sample(g, 1, 200);
    auto t2 = sample(g, 1, 200);
    CHECK(t1 == t2);
    CHECK(t1.size() == 200);
    CHECK(sample(g, 2, 200) != t1);
}

TEST_CASE("samples are backward paths") {
    StochasticGraph g = fx::ruin_graph(3, Rational(1, 3));
    auto traj = sample(g, 5, 50);
    validate_path(g, Path{traj});  // checks s(traj[k]) = t(traj[k+1]) throughout
}

TEST_CASE("letter frequencies match the weights") {
    StochasticGraph g = fx::ruin_graph(2, Rational(1, 3));
    const int n = 100000;
    auto traj = sample(g, 1, n);
    auto letters = letter_stream(traj, fx::ruin_coloring(2));
    int ones = 0;
    for (int l : letters) ones += l;
    double freq = static_cast<double>(ones) / n;
    CHECK(std::abs(freq - 1.0 / 3.0) < three_sigma(1.0 / 3.0, n));
}

TEST_CASE("occupation frequencies match the stationary distribution") {
    StochasticGraph g = fx::ruin_graph(2, Rational(1, 3));
    const int n = 100000;
    auto occ = empirical_occupation(g, sample(g, 1, n));
    auto x = stationary_distribution(g);
    for (int v = 0; v < g.num_vertices(); ++v) {
        double want = static_cast<double>(x[v]);
        CHECK(std::abs(occ[v] - want) < three_sigma(want, n));
    }
    CHECK(empirical_occupation(g, {}) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("cylinder frequencies match the exact measure") {
    StochasticGraph g = fx::ruin_graph(3, Rational(1, 3));
    const int n = 100000;
    auto traj = sample(g, 1, n);
    int e = g.edge_index("0@1");
    Path cyl{{e, e}};
    double want = static_cast<double>(Rational(16, 63));
    double got = empirical_cylinder(traj, cyl);
    CHECK(std::abs(got - want) < three_sigma(want, n - 1));
    CHECK(empirical_cylinder({}, cyl) == 0.0);
}

TEST_CASE("fiber collapse settles at the extension size") {
    GspExtension p2 = fx::ruin_parity(2, Rational(1, 3));
    StochasticGraph base = fx::ruin_graph(2, Rational(1, 3));
    auto letters = letter_stream(sample(base, 3, 1000), fx::ruin_coloring(2));
    CHECK(empirical_fiber_collapse(p2, letters) == 2);
    CHECK(empirical_fiber_collapse(p2, {}) == 4);  // nothing applied yet

    GspExtension flat = fx::bern_ext(fx::ruin_rho(Rational(1, 3)), {Permutation::identity(1), Permutation::identity(1)});
    CHECK(empirical_fiber_collapse(flat, letters) == 1);

    GspExtension rot = fx::bern_ext(fx::half_half(), {fx::swap2(), fx::swap2()});
    CHECK(empirical_fiber_collapse(rot, {0, 1, 0, 0, 1}) == 2);
}

TEST_CASE("pair statistics recover the common-base orbit") {
    StochasticGraph base = fx::ruin_graph(2, Rational(1, 3));
    auto letters = letter_stream(sample(base, 1, 10000), fx::ruin_coloring(2));
    auto pairs = empirical_pair_positivity(fx::ruin_maps(2), fx::ruin_maps(3), letters, 100);

    CommonBase cb = common_extension_degree1(fx::ruin_maps(2), fx::ruin_maps(3));
    std::vector<std::pair<int, int>> want = cb.pairs;
    std::sort(want.begin(), want.end());
    CHECK(pairs == want);

    CHECK(empirical_pair_positivity(fx::ruin_maps(2), fx::ruin_maps(3), letters, 20000).empty());
}

TEST_CASE("weight picking is exact at the boundary") {
    std::vector<Rational> w{Rational(2, 3), Rational(1, 3)};
    // largest u with u/2^64 < 2/3 and its successor
    std::uint64_t edge = 12297829382473034410ULL;
    CHECK(detail::pick(w, edge) == 0);
    CHECK(detail::pick(w, edge + 1) == 1);
    CHECK(detail::pick(w, 0) == 0);
    CHECK(detail::pick(w, UINT64_MAX) == 1);
    CHECK(detail::pick({Rational(1)}, UINT64_MAX) == 0);
}
