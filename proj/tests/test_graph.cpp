#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace mshift;

namespace {

StochasticGraph two_cycle() {
    return StochasticGraph::make("flip", {"u", "v"},
                                 {{"uv", 0, 1, Rational(1)}, {"vu", 1, 0, Rational(1)}});
}

StochasticGraph two_loops() {
    return StochasticGraph::make("split", {"u", "v"},
                                 {{"uu", 0, 0, Rational(1)}, {"vv", 1, 1, Rational(1)}});
}

void check_balance(const StochasticGraph& g) {
    auto x = stationary_distribution(g);
    Rational total = 0;
    for (int v = 0; v < g.num_vertices(); ++v) {
        Rational in = 0;
        for (int e : g.in_edges[v]) in += g.edges[e].weight * x[g.edges[e].src];
        CHECK(in == x[v]);
        CHECK(x[v] > 0);
        total += x[v];
    }
    CHECK(total == 1);
}

}  // namespace

TEST_CASE("rho validation and weight fingerprints") {
    Rho r = fx::ruin_rho(Rational(1, 3));
    CHECK(r.absolutely_non_homogeneous());
    CHECK_FALSE(fx::half_half().absolutely_non_homogeneous());
    CHECK(r.index_of("1") == 1);
    CHECK(r.index_of("z") == -1);

    Rho bad = r;
    bad.weights[0] = Rational(1, 2);
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = r;
    bad.letters[1] = "0";
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("ruin walk graphs validate, are irreducible and rho-uniform") {
    Rho rho = fx::ruin_rho(Rational(1, 3));
    for (int n = 1; n <= 5; ++n) {
        StochasticGraph g = fx::ruin_graph(n, Rational(1, 3));
        CHECK(g.num_vertices() == n);
        CHECK(g.num_edges() == 2 * n);
        CHECK(is_irreducible(g));
        CHECK(check_rho_uniform(g, rho));
        CHECK(period(g) == 1);
    }
    CHECK_FALSE(check_rho_uniform(fx::ruin_graph(3, Rational(1, 3)), fx::half_half()));
}

TEST_CASE("graph validation rejects malformed inputs") {
    CHECK_THROWS_AS(StochasticGraph::make("g", {"a", "a"}, {{"x", 0, 0, Rational(1)}}), Error);
    CHECK_THROWS_AS(StochasticGraph::make("g", {"a"},
                                          {{"x", 0, 0, Rational(1, 2)}, {"x", 0, 0, Rational(1, 2)}}),
                    Error);
    // row sum != 1
    CHECK_THROWS_AS(StochasticGraph::make("g", {"a"}, {{"x", 0, 0, Rational(1, 2)}}), Error);
    // vertex with no in-edge
    CHECK_THROWS_AS(StochasticGraph::make("g", {"a", "b"},
                                          {{"x", 0, 0, Rational(1)}, {"y", 1, 0, Rational(1)}}),
                    Error);
    CHECK_THROWS_AS(StochasticGraph::make("g", {"a"}, {{"x", 0, 0, Rational(0)}}), Error);
}

TEST_CASE("irreducibility and period") {
    CHECK(is_irreducible(two_cycle()));
    CHECK(period(two_cycle()) == 2);
    CHECK_FALSE(is_irreducible(two_loops()));
    CHECK_THROWS_AS(period(two_loops()), Error);
}

TEST_CASE("stationary distribution of the ruin walk") {
    {
        auto x = stationary_distribution(fx::ruin_graph(2, Rational(1, 3)));
        CHECK(x == std::vector<Rational>{Rational(2, 3), Rational(1, 3)});
    }
    {
        auto x = stationary_distribution(fx::ruin_graph(3, Rational(1, 3)));
        CHECK(x == std::vector<Rational>{Rational(4, 7), Rational(2, 7), Rational(1, 7)});
    }
}

TEST_CASE("stationary satisfies the balance equations exactly") {
    for (int n = 1; n <= 5; ++n) check_balance(fx::ruin_graph(n, Rational(1, 3)));
    check_balance(two_cycle());
    check_balance(stringing(fx::ruin_graph(3, Rational(1, 3)), 2));
    CHECK_THROWS_AS(stationary_distribution(two_loops()), Error);
}

TEST_CASE("cylinder measures are exact and sum to one per length") {
    StochasticGraph g = fx::ruin_graph(3, Rational(1, 3));
    auto x = stationary_distribution(g);

    // two consecutive falls seen at the floor: edges both "0@1"
    int e = g.edge_index("0@1");
    REQUIRE(e >= 0);
    CHECK(cylinder_measure(g, Path{{e, e}}, x) == Rational(16, 63));

    for (int len = 1; len <= 3; ++len) {
        Rational sum = 0;
        for (const auto& p : detail::enumerate_paths(g, len)) sum += cylinder_measure(g, Path{p}, x);
        CHECK(sum == 1);
    }
    CHECK_THROWS_AS(cylinder_measure(g, Path{}, x), Error);
    CHECK_THROWS_AS(cylinder_measure(g, Path{{0, 1}}, x), Error);  // not composable
}

TEST_CASE("path enumeration is lexicographic in edge indices") {
    StochasticGraph g = fx::ruin_graph(2, Rational(1, 3));
    auto paths = detail::enumerate_paths(g, 2);
    std::vector<std::vector<int>> want = {{0, 0}, {0, 2}, {1, 0}, {1, 2},
                                          {2, 1}, {2, 3}, {3, 1}, {3, 3}};
    CHECK(paths == want);
    CHECK(detail::enumerate_paths(g, 1).size() == 4);
    CHECK(detail::enumerate_paths(fx::ruin_graph(3, Rational(1, 3)), 2).size() == 12);
}

TEST_CASE("return words at the floor vertex") {
    StochasticGraph g = fx::ruin_graph(2, Rational(1, 3));
    auto rw = return_words(g, 0, 2);
    REQUIRE(rw.size() == 2);
    CHECK(rw[0].weight == Rational(2, 3));
    CHECK(rw[0].path.edges == std::vector<int>{g.edge_index("0@1")});
    CHECK(rw[1].weight == Rational(2, 9));
    // climb then fall; stored backwards so the fall (last traversed) is listed first
    CHECK(rw[1].path.edges == std::vector<int>{g.edge_index("0@2"), g.edge_index("1@1")});
    for (const auto& r : rw) validate_path(g, r.path);

    CHECK_THROWS_AS(return_words(g, 5, 2), Error);
    CHECK_THROWS_AS(return_words(g, 0, 0), Error);
}

TEST_CASE("stringing produces the path graph with transported measure") {
    StochasticGraph g = fx::ruin_graph(2, Rational(1, 3));
    StochasticGraph s2 = stringing(g, 2);

    CHECK(s2.num_vertices() == g.num_edges());
    CHECK(s2.num_edges() == static_cast<int>(oracle::stringing_edge_count(g)));
    CHECK(is_irreducible(s2));
    CHECK(check_rho_uniform(s2, fx::ruin_rho(Rational(1, 3))));
    CHECK(period(s2) == 1);
    CHECK(s2.vertex_ids == std::vector<std::string>{"0@1", "1@1", "0@2", "1@2"});
    CHECK(s2.edges[0].id == "0@1~0@1");

    // vertex mass of a 1-path equals its cylinder measure downstairs
    auto x = stationary_distribution(g);
    auto xs = stationary_distribution(s2);
    for (int e = 0; e < g.num_edges(); ++e) {
        int v = s2.vertex_index(g.edges[e].id);
        REQUIRE(v >= 0);
        CHECK(xs[v] == cylinder_measure(g, Path{{e}}, x));
    }

    StochasticGraph s1 = stringing(g, 1);
    CHECK(s1.num_edges() == g.num_edges());
    CHECK(s1.vertex_ids == g.vertex_ids);
    CHECK(period(stringing(two_cycle(), 2)) == 2);
    CHECK_THROWS_AS(stringing(g, 0), Error);
}

TEST_CASE("stringing projection is the first-edge homomorphism") {
    StochasticGraph g = fx::ruin_graph(2, Rational(1, 3));
    StochasticGraph s2 = stringing(g, 2);
    auto proj = stringing_projection(g, 2);
    CHECK(proj == std::vector<int>{0, 0, 1, 1, 2, 2, 3, 3});

    GraphHom h = check_hom(s2, g, proj);  // throws if not a weight-preserving hom
    CHECK(h.vertex_map.size() == 4);

    auto id = stringing_projection(g, 1);
    CHECK(id == std::vector<int>{0, 1, 2, 3});
}
