#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "hergm/graph.hpp"

using namespace hergm;

TEST_CASE("from_edge_list collapses duplicates and drops self-loops") {
    Graph g = Graph::from_edge_list({{0, 1}, {1, 0}, {2, 2}}, 3);
    CHECK(g.m() == 1);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 0));
    CHECK(!g.has_edge(2, 2));
}

TEST_CASE("from_edge_list empty") {
    Graph g = Graph::from_edge_list({}, 5);
    CHECK(g.n() == 5);
    CHECK(g.m() == 0);
}

TEST_CASE("triangle graph") {
    Graph g = Graph::from_edge_list({{0, 1}, {1, 2}, {0, 2}}, 3);
    CHECK(g.m() == 3);
    for (int i = 0; i < 3; ++i) CHECK(g.degree(i) == 2);
}

TEST_CASE("from_edge_list rejects out-of-range ids") {
    CHECK_THROWS_AS(Graph::from_edge_list({{0, 3}}, 3), InputError);
    CHECK_THROWS_AS(Graph::from_edge_list({{-1, 0}}, 3), InputError);
}

TEST_CASE("graph_stats on small graphs") {
    Graph tri = Graph::from_edge_list({{0, 1}, {1, 2}, {0, 2}}, 3);
    GraphStats s = graph_stats(tri);
    CHECK(s.two_stars == 3);
    CHECK(s.triangles == 1);
    CHECK(s.density == doctest::Approx(1.0));

    Graph path = Graph::from_edge_list({{0, 1}, {1, 2}}, 3);
    GraphStats sp = graph_stats(path);
    CHECK(sp.two_stars == 1);
    CHECK(sp.triangles == 0);
}

TEST_CASE("two-star count matches brute-force triple enumeration") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 5 + static_cast<int>(rng() % 46);
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 4 == 0) edges.emplace_back(i, j);
        Graph g = Graph::from_edge_list(edges, n);
        GraphStats s = graph_stats(g);
        int64_t stars = 0, tris = 0;
        for (int c = 0; c < n; ++c)
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    if (a == c || b == c) continue;
                    if (g.has_edge(c, a) && g.has_edge(c, b)) ++stars;
                }
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c)
                    if (g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c)) ++tris;
        CHECK(s.two_stars == stars);
        CHECK(s.triangles == tris);
        // density * dyads == m exactly
        CHECK(s.density * (static_cast<double>(n) * (n - 1) / 2) == doctest::Approx(g.m()));
    }
}

TEST_CASE("feature adjacency from inverted index") {
    CovariateSet cov(3, 1);
    cov.set_value(0, 0, 10);
    cov.set_value(1, 0, 10);
    cov.set_value(2, 0, 20);
    const auto& fa = cov.feature_adjacency(0);
    REQUIRE(fa.pairs.size() == 1);
    CHECK(fa.pairs[0] == std::pair<int, int>{0, 1});
    CHECK(fa.nnz == 2);
}

TEST_CASE("feature adjacency all-distinct is empty, all-equal is complete") {
    CovariateSet distinct(4, 1);
    for (int i = 0; i < 4; ++i) distinct.set_value(i, 0, i);
    CHECK(distinct.feature_adjacency(0).pairs.empty());

    CovariateSet equal(4, 1);
    for (int i = 0; i < 4; ++i) equal.set_value(i, 0, 7);
    CHECK(equal.feature_adjacency(0).nnz == 12);
    CHECK(equal.feature_adjacency(0).pairs.size() == 6);
}

TEST_CASE("feature adjacency sparsity budget names the covariate") {
    CovariateSet cov(10, 1);
    cov.set_names({"industry"});
    for (int i = 0; i < 10; ++i) cov.set_value(i, 0, 0);
    try {
        cov.feature_adjacency(0, 10);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(std::string(e.what()).find("industry") != std::string::npos);
    }
}

TEST_CASE("feature adjacency nnz formula over categories") {
    std::mt19937_64 rng(11);
    CovariateSet cov(60, 1);
    std::map<int, int64_t> counts;
    for (int i = 0; i < 60; ++i) {
        int v = static_cast<int>(rng() % 7);
        cov.set_value(i, 0, v);
        counts[v]++;
    }
    int64_t expect = 0;
    for (auto& [v, c] : counts) expect += c * (c - 1);
    CHECK(cov.feature_adjacency(0).nnz == expect);
}

TEST_CASE("feature-adjacency overlap with graph is bounded by both supports") {
    std::mt19937_64 rng(13);
    int n = 40;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng() % 5 == 0) edges.emplace_back(i, j);
    Graph g = Graph::from_edge_list(edges, n);
    CovariateSet cov(n, 1);
    for (int i = 0; i < n; ++i) cov.set_value(i, 0, static_cast<int>(rng() % 5));
    const auto& fa = cov.feature_adjacency(0);
    int64_t overlap = 0;
    for (auto [i, j] : fa.pairs)
        if (g.has_edge(i, j)) overlap += 2;
    CHECK(overlap <= fa.nnz);
    CHECK(overlap <= 2 * g.m());
}

TEST_CASE("common neighbors with and without block restriction") {
    Graph tri = Graph::from_edge_list({{0, 1}, {1, 2}, {0, 2}}, 3);
    CHECK(common_neighbors(tri, 0, 1) == 1);

    Graph path = Graph::from_edge_list({{0, 1}, {1, 2}}, 3);
    CHECK(common_neighbors(path, 0, 2) == 1);

    Graph star = Graph::from_edge_list({{0, 1}, {0, 2}, {0, 3}, {0, 4}}, 5);
    CHECK(common_neighbors(star, 1, 2) == 1);

    BlockAssignment z{{0, 1, 0}, 2};
    CHECK(common_neighbors(path, 0, 2, &z, 0) == 0);  // center is in block 1
    BlockAssignment z2{{0, 0, 0}, 1};
    CHECK(common_neighbors(path, 0, 2, &z2, 0) == 1);
}
