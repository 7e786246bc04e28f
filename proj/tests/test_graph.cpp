#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "egat/graph.hpp"
#include "egat/rng.hpp"
#include "oracles.hpp"

using namespace egat;

TEST_CASE("build_graph canonicalizes endpoints and keeps input order") {
    const Graph g = build_graph(5, {{3, 1}, {0, 4}, {2, 2}, {4, 1}});
    REQUIRE(g.num_edges() == 4);
    CHECK(g.edges[0] == std::pair<int, int>{1, 3});
    CHECK(g.edges[1] == std::pair<int, int>{0, 4});
    CHECK(g.edges[2] == std::pair<int, int>{2, 2});
    CHECK(g.edges[3] == std::pair<int, int>{1, 4});
    for (char f : g.self_loop_flags) CHECK(f == 0);
}

TEST_CASE("build_graph rejects bad input") {
    CHECK_THROWS_AS(build_graph(-1, {}), StructuralError);
    CHECK_THROWS_AS(build_graph(3, {{0, 3}}), StructuralError);
    CHECK_THROWS_AS(build_graph(3, {{-1, 0}}), StructuralError);
    // The same undirected edge in either orientation is a duplicate.
    CHECK_THROWS_AS(build_graph(3, {{0, 1}, {1, 0}}), StructuralError);
    CHECK_THROWS_AS(build_graph(3, {{2, 2}, {2, 2}}), StructuralError);
    CHECK_NOTHROW(build_graph(0, {}));
}

TEST_CASE("degrees and incidence agree with direct counting") {
    // Path 0-1-2 plus loop at 2 and pendant 2-3.
    const Graph g = build_graph(4, {{0, 1}, {1, 2}, {2, 2}, {2, 3}});
    const auto deg = node_degrees(g);
    CHECK(deg == std::vector<int>{1, 2, 3, 1});

    const auto inc = incident_edges(g);
    CHECK(inc[0] == std::vector<int>{0});
    CHECK(inc[1] == std::vector<int>{0, 1});
    CHECK(inc[2] == std::vector<int>{1, 2, 3});
    CHECK(inc[3] == std::vector<int>{3});
}

TEST_CASE("edge degree features count edges sharing an endpoint") {
    const Graph g = build_graph(4, {{0, 1}, {1, 2}, {2, 2}, {2, 3}});
    const FeatureMatrix f = synthesize_edge_degree_features(g);
    REQUIRE(f.rows == 4);
    REQUIRE(f.cols == 1);
    // Brute force: edges q != p with a common endpoint.
    for (int p = 0; p < g.num_edges(); ++p) {
        int want = 0;
        for (int q = 0; q < g.num_edges(); ++q) {
            if (q != p && oracle::edges_adjacent(g, p, q)) ++want;
        }
        CHECK(f.at(p, 0) == static_cast<double>(want));
    }
}

TEST_CASE("edge degree features match brute force on random graphs") {
    Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(12));
        const Graph g = oracle::random_graph(rng, n, 0.3);
        const FeatureMatrix f = synthesize_edge_degree_features(g);
        for (int p = 0; p < g.num_edges(); ++p) {
            int want = 0;
            for (int q = 0; q < g.num_edges(); ++q) {
                if (q != p && oracle::edges_adjacent(g, p, q)) ++want;
            }
            CHECK(f.at(p, 0) == static_cast<double>(want));
        }
    }
}

TEST_CASE("self-loop augmentation appends mean-feature loops") {
    // Node 2 already has a loop; node 3 is isolated.
    const Graph g = build_graph(4, {{0, 1}, {1, 2}, {2, 2}});
    FeatureMatrix feats(3, 2);
    feats.at(0, 0) = 1.0; feats.at(0, 1) = 10.0;
    feats.at(1, 0) = 3.0; feats.at(1, 1) = 30.0;
    feats.at(2, 0) = 5.0; feats.at(2, 1) = 50.0;

    const auto [aug, aug_feats] = add_virtual_self_loops(g, feats);
    REQUIRE(aug.num_edges() == 6);  // loops added for 0, 1, 3 only
    CHECK(aug.edges[3] == std::pair<int, int>{0, 0});
    CHECK(aug.edges[4] == std::pair<int, int>{1, 1});
    CHECK(aug.edges[5] == std::pair<int, int>{3, 3});
    CHECK(aug.self_loop_flags == std::vector<char>{0, 0, 0, 1, 1, 1});

    // Original features are untouched.
    for (int p = 0; p < 3; ++p) {
        for (int c = 0; c < 2; ++c) CHECK(aug_feats.at(p, c) == feats.at(p, c));
    }
    // Loop at 0: only edge 0 is incident.
    CHECK(aug_feats.at(3, 0) == 1.0);
    CHECK(aug_feats.at(3, 1) == 10.0);
    // Loop at 1: mean of edges 0 and 1.
    CHECK(aug_feats.at(4, 0) == 2.0);
    CHECK(aug_feats.at(4, 1) == 20.0);
    // Isolated node 3 gets the zero vector.
    CHECK(aug_feats.at(5, 0) == 0.0);
    CHECK(aug_feats.at(5, 1) == 0.0);
}

TEST_CASE("augmentation is idempotent and covers every node") {
    Rng rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_index(15));
        const Graph g = oracle::random_graph(rng, n, 0.25);
        const FeatureMatrix feats = oracle::random_features(rng, g.num_edges(), 3);
        const auto [aug, aug_feats] = add_virtual_self_loops(g, feats);

        std::vector<int> loops(static_cast<std::size_t>(n), 0);
        for (const auto& [i, j] : aug.edges) {
            if (i == j) loops[static_cast<std::size_t>(i)] += 1;
        }
        for (int v = 0; v < n; ++v) CHECK(loops[static_cast<std::size_t>(v)] == 1);
        CHECK(aug_feats.rows == aug.num_edges());

        const auto [again, again_feats] = add_virtual_self_loops(aug, aug_feats);
        CHECK(again.num_edges() == aug.num_edges());
        CHECK(again_feats.values == aug_feats.values);
    }
}

TEST_CASE("augmentation rejects mismatched feature rows") {
    const Graph g = build_graph(3, {{0, 1}});
    FeatureMatrix feats(2, 1);
    CHECK_THROWS_AS(add_virtual_self_loops(g, feats), StructuralError);
}
