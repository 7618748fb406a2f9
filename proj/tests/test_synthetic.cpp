#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "nass/brute_force.hpp"
#include "nass/graph.hpp"
#include "nass/synthetic.hpp"

using namespace nass;

TEST_CASE("degenerate generator configurations") {
    SyntheticConfig cfg;
    cfg.count = 1;
    cfg.clones = 0;
    REQUIRE(gen_synthetic(cfg).graphs.size() == 1);

    cfg.clones = 3;
    cfg.mutations_per_clone = 0;
    GraphDatabase db = gen_synthetic(cfg);
    REQUIRE(db.graphs.size() == 4);
    for (int c = 1; c <= 3; ++c) {
        REQUIRE(db.graphs[static_cast<std::size_t>(c)] == db.graphs[0]); // unmutated clone
    }
}

TEST_CASE("generator rejects impossible configurations") {
    SyntheticConfig cfg;
    cfg.count = 0;
    REQUIRE_THROWS_AS(gen_synthetic(cfg), ConfigError);
    cfg.count = 1;
    cfg.density = 0.0;
    REQUIRE_THROWS_AS(gen_synthetic(cfg), ConfigError);
    cfg.density = 1.5;
    REQUIRE_THROWS_AS(gen_synthetic(cfg), ConfigError);
    cfg.density = 0.5;
    cfg.n_edge_labels = 0;
    REQUIRE_THROWS_AS(gen_synthetic(cfg), ConfigError);
    cfg.n_edge_labels = 2;
    cfg.avg_edges = 0;
    REQUIRE_THROWS_AS(gen_synthetic(cfg), ConfigError);
}

TEST_CASE("generation is deterministic under the seed") {
    SyntheticConfig cfg;
    cfg.count = 6;
    cfg.clones = 2;
    cfg.mutations_per_clone = 4;
    cfg.avg_edges = 8;
    cfg.density = 0.4;
    cfg.rng_seed = 77;
    std::ostringstream a;
    std::ostringstream b;
    write_db(gen_synthetic(cfg), a);
    write_db(gen_synthetic(cfg), b);
    REQUIRE(a.str() == b.str());

    cfg.rng_seed = 78;
    std::ostringstream c;
    write_db(gen_synthetic(cfg), c);
    REQUIRE(a.str() != c.str());
}

TEST_CASE("graph ids are dense in emission order") {
    SyntheticConfig cfg;
    cfg.count = 4;
    cfg.clones = 3;
    GraphDatabase db = gen_synthetic(cfg);
    for (std::size_t i = 0; i < db.graphs.size(); ++i) {
        REQUIRE(db.graphs[i].id == static_cast<int>(i));
    }
}

TEST_CASE("clone distance is bounded by the mutation count") {
    SyntheticConfig cfg;
    cfg.count = 8;
    cfg.clones = 2;
    cfg.mutations_per_clone = 2;
    cfg.avg_edges = 4;
    cfg.density = 0.6;
    cfg.n_vertex_labels = 3;
    cfg.n_edge_labels = 2;
    cfg.rng_seed = 5;
    GraphDatabase db = gen_synthetic(cfg);
    for (int b = 0; b < cfg.count; ++b) {
        const Graph& base = db.graphs[static_cast<std::size_t>(b * (1 + cfg.clones))];
        for (int c = 1; c <= cfg.clones; ++c) {
            const Graph& clone = db.graphs[static_cast<std::size_t>(b * (1 + cfg.clones) + c)];
            if (std::max(base.vertex_count(), clone.vertex_count()) > kBruteForceLimit) {
                continue;
            }
            REQUIRE(brute_force_ged(base, clone) <= cfg.mutations_per_clone);
        }
    }
}

TEST_CASE("mutation draws keep graphs simple") {
    std::mt19937_64 rng(9);
    Graph g;
    g.add_vertex(0);
    for (int t = 0; t < 60; ++t) {
        g = mutate_graph(g, 3, 2, 1, rng); // one edge label: edge relabels are inapplicable
        for (const auto& [u, v, l] : g.edges()) {
            REQUIRE(u != v);
            REQUIRE(l == 0);
        }
    }
}
