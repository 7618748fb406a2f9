#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "nass/brute_force.hpp"
#include "nass/index.hpp"
#include "nass/synthetic.hpp"
#include "oracles.hpp"

using namespace nass;

namespace {

GraphDatabase small_random_db(int count, std::uint64_t seed) {
    GraphDatabase db;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < count; ++i) {
        Graph g = oracles::random_graph(rng, 6, 3, 2);
        g.id = i;
        db.graphs.push_back(std::move(g));
    }
    return db;
}

void check_symmetry_and_self(const GedIndex& idx) {
    for (int i = 0; i < static_cast<int>(idx.graph_count()); ++i) {
        bool self = false;
        for (const IndexEntry& e : idx.entries(i)) {
            if (e.neighbor == static_cast<std::uint32_t>(i)) {
                self = true;
                REQUIRE(e.distance == 0);
                REQUIRE_FALSE(e.inexact);
            }
            bool mirrored = false;
            for (const IndexEntry& m : idx.entries(static_cast<int>(e.neighbor))) {
                if (m.neighbor == static_cast<std::uint32_t>(i) && m.distance == e.distance &&
                    m.inexact == e.inexact) {
                    mirrored = true;
                    break;
                }
            }
            REQUIRE(mirrored);
        }
        REQUIRE(self);
    }
}

} // namespace

TEST_CASE("index of a single graph holds only its self entry") {
    GraphDatabase db;
    Graph g;
    g.add_vertex(0);
    db.graphs.push_back(g);
    BuildConfig cfg;
    cfg.tau_index = 3;
    GedIndex idx = build_index(db, cfg);
    REQUIRE(idx.graph_count() == 1);
    REQUIRE(idx.entries(0).size() == 1);
    REQUIRE(idx.entries(0)[0] == IndexEntry{0, 0, false});
}

TEST_CASE("two identical graphs index each other at distance zero") {
    GraphDatabase db;
    Graph g;
    g.add_vertex(0);
    g.add_vertex(1);
    g.add_edge(0, 1, 0);
    db.graphs.push_back(g);
    g.id = 1;
    db.graphs.push_back(g);
    BuildConfig cfg;
    cfg.tau_index = 1;
    GedIndex idx = build_index(db, cfg);
    for (int i = 0; i < 2; ++i) {
        REQUIRE(idx.entries(i).size() == 2);
        REQUIRE(idx.entries(i)[0].distance == 0);
        REQUIRE(idx.entries(i)[1].distance == 0);
    }
    REQUIRE(idx.neighbors(0, 0, true) == std::vector<int>({0, 1}));
}

TEST_CASE("exact entries match the oracle and omissions are beyond tau_index") {
    GraphDatabase db = small_random_db(30, 2024);
    BuildConfig cfg;
    cfg.tau_index = 6;
    cfg.n_workers = 2;
    GedIndex idx = build_index(db, cfg);
    check_symmetry_and_self(idx);
    REQUIRE(idx.inexact_count() == 0); // unlimited budget

    const int n = static_cast<int>(db.graphs.size());
    for (int i = 0; i < n; ++i) {
        std::vector<int> stored(static_cast<std::size_t>(n), -1);
        for (const IndexEntry& e : idx.entries(i)) {
            stored[e.neighbor] = e.distance;
        }
        for (int j = 0; j < n; ++j) {
            int truth = i == j ? 0 : brute_force_ged(db.graphs[i], db.graphs[j]);
            if (stored[static_cast<std::size_t>(j)] >= 0) {
                REQUIRE(stored[static_cast<std::size_t>(j)] == truth);
            } else {
                REQUIRE(truth > cfg.tau_index);
            }
        }
    }
}

TEST_CASE("index content is independent of the worker count") {
    GraphDatabase db = small_random_db(25, 4711);
    BuildConfig one;
    one.tau_index = 5;
    one.n_workers = 1;
    BuildConfig four = one;
    four.n_workers = 4;
    REQUIRE(build_index(db, one) == build_index(db, four));
}

TEST_CASE("a starving node budget still yields valid lower bounds") {
    GraphDatabase db = small_random_db(20, 99);
    BuildConfig cfg;
    cfg.tau_index = 6;
    cfg.n_workers = 3;
    cfg.node_budget = 1;
    GedIndex idx = build_index(db, cfg);
    check_symmetry_and_self(idx);
    for (int i = 0; i < static_cast<int>(db.graphs.size()); ++i) {
        for (const IndexEntry& e : idx.entries(i)) {
            int truth = static_cast<int>(e.neighbor) == i
                            ? 0
                            : brute_force_ged(db.graphs[i], db.graphs[e.neighbor]);
            if (e.inexact) {
                REQUIRE(static_cast<int>(e.distance) <= truth);
            } else {
                REQUIRE(static_cast<int>(e.distance) == truth);
            }
        }
    }
}

TEST_CASE("build configuration is validated") {
    GraphDatabase db;
    BuildConfig cfg;
    cfg.tau_index = 0;
    REQUIRE_THROWS_AS(build_index(db, cfg), std::invalid_argument);
    cfg.tau_index = 128;
    REQUIRE_THROWS_AS(build_index(db, cfg), std::invalid_argument);
    cfg.tau_index = 1;
    cfg.n_workers = 0;
    REQUIRE_THROWS_AS(build_index(db, cfg), std::invalid_argument);
    cfg.n_workers = 1;
    cfg.node_budget = 0;
    REQUIRE_THROWS_AS(build_index(db, cfg), std::invalid_argument);
}

TEST_CASE("neighborhood retrieval on the worked mock index") {
    // graphs g1..g9 from the running example, as ids 0..8
    GedIndex idx(4, 9);
    for (int i = 0; i < 9; ++i) {
        idx.add_pair(i, i, 0);
    }
    idx.add_pair(1, 7, 1);
    idx.add_pair(1, 0, 3);
    idx.add_pair(1, 3, 2);
    idx.add_pair(1, 5, 3);
    idx.add_pair(3, 0, 4);
    idx.add_pair(3, 7, 4);
    idx.finalize();

    REQUIRE(idx.neighbors(1, 3, false) == std::vector<int>({0, 1, 3, 5, 7}));
    REQUIRE(idx.neighbors(1, 1, true) == std::vector<int>({1, 7}));
    REQUIRE(idx.neighbors(3, 0, true) == std::vector<int>({3}));
    REQUIRE(idx.neighbors(3, 4, false) == std::vector<int>({0, 1, 3, 7}));
    REQUIRE_THROWS_AS(idx.neighbors(1, 5, false), std::out_of_range);
    REQUIRE_THROWS_AS(idx.neighbors(1, -1, false), std::out_of_range);
}

TEST_CASE("inexact entries are excluded from exact retrieval") {
    GedIndex idx(6, 2);
    idx.add_pair(0, 0, 0);
    idx.add_pair(1, 1, 0);
    idx.add_pair(0, 1, 2, /*inexact=*/true);
    idx.finalize();
    REQUIRE(idx.neighbors(0, 6, false) == std::vector<int>({0, 1}));
    REQUIRE(idx.neighbors(0, 6, true) == std::vector<int>({0}));
}

TEST_CASE("index persistence round-trips losslessly") {
    GraphDatabase db = small_random_db(15, 31337);
    BuildConfig cfg;
    cfg.tau_index = 5;
    GedIndex idx = build_index(db, cfg);

    std::ostringstream out;
    idx.save(out);
    std::string bytes = out.str();

    std::istringstream in(bytes);
    GedIndex loaded = GedIndex::load(in);
    REQUIRE(loaded == idx);

    std::ostringstream out2;
    loaded.save(out2);
    REQUIRE(out2.str() == bytes);

    SECTION("empty database round-trips") {
        GedIndex empty(3, 0);
        std::ostringstream eo;
        empty.save(eo);
        std::istringstream ei(eo.str());
        REQUIRE(GedIndex::load(ei) == empty);
    }

    SECTION("corrupted magic is rejected") {
        std::string bad = bytes;
        bad[0] = 'X';
        std::istringstream bi(bad);
        REQUIRE_THROWS_AS(GedIndex::load(bi), IndexIoError);
    }

    SECTION("truncation is rejected") {
        std::string bad = bytes.substr(0, bytes.size() / 2);
        std::istringstream bi(bad);
        REQUIRE_THROWS_AS(GedIndex::load(bi), IndexIoError);
    }

    SECTION("bit corruption fails the checksum") {
        std::string bad = bytes;
        bad[bytes.size() / 2] = static_cast<char>(bad[bytes.size() / 2] ^ 0x40);
        std::istringstream bi(bad);
        REQUIRE_THROWS_AS(GedIndex::load(bi), IndexIoError);
    }
}
