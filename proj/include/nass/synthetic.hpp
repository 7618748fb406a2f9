#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nass/graph.hpp"

namespace nass {

/// Configuration for the synthetic corpus generator. Graph size is
/// measured in edges and density as 2|E| / (|V| (|V|-1)); the vertex
/// count is derived from the two.
struct SyntheticConfig {
    int count = 1;              ///< number of base graphs
    int avg_edges = 10;         ///< average size (edge count) of a base graph
    double density = 0.5;       ///< in (0, 1]
    int n_vertex_labels = 3;
    int n_edge_labels = 2;
    int mutations_per_clone = 0;
    int clones = 0;             ///< mutated copies emitted per base graph
    std::uint64_t rng_seed = 0;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n; // tiny modulo bias is irrelevant at these ranges
}

inline int rand_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

/// |V| solving density = 2E / (V (V-1)), rounded to the nearest integer.
inline int vertex_count_for(int edges, double density) {
    if (edges == 0) {
        return 1;
    }
    double v = (1.0 + std::sqrt(1.0 + 8.0 * edges / density)) / 2.0;
    return std::max(2, static_cast<int>(std::llround(v)));
}

inline Graph random_graph(int edges, double density, int n_vertex_labels, int n_edge_labels,
                          std::mt19937_64& rng) {
    Graph g;
    int n = vertex_count_for(edges, density);
    long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    if (edges > max_edges) {
        edges = static_cast<int>(max_edges); // rounding of |V| can undershoot slightly
    }
    for (int v = 0; v < n; ++v) {
        g.add_vertex(static_cast<Label>(rand_below(rng, static_cast<std::uint64_t>(n_vertex_labels))));
    }
    int placed = 0;
    while (placed < edges) {
        int u = rand_int(rng, 0, n - 1);
        int v = rand_int(rng, 0, n - 1);
        if (u == v || g.has_edge(u, v)) {
            continue;
        }
        g.add_edge(u, v, static_cast<Label>(rand_below(rng, static_cast<std::uint64_t>(n_edge_labels))));
        ++placed;
    }
    return g;
}

} // namespace detail

/// Applies n_ops random edit operations to a copy of the graph, each
/// drawn uniformly from the six edit kinds (vertex/edge insert, delete,
/// relabel). Draws that are inapplicable to the current graph, or that
/// would break the simple-graph invariants, are redrawn.
inline Graph mutate_graph(const Graph& base, int n_ops, int n_vertex_labels, int n_edge_labels,
                          std::mt19937_64& rng) {
    Graph g = base;
    for (int k = 0; k < n_ops; ++k) {
        bool applied = false;
        while (!applied) {
            switch (detail::rand_below(rng, 6)) {
            case 0: { // insert isolated vertex
                g.add_vertex(static_cast<Label>(
                    detail::rand_below(rng, static_cast<std::uint64_t>(n_vertex_labels))));
                applied = true;
                break;
            }
            case 1: { // delete isolated vertex
                std::vector<int> isolated;
                for (int v = 0; v < g.vertex_count(); ++v) {
                    if (g.degree(v) == 0) {
                        isolated.push_back(v);
                    }
                }
                if (isolated.empty()) {
                    break;
                }
                g.remove_isolated_vertex(
                    isolated[detail::rand_below(rng, isolated.size())]);
                applied = true;
                break;
            }
            case 2: { // relabel vertex
                if (g.vertex_count() == 0 || n_vertex_labels < 2) {
                    break;
                }
                int v = detail::rand_int(rng, 0, g.vertex_count() - 1);
                Label old = g.vertex_label(v);
                Label fresh = static_cast<Label>(
                    detail::rand_below(rng, static_cast<std::uint64_t>(n_vertex_labels - 1)));
                if (fresh >= old) {
                    ++fresh;
                }
                g.set_vertex_label(v, fresh);
                applied = true;
                break;
            }
            case 3: { // insert edge
                int n = g.vertex_count();
                long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
                if (n < 2 || g.edge_count() >= max_edges) {
                    break;
                }
                for (;;) {
                    int u = detail::rand_int(rng, 0, n - 1);
                    int v = detail::rand_int(rng, 0, n - 1);
                    if (u == v || g.has_edge(u, v)) {
                        continue;
                    }
                    g.add_edge(u, v, static_cast<Label>(detail::rand_below(
                                         rng, static_cast<std::uint64_t>(n_edge_labels))));
                    break;
                }
                applied = true;
                break;
            }
            case 4: { // delete edge
                if (g.edge_count() == 0) {
                    break;
                }
                auto es = g.edges();
                auto [u, v, l] = es[detail::rand_below(rng, es.size())];
                g.remove_edge(u, v);
                applied = true;
                break;
            }
            case 5: { // relabel edge
                if (g.edge_count() == 0 || n_edge_labels < 2) {
                    break;
                }
                auto es = g.edges();
                auto [u, v, old] = es[detail::rand_below(rng, es.size())];
                Label fresh = static_cast<Label>(
                    detail::rand_below(rng, static_cast<std::uint64_t>(n_edge_labels - 1)));
                if (fresh >= old) {
                    ++fresh;
                }
                g.set_edge_label(u, v, fresh);
                applied = true;
                break;
            }
            }
        }
    }
    return g;
}

/// Generates a deterministic synthetic database: `count` random base
/// graphs, each followed by `clones` copies mutated by
/// `mutations_per_clone` random edit operations.
inline GraphDatabase gen_synthetic(const SyntheticConfig& cfg) {
    if (cfg.count < 1) {
        throw ConfigError("count must be positive");
    }
    if (cfg.avg_edges < 1) {
        throw ConfigError("avg_edges must be positive");
    }
    if (!(cfg.density > 0.0) || cfg.density > 1.0) {
        throw ConfigError("density must be in (0, 1]");
    }
    if (cfg.n_vertex_labels < 1 || cfg.n_edge_labels < 1) {
        throw ConfigError("label alphabet sizes must be positive");
    }
    if (cfg.clones < 0 || cfg.mutations_per_clone < 0) {
        throw ConfigError("clones and mutations_per_clone must be non-negative");
    }

    GraphDatabase db;
    for (int i = 0; i < cfg.n_vertex_labels; ++i) {
        db.vertex_labels.intern(std::to_string(i));
    }
    for (int i = 0; i < cfg.n_edge_labels; ++i) {
        db.edge_labels.intern(std::to_string(i));
    }

    std::mt19937_64 rng(cfg.rng_seed);
    int lo = (cfg.avg_edges + 1) / 2;
    int hi = cfg.avg_edges + cfg.avg_edges / 2;
    for (int i = 0; i < cfg.count; ++i) {
        int edges = detail::rand_int(rng, lo, hi);
        Graph base = detail::random_graph(edges, cfg.density, cfg.n_vertex_labels,
                                          cfg.n_edge_labels, rng);
        base.id = static_cast<int>(db.graphs.size());
        db.graphs.push_back(base);
        for (int c = 0; c < cfg.clones; ++c) {
            Graph clone = mutate_graph(base, cfg.mutations_per_clone, cfg.n_vertex_labels,
                                       cfg.n_edge_labels, rng);
            clone.id = static_cast<int>(db.graphs.size());
            db.graphs.push_back(std::move(clone));
        }
    }
    return db;
}

} // namespace nass
