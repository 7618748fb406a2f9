#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "nass/graph.hpp"

namespace nass {

/// Worst-case prevention parameter: a partition never grows past this
/// many vertices, which keeps each isomorphism test tiny.
inline constexpr int kPartitionAlpha = 6;

/// A connected induced fragment of the partitioned graph. Vertices are
/// listed in growth order.
struct Partition {
    std::vector<int> vertices;

    bool operator==(const Partition&) const = default;
};

/// Progress of an online partitioning run. A run stopped early (because
/// enough non-isomorphic partitions were found) can be resumed later
/// with a larger stop target and yields the same partitions it would
/// have produced in a single uninterrupted pass.
struct PartitionState {
    std::vector<Partition> partitions;   ///< emitted so far, in order
    std::vector<char> consumed;          ///< per vertex of the partitioned graph
    int non_isomorphic = 0;
    int stop_target = 0;                 ///< stop_at of the last run
    bool complete = false;               ///< all vertices consumed

    bool operator==(const PartitionState&) const = default;
};

/// True iff there is an injective label- and edge-preserving embedding
/// of the fragment `p` of `from` into `host`. Non-edges of the fragment
/// are unconstrained (plain subgraph isomorphism, not induced).
inline bool subgraph_iso(const Graph& from, const Partition& p, const Graph& host) {
    const int k = static_cast<int>(p.vertices.size());
    if (k == 0) {
        return true;
    }

    // Internal fragment edges, precomputed per pattern position against
    // earlier positions only; the growth order keeps prefixes connected.
    std::vector<std::vector<std::pair<int, Label>>> back_edges(static_cast<std::size_t>(k));
    std::vector<int> pattern_degree(static_cast<std::size_t>(k), 0);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < a; ++b) {
            Label l = from.edge_label(p.vertices[static_cast<std::size_t>(a)],
                                      p.vertices[static_cast<std::size_t>(b)]);
            if (l != kLambda) {
                back_edges[static_cast<std::size_t>(a)].push_back({b, l});
                ++pattern_degree[static_cast<std::size_t>(a)];
                ++pattern_degree[static_cast<std::size_t>(b)];
            }
        }
    }

    std::vector<int> image(static_cast<std::size_t>(k), -1);
    std::vector<char> used(static_cast<std::size_t>(host.vertex_count()), 0);

    auto feasible = [&](int pos, int hv) {
        if (host.vertex_label(hv) != from.vertex_label(p.vertices[static_cast<std::size_t>(pos)])) {
            return false;
        }
        if (host.degree(hv) < pattern_degree[static_cast<std::size_t>(pos)]) {
            return false;
        }
        for (const auto& [b, l] : back_edges[static_cast<std::size_t>(pos)]) {
            if (host.edge_label(hv, image[static_cast<std::size_t>(b)]) != l) {
                return false;
            }
        }
        return true;
    };

    // Plain backtracking; fragments have at most kPartitionAlpha vertices.
    int pos = 0;
    std::vector<int> cursor(static_cast<std::size_t>(k), 0);
    while (true) {
        int hv = cursor[static_cast<std::size_t>(pos)]++;
        if (hv >= host.vertex_count()) {
            cursor[static_cast<std::size_t>(pos)] = 0;
            if (--pos < 0) {
                return false;
            }
            used[static_cast<std::size_t>(image[static_cast<std::size_t>(pos)])] = 0;
            image[static_cast<std::size_t>(pos)] = -1;
            continue;
        }
        if (used[static_cast<std::size_t>(hv)] || !feasible(pos, hv)) {
            continue;
        }
        image[static_cast<std::size_t>(pos)] = hv;
        used[static_cast<std::size_t>(hv)] = 1;
        if (++pos == k) {
            return true;
        }
    }
}

/// Online partitioning of `g2_res` against `g1_res`. Each partition is
/// grown one vertex at a time (seeded at the lowest-id unconsumed
/// vertex, extended by the lowest-id unconsumed neighbor) and closed
/// when it first fails the isomorphism test, reaches `alpha` vertices,
/// or exhausts its connected component. The run halts as soon as the
/// non-isomorphic count exceeds `stop_at`; pass the returned state back
/// in to resume with a larger target. Blank (kLambda) vertices are
/// never partitioned.
inline PartitionState partition_graph(const Graph& g2_res, const Graph& g1_res, int stop_at,
                                      const PartitionState* resume = nullptr,
                                      int alpha = kPartitionAlpha) {
    PartitionState st;
    if (resume != nullptr) {
        st = *resume;
    } else {
        st.consumed.assign(static_cast<std::size_t>(g2_res.vertex_count()), 0);
        for (int v = 0; v < g2_res.vertex_count(); ++v) {
            if (g2_res.vertex_label(v) == kLambda) {
                st.consumed[static_cast<std::size_t>(v)] = 1;
            }
        }
    }
    st.stop_target = stop_at;
    if (st.complete) {
        return st;
    }

    auto next_unconsumed = [&](int start) {
        int v = start;
        while (v < g2_res.vertex_count() && st.consumed[static_cast<std::size_t>(v)]) {
            ++v;
        }
        return v;
    };

    while (st.non_isomorphic <= stop_at) {
        int seed = next_unconsumed(0);
        if (seed >= g2_res.vertex_count()) {
            st.complete = true;
            break;
        }
        Partition part;
        part.vertices.push_back(seed);
        st.consumed[static_cast<std::size_t>(seed)] = 1;
        bool failed = !subgraph_iso(g2_res, part, g1_res);
        while (!failed && static_cast<int>(part.vertices.size()) < alpha) {
            int best = -1;
            for (int u : part.vertices) {
                for (const auto& [w, l] : g2_res.neighbors(u)) {
                    if (!st.consumed[static_cast<std::size_t>(w)] && (best < 0 || w < best)) {
                        best = w;
                    }
                }
            }
            if (best < 0) {
                break; // component exhausted; partition stays isomorphic
            }
            part.vertices.push_back(best);
            st.consumed[static_cast<std::size_t>(best)] = 1;
            failed = !subgraph_iso(g2_res, part, g1_res);
        }
        st.partitions.push_back(std::move(part));
        if (failed) {
            ++st.non_isomorphic;
        }
    }
    return st;
}

/// Partition-based GED lower bound: the number of partitions of g2_res
/// that do not embed into g1_res.
inline int partition_lb(const PartitionState& st) { return st.non_isomorphic; }

/// Vertex order used by the GED search tree: the partition growth order
/// over g2, with partitions closed at `alpha` vertices or component
/// boundaries. Deterministic; the result is a permutation of V(g2).
inline std::vector<int> derive_vertex_order(const Graph& g2, int alpha = kPartitionAlpha) {
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(g2.vertex_count()));
    std::vector<char> consumed(static_cast<std::size_t>(g2.vertex_count()), 0);
    int remaining = g2.vertex_count();
    while (remaining > 0) {
        int seed = 0;
        while (consumed[static_cast<std::size_t>(seed)]) {
            ++seed;
        }
        std::vector<int> part{seed};
        consumed[static_cast<std::size_t>(seed)] = 1;
        order.push_back(seed);
        --remaining;
        while (static_cast<int>(part.size()) < alpha) {
            int best = -1;
            for (int u : part) {
                for (const auto& [w, l] : g2.neighbors(u)) {
                    if (!consumed[static_cast<std::size_t>(w)] && (best < 0 || w < best)) {
                        best = w;
                    }
                }
            }
            if (best < 0) {
                break;
            }
            part.push_back(best);
            consumed[static_cast<std::size_t>(best)] = 1;
            order.push_back(best);
            --remaining;
        }
    }
    return order;
}

} // namespace nass
