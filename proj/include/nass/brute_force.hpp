#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "nass/graph.hpp"

namespace nass {

/// Ceiling on the padded vertex count accepted by brute_force_ged.
inline constexpr int kBruteForceLimit = 8;

/// Exact GED by exhaustive enumeration: pads the smaller graph with
/// blank vertices, then minimizes the edit cost over every vertex
/// bijection. Independent of the search engine; intended as a test and
/// verification oracle. Refuses graphs with more than kBruteForceLimit
/// vertices after padding.
inline int brute_force_ged(const Graph& a, const Graph& b) {
    const int n = std::max(a.vertex_count(), b.vertex_count());
    if (n > kBruteForceLimit) {
        throw std::invalid_argument("brute_force_ged: graph too large after padding");
    }

    auto label_of = [](const Graph& g, int v) {
        return v < g.vertex_count() ? g.vertex_label(v) : kLambda;
    };
    auto edge_of = [](const Graph& g, int u, int v) {
        return (u < g.vertex_count() && v < g.vertex_count()) ? g.edge_label(u, v) : kLambda;
    };

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    int best = -1;
    do {
        int cost = 0;
        for (int u = 0; u < n; ++u) {
            int v = perm[static_cast<std::size_t>(u)];
            if (label_of(a, u) != label_of(b, v)) {
                ++cost;
            }
        }
        for (int u1 = 0; u1 < n && (best < 0 || cost < best); ++u1) {
            for (int u2 = u1 + 1; u2 < n; ++u2) {
                if (edge_of(a, u1, u2) !=
                    edge_of(b, perm[static_cast<std::size_t>(u1)], perm[static_cast<std::size_t>(u2)])) {
                    ++cost;
                }
            }
        }
        if (best < 0 || cost < best) {
            best = cost;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best < 0 ? 0 : best;
}

} // namespace nass
