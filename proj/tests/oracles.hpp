#pragma once

// Test-only oracles and generators. Everything here is independent of
// the search-engine code paths it is used to check: costs are evaluated
// from definitions by exhaustive enumeration.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "nass/ged.hpp"
#include "nass/graph.hpp"

namespace oracles {

inline nass::Graph random_graph(std::mt19937_64& rng, int max_vertices, int n_vertex_labels,
                                int n_edge_labels, int edge_percent = 40) {
    nass::Graph g;
    int n = static_cast<int>(rng() % static_cast<std::uint64_t>(max_vertices + 1));
    for (int i = 0; i < n; ++i) {
        g.add_vertex(static_cast<nass::Label>(rng() % static_cast<std::uint64_t>(n_vertex_labels)));
    }
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (static_cast<int>(rng() % 100) < edge_percent) {
                g.add_edge(u, v,
                           static_cast<nass::Label>(rng() % static_cast<std::uint64_t>(n_edge_labels)));
            }
        }
    }
    return g;
}

/// Minimum-cost bijection between two branch multisets under the
/// 0 / 1/2 / 1 compact distance, by trying every permutation. Returns
/// half units. Only for small inputs.
inline int assignment_branch_lb_halves(const std::vector<nass::Branch>& a,
                                       const std::vector<nass::Branch>& b) {
    const int n = static_cast<int>(std::max(a.size(), b.size()));
    auto branch_at = [n](const std::vector<nass::Branch>& side, int i) {
        return i < static_cast<int>(side.size()) ? side[static_cast<std::size_t>(i)]
                                                 : nass::Branch{}; // blank branch
    };
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    int best = -1;
    do {
        int halves = 0;
        for (int i = 0; i < n; ++i) {
            nass::Branch x = branch_at(a, i);
            nass::Branch y = branch_at(b, perm[static_cast<std::size_t>(i)]);
            if (x.vertex_label != y.vertex_label) {
                halves += 2;
            } else if (x.edge_labels != y.edge_labels) {
                halves += 1;
            }
        }
        if (best < 0 || halves < best) {
            best = halves;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best < 0 ? 0 : best;
}

/// Exhaustive injective label- and edge-preserving embedding test.
inline bool embedding_exists(const nass::Graph& from, const std::vector<int>& pattern,
                             const nass::Graph& host) {
    const int k = static_cast<int>(pattern.size());
    std::vector<int> image(static_cast<std::size_t>(k), -1);
    std::vector<char> used(static_cast<std::size_t>(host.vertex_count()), 0);
    auto rec = [&](auto&& self, int pos) -> bool {
        if (pos == k) {
            return true;
        }
        int pv = pattern[static_cast<std::size_t>(pos)];
        for (int hv = 0; hv < host.vertex_count(); ++hv) {
            if (used[static_cast<std::size_t>(hv)] ||
                host.vertex_label(hv) != from.vertex_label(pv)) {
                continue;
            }
            bool ok = true;
            for (int q = 0; q < pos && ok; ++q) {
                nass::Label l = from.edge_label(pv, pattern[static_cast<std::size_t>(q)]);
                if (l != nass::kLambda &&
                    host.edge_label(hv, image[static_cast<std::size_t>(q)]) != l) {
                    ok = false;
                }
            }
            if (!ok) {
                continue;
            }
            image[static_cast<std::size_t>(pos)] = hv;
            used[static_cast<std::size_t>(hv)] = 1;
            if (self(self, pos + 1)) {
                return true;
            }
            used[static_cast<std::size_t>(hv)] = 0;
            image[static_cast<std::size_t>(pos)] = -1;
        }
        return false;
    };
    return rec(rec, 0);
}

} // namespace oracles
