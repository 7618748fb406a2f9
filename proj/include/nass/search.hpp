#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "nass/ged.hpp"
#include "nass/graph.hpp"
#include "nass/index.hpp"

namespace nass {

struct Query {
    Graph graph;
    int tau = 0;
};

struct Candidate {
    int id = 0;
    int lb = 0;

    bool operator==(const Candidate&) const = default;
};

/// Data graphs passing the label filter, sorted ascending by the label
/// bound, ties by id.
inline std::vector<Candidate> initial_candidates(const GraphDatabase& db, const Graph& q,
                                                 int tau) {
    std::vector<Candidate> out;
    LabelMultiset qv = q.vertex_label_multiset();
    LabelMultiset qe = q.edge_label_multiset();
    for (const Graph& g : db.graphs) {
        int lb = gamma(qv, g.vertex_label_multiset()) + gamma(qe, g.edge_label_multiset());
        if (lb <= tau) {
            out.push_back(Candidate{g.id, lb});
        }
    }
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        return a.lb != b.lb ? a.lb < b.lb : a.id < b.id;
    });
    return out;
}

struct QueryStats {
    std::uint64_t candidates_verified = 0; ///< verifications whose search root survived
    std::uint64_t regenerations = 0;
    std::uint64_t mappings_pushed = 0;
    std::uint64_t results_from_index = 0;  ///< results collected without verification
    std::uint64_t results_verified = 0;
};

struct SearchResult {
    std::vector<int> ids; ///< sorted
    QueryStats stats;
};

/// Pluggable GED verifier so searches can run against mock oracles in
/// tests; the default runs the search engine.
using Verifier = std::function<GedResult(const Graph& q, const Graph& g, int tau)>;

inline Verifier default_verifier(SearchOptions opts = {}) {
    return [opts](const Graph& q, const Graph& g, int tau) { return nass_ged(q, g, tau, opts); };
}

/// Threshold similarity search with candidate regeneration: scans the
/// label-filtered candidates in bound order, and on each verified
/// result r with distance delta collects the indexed graphs within
/// tau - delta as results outright and narrows the remaining candidates
/// to the indexed graphs within tau + delta. When tau + delta exceeds
/// the index threshold the result is collected alone and the scan
/// continues unchanged.
inline SearchResult nass_search(const GraphDatabase& db, const GedIndex& idx, const Query& query,
                                Verifier verify = {}) {
    if (!verify) {
        verify = default_verifier();
    }
    const int n = static_cast<int>(db.graphs.size());
    const int tau = query.tau;
    SearchResult res;
    std::vector<char> verified(static_cast<std::size_t>(n), 0);
    std::vector<char> reported(static_cast<std::size_t>(n), 0);
    std::vector<Candidate> cur = initial_candidates(db, query.graph, tau);
    std::size_t pos = 0;
    while (pos < cur.size()) {
        const Candidate c = cur[pos];
        ++pos;
        GedResult r = verify(query.graph, db.graphs[static_cast<std::size_t>(c.id)], tau);
        verified[static_cast<std::size_t>(c.id)] = 1;
        res.stats.mappings_pushed += r.stats.mappings_pushed;
        if (r.stats.root_survived) {
            ++res.stats.candidates_verified;
        }
        if (r.distance > tau) {
            continue;
        }
        const int delta = r.distance;
        reported[static_cast<std::size_t>(c.id)] = 1;
        res.ids.push_back(c.id);
        ++res.stats.results_verified;
        if (tau + delta <= idx.tau_index()) {
            // Exact near neighbors of the result are results of the query;
            // the wider (lower-bound) neighborhood replaces the candidates.
            std::vector<int> sure = idx.neighbors(c.id, tau - delta, /*exact_only=*/true);
            std::vector<int> wide = idx.neighbors(c.id, tau + delta, /*exact_only=*/false);
            for (int g : sure) {
                if (!reported[static_cast<std::size_t>(g)]) {
                    reported[static_cast<std::size_t>(g)] = 1;
                    res.ids.push_back(g);
                    ++res.stats.results_from_index;
                }
            }
            std::vector<char> keep(static_cast<std::size_t>(n), 0);
            for (int g : wide) {
                keep[static_cast<std::size_t>(g)] = 1;
            }
            for (int g : sure) {
                keep[static_cast<std::size_t>(g)] = 0;
            }
            std::vector<Candidate> next;
            for (std::size_t k = pos; k < cur.size(); ++k) {
                if (!verified[static_cast<std::size_t>(cur[k].id)] &&
                    keep[static_cast<std::size_t>(cur[k].id)]) {
                    next.push_back(cur[k]);
                }
            }
            cur = std::move(next);
            pos = 0;
            ++res.stats.regenerations;
        }
    }
    std::sort(res.ids.begin(), res.ids.end());
    return res;
}

/// Index-free baseline: verifies every label-filtered candidate.
inline SearchResult linear_scan(const GraphDatabase& db, const Query& query, Verifier verify = {}) {
    if (!verify) {
        verify = default_verifier();
    }
    SearchResult res;
    for (const Candidate& c : initial_candidates(db, query.graph, query.tau)) {
        GedResult r = verify(query.graph, db.graphs[static_cast<std::size_t>(c.id)], query.tau);
        res.stats.mappings_pushed += r.stats.mappings_pushed;
        if (r.stats.root_survived) {
            ++res.stats.candidates_verified;
        }
        if (r.distance <= query.tau) {
            res.ids.push_back(c.id);
            ++res.stats.results_verified;
        }
    }
    std::sort(res.ids.begin(), res.ids.end());
    return res;
}

} // namespace nass
