#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nass/graph.hpp"
#include "nass/partition.hpp"

namespace nass {

/// Pads the smaller graph with blank vertices until both graphs have
/// the same vertex count. Blank vertices carry kLambda and no edges.
inline std::pair<Graph, Graph> pad_graphs(const Graph& g1, const Graph& g2) {
    Graph a = g1;
    Graph b = g2;
    const int n = std::max(a.vertex_count(), b.vertex_count());
    while (a.vertex_count() < n) {
        a.add_vertex(kLambda);
    }
    while (b.vertex_count() < n) {
        b.add_vertex(kLambda);
    }
    return {std::move(a), std::move(b)};
}

/// Set of mapped non-blank g1 vertices. One or two inline words cover
/// graphs up to 128 vertices; larger graphs spill to a heap vector.
class VertexBitmap {
public:
    VertexBitmap() = default;

    explicit VertexBitmap(int nbits) : nbits_(nbits) {
        if (nbits_ > 128) {
            ext_.assign(static_cast<std::size_t>((nbits_ + 63) / 64), 0);
        }
    }

    void set(int i) { word(i / 64) |= std::uint64_t{1} << (i % 64); }

    bool test(int i) const { return (word(i / 64) >> (i % 64)) & 1u; }

    int count() const {
        int c = 0;
        for (int k = 0; k < word_count(); ++k) {
            c += std::popcount(word(k));
        }
        return c;
    }

    friend bool operator==(const VertexBitmap& a, const VertexBitmap& b) {
        return a.inline_ == b.inline_ && a.ext_ == b.ext_;
    }

    friend bool operator<(const VertexBitmap& a, const VertexBitmap& b) {
        if (a.inline_ != b.inline_) {
            return a.inline_ < b.inline_;
        }
        return a.ext_ < b.ext_;
    }

private:
    int word_count() const { return ext_.empty() ? 2 : static_cast<int>(ext_.size()); }
    std::uint64_t word(int k) const { return ext_.empty() ? inline_[static_cast<std::size_t>(k)] : ext_[static_cast<std::size_t>(k)]; }
    std::uint64_t& word(int k) { return ext_.empty() ? inline_[static_cast<std::size_t>(k)] : ext_[static_cast<std::size_t>(k)]; }

    std::array<std::uint64_t, 2> inline_{};
    std::vector<std::uint64_t> ext_;
    int nbits_ = 0;
};

/// A node of the GED search tree: an ordered partial vertex mapping
/// (one g1 vertex per consumed position of the g2 vertex order), its
/// accumulated edit cost, and the mapped-vertex key used by the bound
/// cache. Blank copies are interchangeable, so only their count is
/// tracked.
struct MappingNode {
    std::vector<int> assigned;   ///< g1 vertex mapped at each level
    int edit_cost = 0;
    VertexBitmap bitmap;         ///< mapped non-blank g1 vertices
    int n_eps = 0;               ///< mapped blank copies
    int lb = 0;                  ///< cached lower bound; queue priority

    int depth() const { return static_cast<int>(assigned.size()); }
};

/// Number of search-tree nodes that share one node's unmapped
/// subgraphs: |m|! / n_eps!. Diagnostic for cache sizing and tests.
inline std::uint64_t shared_residual_mappings(int mapping_size, int n_eps) {
    if (mapping_size < 0 || n_eps < 0 || n_eps > mapping_size || mapping_size > 20) {
        throw std::invalid_argument("shared_residual_mappings: out of supported range");
    }
    std::uint64_t r = 1;
    for (int i = n_eps + 1; i <= mapping_size; ++i) {
        r *= static_cast<std::uint64_t>(i);
    }
    return r;
}

/// Edit cost of parent extended by one pair: the label substitution for
/// the new pair plus the edge differences against every earlier pair.
inline int extend_edit_cost(const MappingNode& parent, int u, int v, const Graph& g1,
                            const Graph& g2, const std::vector<int>& order) {
    int cost = parent.edit_cost;
    if (g1.vertex_label(u) != g2.vertex_label(v)) {
        ++cost;
    }
    for (int k = 0; k < parent.depth(); ++k) {
        int pu = parent.assigned[static_cast<std::size_t>(k)];
        int pv = order[static_cast<std::size_t>(k)];
        if (g1.edge_label(u, pu) != g2.edge_label(v, pv)) {
            ++cost;
        }
    }
    return cost;
}

/// A vertex label together with the multiset of its incident edge
/// labels inside the unmapped subgraph.
struct Branch {
    Label vertex_label = kLambda;
    std::vector<Label> edge_labels; // sorted

    auto operator<=>(const Branch&) const = default;
};

/// Sorted multiset of branches, kept sorted across incremental removals
/// so the assignment bound below stays a linear merge.
class BranchMultiset {
public:
    void insert(Branch b) {
        items_.insert(std::upper_bound(items_.begin(), items_.end(), b), std::move(b));
    }

    void remove(const Branch& b) {
        auto it = std::lower_bound(items_.begin(), items_.end(), b);
        if (it == items_.end() || *it != b) {
            throw std::logic_error("BranchMultiset::remove: branch not present");
        }
        items_.erase(it);
    }

    int size() const { return static_cast<int>(items_.size()); }
    const std::vector<Branch>& items() const { return items_; }

    bool operator==(const BranchMultiset&) const = default;

    /// Multiset intersection sizes: on whole branches and on vertex
    /// labels alone.
    static void match_stats(const BranchMultiset& a, const BranchMultiset& b, int& exact,
                            int& label_common) {
        exact = 0;
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < a.items_.size() && j < b.items_.size()) {
            if (a.items_[i] < b.items_[j]) {
                ++i;
            } else if (b.items_[j] < a.items_[i]) {
                ++j;
            } else {
                ++exact;
                ++i;
                ++j;
            }
        }
        label_common = 0;
        i = j = 0;
        while (i < a.items_.size() && j < b.items_.size()) {
            if (a.items_[i].vertex_label < b.items_[j].vertex_label) {
                ++i;
            } else if (b.items_[j].vertex_label < a.items_[i].vertex_label) {
                ++j;
            } else {
                ++label_common;
                ++i;
                ++j;
            }
        }
    }

private:
    std::vector<Branch> items_;
};

/// Compact branch-based lower bound in half units. Matching a branch
/// exactly costs 0, matching it to an equal-labeled branch with a
/// different edge-label set costs 1/2, anything else (including blank
/// padding) costs 1; the optimum keeps every exact match, so the value
/// reduces to counting the two intersection sizes.
inline int compact_branch_lb_halves(const BranchMultiset& a, const BranchMultiset& b) {
    int exact = 0;
    int label_common = 0;
    BranchMultiset::match_stats(a, b, exact, label_common);
    return 2 * std::max(a.size(), b.size()) - label_common - exact;
}

/// Rounds a half-unit bound up to a whole number of edit operations.
inline int ceil_halves(int halves) { return (halves + 1) / 2; }

/// Residual bookkeeping for one partial mapping: label multisets of the
/// unmapped subgraphs, per-vertex residual edge-label sets, the sorted
/// branch multisets, and per-pair bridge-label multisets. Maintained
/// incrementally per expansion; from_scratch is the reference
/// construction.
struct UnmappedState {
    std::vector<char> residual1, residual2;
    LabelMultiset res_vlabels1, res_vlabels2;
    LabelMultiset res_elabels1, res_elabels2;
    std::vector<LabelMultiset> es1, es2;          // per-vertex residual edge labels
    BranchMultiset branches1, branches2;
    std::vector<LabelMultiset> bridges1, bridges2; // one per mapping pair
    std::vector<int> pair_gamma;
    int bridge_sum = 0;
    std::vector<int> pair_of1, pair_of2;           // vertex -> mapping position

    bool operator==(const UnmappedState&) const = default;

    static UnmappedState from_scratch(const Graph& g1, const Graph& g2,
                                      const std::vector<int>& order, const MappingNode& node) {
        UnmappedState s;
        const int n = g1.vertex_count();
        s.residual1.assign(static_cast<std::size_t>(n), 1);
        s.residual2.assign(static_cast<std::size_t>(n), 1);
        s.pair_of1.assign(static_cast<std::size_t>(n), -1);
        s.pair_of2.assign(static_cast<std::size_t>(n), -1);
        for (int k = 0; k < node.depth(); ++k) {
            int u = node.assigned[static_cast<std::size_t>(k)];
            int v = order[static_cast<std::size_t>(k)];
            s.residual1[static_cast<std::size_t>(u)] = 0;
            s.residual2[static_cast<std::size_t>(v)] = 0;
            s.pair_of1[static_cast<std::size_t>(u)] = k;
            s.pair_of2[static_cast<std::size_t>(v)] = k;
        }
        s.es1.assign(static_cast<std::size_t>(n), {});
        s.es2.assign(static_cast<std::size_t>(n), {});
        s.init_side(g1, s.residual1, s.res_vlabels1, s.res_elabels1, s.es1, s.branches1);
        s.init_side(g2, s.residual2, s.res_vlabels2, s.res_elabels2, s.es2, s.branches2);
        for (int k = 0; k < node.depth(); ++k) {
            int u = node.assigned[static_cast<std::size_t>(k)];
            int v = order[static_cast<std::size_t>(k)];
            s.bridges1.push_back(bridge_labels(g1, u, s.residual1));
            s.bridges2.push_back(bridge_labels(g2, v, s.residual2));
            s.pair_gamma.push_back(gamma(s.bridges1.back(), s.bridges2.back()));
            s.bridge_sum += s.pair_gamma.back();
        }
        return s;
    }

    /// Advances the state by one mapped pair (u -> v); equivalent to
    /// from_scratch on the extended mapping.
    void apply_pair(const Graph& g1, const Graph& g2, int u, int v) {
        apply_side(g1, u, residual1, res_vlabels1, res_elabels1, es1, branches1, bridges1,
                   pair_of1);
        apply_side(g2, v, residual2, res_vlabels2, res_elabels2, es2, branches2, bridges2,
                   pair_of2);
        int k = static_cast<int>(bridges1.size()) - 1;
        pair_of1[static_cast<std::size_t>(u)] = k;
        pair_of2[static_cast<std::size_t>(v)] = k;
        pair_gamma.push_back(0);
        refresh_changed_pairs(g1, g2, u, v, k);
    }

private:
    static LabelMultiset bridge_labels(const Graph& g, int w, const std::vector<char>& residual) {
        LabelMultiset m;
        for (const auto& [x, l] : g.neighbors(w)) {
            if (residual[static_cast<std::size_t>(x)]) {
                m.add(l);
            }
        }
        return m;
    }

    void init_side(const Graph& g, const std::vector<char>& residual, LabelMultiset& vl,
                   LabelMultiset& el, std::vector<LabelMultiset>& es, BranchMultiset& branches) {
        for (int w = 0; w < g.vertex_count(); ++w) {
            if (!residual[static_cast<std::size_t>(w)]) {
                continue;
            }
            vl.add(g.vertex_label(w));
            for (const auto& [x, l] : g.neighbors(w)) {
                if (residual[static_cast<std::size_t>(x)]) {
                    es[static_cast<std::size_t>(w)].add(l);
                    if (w < x) {
                        el.add(l);
                    }
                }
            }
            if (g.vertex_label(w) != kLambda) {
                branches.insert(make_branch(g, w, es[static_cast<std::size_t>(w)]));
            }
        }
    }

    static Branch make_branch(const Graph& g, int w, const LabelMultiset& es) {
        Branch b;
        b.vertex_label = g.vertex_label(w);
        b.edge_labels.reserve(static_cast<std::size_t>(es.size()));
        for (const auto& [l, c] : es.counts()) {
            b.edge_labels.insert(b.edge_labels.end(), static_cast<std::size_t>(c), l);
        }
        return b;
    }

    void apply_side(const Graph& g, int w, std::vector<char>& residual, LabelMultiset& vl,
                    LabelMultiset& el, std::vector<LabelMultiset>& es, BranchMultiset& branches,
                    std::vector<LabelMultiset>& bridges, std::vector<int>& pair_of) {
        if (g.vertex_label(w) != kLambda) {
            branches.remove(make_branch(g, w, es[static_cast<std::size_t>(w)]));
        }
        residual[static_cast<std::size_t>(w)] = 0;
        vl.remove(g.vertex_label(w));
        es[static_cast<std::size_t>(w)] = {};
        LabelMultiset own_bridges;
        for (const auto& [x, l] : g.neighbors(w)) {
            if (residual[static_cast<std::size_t>(x)]) {
                el.remove(l);
                Branch old = make_branch(g, x, es[static_cast<std::size_t>(x)]);
                es[static_cast<std::size_t>(x)].remove(l);
                branches.remove(old);
                branches.insert(make_branch(g, x, es[static_cast<std::size_t>(x)]));
                own_bridges.add(l);
            } else {
                int k = pair_of[static_cast<std::size_t>(x)];
                bridges[static_cast<std::size_t>(k)].remove(l);
            }
        }
        bridges.push_back(std::move(own_bridges));
    }

    void refresh_changed_pairs(const Graph& g1, const Graph& g2, int u, int v, int new_pair) {
        auto refresh = [&](int k) {
            int fresh = gamma(bridges1[static_cast<std::size_t>(k)],
                              bridges2[static_cast<std::size_t>(k)]);
            bridge_sum += fresh - pair_gamma[static_cast<std::size_t>(k)];
            pair_gamma[static_cast<std::size_t>(k)] = fresh;
        };
        std::vector<char> dirty(bridges1.size(), 0);
        dirty[static_cast<std::size_t>(new_pair)] = 1;
        for (const auto& [x, l] : g1.neighbors(u)) {
            int k = pair_of1[static_cast<std::size_t>(x)];
            if (k >= 0 && k != new_pair) {
                dirty[static_cast<std::size_t>(k)] = 1;
            }
        }
        for (const auto& [y, l] : g2.neighbors(v)) {
            int k = pair_of2[static_cast<std::size_t>(y)];
            if (k >= 0 && k != new_pair) {
                dirty[static_cast<std::size_t>(k)] = 1;
            }
        }
        for (std::size_t k = 0; k < dirty.size(); ++k) {
            if (dirty[k]) {
                refresh(static_cast<int>(k));
            }
        }
    }
};

/// Edit operations forced on bridges by the mapping.
inline int bridge_cost(const UnmappedState& state) { return state.bridge_sum; }

inline int compact_branch_lb_halves(const UnmappedState& state) {
    return compact_branch_lb_halves(state.branches1, state.branches2);
}

/// Per-residual-pair cache entry: the best bound seen so far, how far
/// the filter cascade has advanced, and resumable partitioning
/// progress. Both fields only ever grow.
struct BoundCacheEntry {
    int lb_halves = 0;
    int index = 0;
    std::optional<PartitionState> partition;
};

struct CacheKey {
    VertexBitmap bitmap;
    int n_eps = 0;

    friend bool operator<(const CacheKey& a, const CacheKey& b) {
        if (a.n_eps != b.n_eps) {
            return a.n_eps < b.n_eps;
        }
        return a.bitmap < b.bitmap;
    }
};

struct SearchOptions {
    bool use_compact_branch = true;
    bool use_partition = true;
};

/// Cross-thread controls for one running search: a governor may raise
/// `abort`, and the search publishes its queue size in `live_nodes`.
struct SearchControl {
    std::atomic<bool> abort{false};
    std::atomic<std::size_t> live_nodes{0};
};

struct GedStats {
    std::uint64_t mappings_pushed = 0;
    std::uint64_t nodes_popped = 0;
    std::array<std::uint64_t, 3> cascade_calls{}; // label, branch, partition filters
    bool root_survived = false;
};

struct GedResult {
    int distance = 0; ///< exact GED if <= tau, tau + 1 for "greater", a lower bound if !exact
    bool exact = true;
    GedStats stats;
};

/// State of one threshold-GED computation: the padded pair, the g2
/// vertex order, the bound cache, and counters. Confined to a single
/// thread.
class SearchContext {
public:
    SearchContext(const Graph& g1, const Graph& g2, int tau, SearchOptions opts = {},
                  SearchControl* control = nullptr)
        : tau_(tau), opts_(opts), control_(control) {
        if (tau < 0) {
            throw std::invalid_argument("tau must be non-negative");
        }
        auto [p1, p2] = pad_graphs(g1, g2);
        g1_ = std::move(p1);
        g2_ = std::move(p2);
        n_ = g1_.vertex_count();
        n1_orig_ = g1.vertex_count();
        order_ = derive_vertex_order(g2);
        for (int v = g2.vertex_count(); v < n_; ++v) {
            order_.push_back(v); // blank positions map last
        }
        stages_.push_back(StageLabel);
        if (opts_.use_compact_branch) {
            stages_.push_back(StageBranch);
        }
        if (opts_.use_partition) {
            stages_.push_back(StagePartition);
        }
    }

    const Graph& padded1() const { return g1_; }
    const Graph& padded2() const { return g2_; }
    const std::vector<int>& order() const { return order_; }
    int padded_size() const { return n_; }
    int tau() const { return tau_; }
    GedStats& stats() { return stats_; }
    SearchControl* control() const { return control_; }

    /// Observer for cache-entry updates, for invariant tests.
    std::function<void(const CacheKey&, int index, int lb_halves)> cache_observer;

    MappingNode make_root() const {
        MappingNode root;
        root.bitmap = VertexBitmap(n1_orig_);
        return root;
    }

    UnmappedState state_of(const MappingNode& node) const {
        return UnmappedState::from_scratch(g1_, g2_, order_, node);
    }

    /// Child of `parent` pairing g1 vertex `u` with the next position of
    /// the g2 order.
    MappingNode extend(const MappingNode& parent, int u) const {
        MappingNode child = parent;
        child.assigned.push_back(u);
        child.edit_cost =
            extend_edit_cost(parent, u, order_[static_cast<std::size_t>(parent.depth())], g1_,
                             g2_, order_);
        if (u < n1_orig_) {
            child.bitmap.set(u);
        } else {
            ++child.n_eps;
        }
        return child;
    }

    /// Candidate g1 vertices for the next level: every unused non-blank
    /// vertex plus at most one unused blank copy (blanks are
    /// interchangeable).
    std::vector<int> candidates(const MappingNode& node) const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(n_ - node.depth()));
        for (int u = 0; u < n1_orig_; ++u) {
            if (!node.bitmap.test(u)) {
                out.push_back(u);
            }
        }
        if (node.n_eps < n_ - n1_orig_) {
            out.push_back(n1_orig_ + node.n_eps);
        }
        return out;
    }

    /// Lower bound of a partial mapping: edit cost, then bridge cost,
    /// then the shared filter cascade over the unmapped subgraphs,
    /// advanced only as far as needed to either prune or exhaust the
    /// filters. Sets node.lb and returns it.
    int lower_bound(MappingNode& node, const UnmappedState& state) {
        int dist = node.edit_cost;
        if (dist > tau_) {
            node.lb = dist;
            return dist;
        }
        dist += state.bridge_sum;
        if (dist > tau_) {
            node.lb = dist;
            return dist;
        }
        if (node.depth() == n_) {
            node.lb = node.edit_cost; // full mapping: no residual, no bridges
            return node.lb;
        }

        BoundCacheEntry& e = cache_[CacheKey{node.bitmap, node.n_eps}];
        if (dist + ceil_halves(e.lb_halves) > tau_) {
            node.lb = dist + ceil_halves(e.lb_halves);
            return node.lb;
        }
        const int n_stages = static_cast<int>(stages_.size());
        for (int i = e.index + 1; i <= n_stages; ++i) {
            e.index = i;
            int halves = run_stage(stages_[static_cast<std::size_t>(i - 1)], state, dist, e);
            if (halves > e.lb_halves) {
                e.lb_halves = halves;
            }
            notify(node, e);
            if (dist + ceil_halves(e.lb_halves) > tau_) {
                node.lb = dist + ceil_halves(e.lb_halves);
                return node.lb;
            }
        }
        // A stopped partitioning run can resume when this mapping has
        // more slack than the run that populated the entry.
        if (stages_.back() == StagePartition && e.index == n_stages && e.partition &&
            !e.partition->complete && tau_ - dist > e.partition->stop_target) {
            int halves = run_stage(StagePartition, state, dist, e);
            if (halves > e.lb_halves) {
                e.lb_halves = halves;
            }
            notify(node, e);
        }
        node.lb = dist + ceil_halves(e.lb_halves);
        return node.lb;
    }

    std::size_t cache_size() const { return cache_.size(); }

private:
    enum Stage { StageLabel = 0, StageBranch = 1, StagePartition = 2 };

    void notify(const MappingNode& node, const BoundCacheEntry& e) {
        if (cache_observer) {
            cache_observer(CacheKey{node.bitmap, node.n_eps}, e.index, e.lb_halves);
        }
    }

    static Graph induced_residual(const Graph& g, const std::vector<char>& residual) {
        Graph out;
        std::vector<int> to_new(static_cast<std::size_t>(g.vertex_count()), -1);
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (residual[static_cast<std::size_t>(v)] && g.vertex_label(v) != kLambda) {
                to_new[static_cast<std::size_t>(v)] = out.add_vertex(g.vertex_label(v));
            }
        }
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (to_new[static_cast<std::size_t>(v)] < 0) {
                continue;
            }
            for (const auto& [w, l] : g.neighbors(v)) {
                if (v < w && to_new[static_cast<std::size_t>(w)] >= 0) {
                    out.add_edge(to_new[static_cast<std::size_t>(v)],
                                 to_new[static_cast<std::size_t>(w)], l);
                }
            }
        }
        return out;
    }

    int run_stage(int stage, const UnmappedState& state, int dist, BoundCacheEntry& e) {
        switch (stage) {
        case StageLabel:
            ++stats_.cascade_calls[0];
            return 2 * (gamma(state.res_vlabels1, state.res_vlabels2) +
                        gamma(state.res_elabels1, state.res_elabels2));
        case StageBranch:
            ++stats_.cascade_calls[1];
            return compact_branch_lb_halves(state.branches1, state.branches2);
        default: {
            ++stats_.cascade_calls[2];
            Graph res1 = induced_residual(g1_, state.residual1);
            Graph res2 = induced_residual(g2_, state.residual2);
            const PartitionState* prev = e.partition ? &*e.partition : nullptr;
            e.partition = partition_graph(res2, res1, tau_ - dist, prev);
            return 2 * e.partition->non_isomorphic;
        }
        }
    }

    Graph g1_, g2_;
    int n_ = 0;
    int n1_orig_ = 0;
    int tau_ = 0;
    SearchOptions opts_;
    SearchControl* control_ = nullptr;
    std::vector<int> order_;
    std::vector<int> stages_;
    std::map<CacheKey, BoundCacheEntry> cache_;
    GedStats stats_;
};

/// Threshold GED: returns ged(g1, g2) when it is at most tau, and
/// tau + 1 otherwise. Best-first search over the mapping tree with the
/// cascaded lower bound. If a governor raises the abort flag of
/// `control`, the search returns the minimum lower bound among queued
/// nodes with exact = false.
inline GedResult nass_ged(const Graph& g1, const Graph& g2, int tau, SearchOptions opts = {},
                          SearchControl* control = nullptr) {
    SearchContext ctx(g1, g2, tau, opts, control);

    struct HeapItem {
        MappingNode node;
        std::uint64_t seq;
    };
    struct HeapCmp {
        bool operator()(const HeapItem& a, const HeapItem& b) const {
            if (a.node.lb != b.node.lb) {
                return a.node.lb > b.node.lb; // smallest bound first
            }
            if (a.node.depth() != b.node.depth()) {
                return a.node.depth() < b.node.depth(); // then deepest first
            }
            return a.seq > b.seq; // then insertion order
        }
    };
    std::priority_queue<HeapItem, std::vector<HeapItem>, HeapCmp> queue;
    std::uint64_t seq = 0;

    auto publish = [&] {
        if (control != nullptr) {
            control->live_nodes.store(queue.size(), std::memory_order_relaxed);
        }
    };

    GedResult out;
    MappingNode root = ctx.make_root();
    UnmappedState root_state = ctx.state_of(root);
    if (ctx.lower_bound(root, root_state) > tau) {
        out.distance = tau + 1;
        out.stats = ctx.stats();
        return out;
    }
    ctx.stats().root_survived = true;
    ++ctx.stats().mappings_pushed;
    queue.push(HeapItem{std::move(root), seq++});
    publish();

    const int n = ctx.padded_size();
    while (!queue.empty()) {
        if (control != nullptr && control->abort.load(std::memory_order_relaxed)) {
            out.distance = queue.top().node.lb;
            out.exact = false;
            out.stats = ctx.stats();
            publish();
            return out;
        }
        MappingNode m = queue.top().node;
        queue.pop();
        ++ctx.stats().nodes_popped;
        if (m.depth() == n) {
            out.distance = m.edit_cost;
            out.stats = ctx.stats();
            publish();
            return out;
        }
        UnmappedState parent_state = ctx.state_of(m);
        int v = ctx.order()[static_cast<std::size_t>(m.depth())];
        for (int u : ctx.candidates(m)) {
            MappingNode child = ctx.extend(m, u);
            UnmappedState child_state = parent_state;
            child_state.apply_pair(ctx.padded1(), ctx.padded2(), u, v);
            if (ctx.lower_bound(child, child_state) <= tau) {
                ++ctx.stats().mappings_pushed;
                queue.push(HeapItem{std::move(child), seq++});
            }
        }
        publish();
    }
    out.distance = tau + 1;
    out.stats = ctx.stats();
    return out;
}

} // namespace nass
