#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nass {

/// Interned label id. Vertex labels and edge labels live in separate
/// interner tables, so equal ids from different tables are unrelated.
using Label = std::int32_t;

/// Sentinel for "no label": the label of a blank vertex and of an absent
/// edge. Never interned and never stored in a label multiset.
inline constexpr Label kLambda = -1;

/// Bijective token <-> id table. Ids are dense and assigned in
/// first-seen order.
class LabelInterner {
public:
    Label intern(std::string_view token) {
        auto it = ids_.find(std::string(token));
        if (it != ids_.end()) {
            return it->second;
        }
        Label id = static_cast<Label>(tokens_.size());
        tokens_.emplace_back(token);
        ids_.emplace(tokens_.back(), id);
        return id;
    }

    /// Id of a token interned earlier, or kLambda if unseen.
    Label find(std::string_view token) const {
        auto it = ids_.find(std::string(token));
        return it == ids_.end() ? kLambda : it->second;
    }

    const std::string& token(Label id) const { return tokens_.at(static_cast<std::size_t>(id)); }

    std::size_t size() const { return tokens_.size(); }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, Label> ids_;
};

/// Multiset of labels stored as a sorted (label, count) vector so that
/// intersection size is a linear merge. kLambda is silently dropped.
class LabelMultiset {
public:
    void add(Label l, int n = 1) {
        if (l == kLambda || n == 0) {
            return;
        }
        auto it = std::lower_bound(counts_.begin(), counts_.end(), l,
                                   [](const auto& p, Label x) { return p.first < x; });
        if (it != counts_.end() && it->first == l) {
            it->second += n;
        } else {
            counts_.insert(it, {l, n});
        }
        total_ += n;
    }

    /// Removes one occurrence. The label must be present.
    void remove(Label l) {
        if (l == kLambda) {
            return;
        }
        auto it = std::lower_bound(counts_.begin(), counts_.end(), l,
                                   [](const auto& p, Label x) { return p.first < x; });
        if (it == counts_.end() || it->first != l) {
            throw std::logic_error("LabelMultiset::remove: label not present");
        }
        if (--it->second == 0) {
            counts_.erase(it);
        }
        --total_;
    }

    int count(Label l) const {
        auto it = std::lower_bound(counts_.begin(), counts_.end(), l,
                                   [](const auto& p, Label x) { return p.first < x; });
        return (it != counts_.end() && it->first == l) ? it->second : 0;
    }

    int size() const { return total_; }
    bool empty() const { return total_ == 0; }

    static int intersection_size(const LabelMultiset& a, const LabelMultiset& b) {
        int common = 0;
        auto ia = a.counts_.begin();
        auto ib = b.counts_.begin();
        while (ia != a.counts_.end() && ib != b.counts_.end()) {
            if (ia->first < ib->first) {
                ++ia;
            } else if (ib->first < ia->first) {
                ++ib;
            } else {
                common += std::min(ia->second, ib->second);
                ++ia;
                ++ib;
            }
        }
        return common;
    }

    /// Sorted (label, count) pairs.
    const std::vector<std::pair<Label, int>>& counts() const { return counts_; }

    bool operator==(const LabelMultiset& other) const = default;

private:
    std::vector<std::pair<Label, int>> counts_;
    int total_ = 0;
};

/// max(|A|, |B|) - |A intersect B| with multiset semantics.
inline int gamma(const LabelMultiset& a, const LabelMultiset& b) {
    return std::max(a.size(), b.size()) - LabelMultiset::intersection_size(a, b);
}

/// Labeled undirected simple graph. Vertices are dense ids; edge labels
/// are looked up through sorted adjacency lists, with kLambda returned
/// for absent edges.
class Graph {
public:
    int id = 0;

    int vertex_count() const { return static_cast<int>(vlabels_.size()); }
    int edge_count() const { return edge_count_; }

    Label vertex_label(int v) const { return vlabels_[static_cast<std::size_t>(v)]; }

    void set_vertex_label(int v, Label l) { vlabels_[static_cast<std::size_t>(v)] = l; }

    int add_vertex(Label l) {
        vlabels_.push_back(l);
        adj_.emplace_back();
        return vertex_count() - 1;
    }

    void add_edge(int u, int v, Label l) {
        if (u == v) {
            throw std::invalid_argument("self-loop");
        }
        if (has_edge(u, v)) {
            throw std::invalid_argument("duplicate edge");
        }
        insert_adj(u, v, l);
        insert_adj(v, u, l);
        ++edge_count_;
    }

    void remove_edge(int u, int v) {
        erase_adj(u, v);
        erase_adj(v, u);
        --edge_count_;
    }

    void set_edge_label(int u, int v, Label l) {
        find_adj(u, v)->second = l;
        find_adj(v, u)->second = l;
    }

    bool has_edge(int u, int v) const { return edge_label(u, v) != kLambda; }

    /// kLambda if the pair is not an edge.
    Label edge_label(int u, int v) const {
        const auto& row = adj_[static_cast<std::size_t>(u)];
        auto it = std::lower_bound(row.begin(), row.end(), v,
                                   [](const auto& p, int x) { return p.first < x; });
        return (it != row.end() && it->first == v) ? it->second : kLambda;
    }

    int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

    /// Sorted (neighbor, edge label) pairs.
    const std::vector<std::pair<int, Label>>& neighbors(int v) const {
        return adj_[static_cast<std::size_t>(v)];
    }

    /// Removes a degree-0 vertex; later vertex ids shift down by one.
    void remove_isolated_vertex(int v) {
        if (degree(v) != 0) {
            throw std::invalid_argument("vertex is not isolated");
        }
        vlabels_.erase(vlabels_.begin() + v);
        adj_.erase(adj_.begin() + v);
        for (auto& row : adj_) {
            for (auto& [w, l] : row) {
                if (w > v) {
                    --w;
                }
            }
        }
    }

    /// All edges as (u, v, label) with u < v, ordered by (u, v).
    std::vector<std::tuple<int, int, Label>> edges() const {
        std::vector<std::tuple<int, int, Label>> out;
        out.reserve(static_cast<std::size_t>(edge_count_));
        for (int u = 0; u < vertex_count(); ++u) {
            for (const auto& [v, l] : adj_[static_cast<std::size_t>(u)]) {
                if (u < v) {
                    out.emplace_back(u, v, l);
                }
            }
        }
        return out;
    }

    LabelMultiset vertex_label_multiset() const {
        LabelMultiset m;
        for (Label l : vlabels_) {
            m.add(l);
        }
        return m;
    }

    LabelMultiset edge_label_multiset() const {
        LabelMultiset m;
        for (int u = 0; u < vertex_count(); ++u) {
            for (const auto& [v, l] : adj_[static_cast<std::size_t>(u)]) {
                if (u < v) {
                    m.add(l);
                }
            }
        }
        return m;
    }

    bool operator==(const Graph& other) const {
        return vlabels_ == other.vlabels_ && adj_ == other.adj_;
    }

private:
    void insert_adj(int u, int v, Label l) {
        auto& row = adj_[static_cast<std::size_t>(u)];
        auto it = std::lower_bound(row.begin(), row.end(), v,
                                   [](const auto& p, int x) { return p.first < x; });
        row.insert(it, {v, l});
    }

    void erase_adj(int u, int v) {
        auto it = find_adj(u, v);
        adj_[static_cast<std::size_t>(u)].erase(it);
    }

    std::vector<std::pair<int, Label>>::iterator find_adj(int u, int v) {
        auto& row = adj_[static_cast<std::size_t>(u)];
        auto it = std::lower_bound(row.begin(), row.end(), v,
                                   [](const auto& p, int x) { return p.first < x; });
        if (it == row.end() || it->first != v) {
            throw std::invalid_argument("edge not present");
        }
        return it;
    }

    std::vector<Label> vlabels_;
    std::vector<std::vector<std::pair<int, Label>>> adj_;
    int edge_count_ = 0;
};

/// Label set-based GED lower bound: gamma over vertex label multisets
/// plus gamma over edge label multisets.
inline int lb_label(const Graph& r, const Graph& s) {
    return gamma(r.vertex_label_multiset(), s.vertex_label_multiset()) +
           gamma(r.edge_label_multiset(), s.edge_label_multiset());
}

struct GraphDatabase {
    std::vector<Graph> graphs;
    LabelInterner vertex_labels;
    LabelInterner edge_labels;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

/// Parses graphs in the line-oriented text format, interning labels into
/// the given tables. Used both for databases and for query files that
/// reuse a database's interner.
inline std::vector<Graph> parse_graph_stream(std::istream& in, LabelInterner& vertex_labels,
                                             LabelInterner& edge_labels) {
    std::vector<Graph> graphs;
    std::string line;
    int lineno = 0;
    bool in_graph = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) {
            continue; // blank line
        }
        if (tag == "t") {
            std::string hash;
            long file_id = 0;
            if (!(ls >> hash >> file_id) || hash != "#") {
                throw ParseError(lineno, "malformed graph header, expected 't # <id>'");
            }
            Graph g;
            g.id = static_cast<int>(graphs.size()); // ids are dense in file order
            graphs.push_back(std::move(g));
            in_graph = true;
        } else if (tag == "v") {
            if (!in_graph) {
                throw ParseError(lineno, "vertex before graph header");
            }
            int vid = 0;
            std::string token;
            if (!(ls >> vid >> token)) {
                throw ParseError(lineno, "malformed vertex line, expected 'v <id> <label>'");
            }
            Graph& g = graphs.back();
            if (vid != g.vertex_count()) {
                throw ParseError(lineno, "vertex ids must be dense and in order, expected " +
                                             std::to_string(g.vertex_count()));
            }
            g.add_vertex(vertex_labels.intern(token));
        } else if (tag == "e") {
            if (!in_graph) {
                throw ParseError(lineno, "edge before graph header");
            }
            int u = 0;
            int v = 0;
            std::string token;
            if (!(ls >> u >> v >> token)) {
                throw ParseError(lineno, "malformed edge line, expected 'e <u> <v> <label>'");
            }
            Graph& g = graphs.back();
            if (u < 0 || u >= g.vertex_count() || v < 0 || v >= g.vertex_count()) {
                throw ParseError(lineno, "edge references undeclared vertex");
            }
            if (u == v) {
                throw ParseError(lineno, "self-loop");
            }
            if (g.has_edge(u, v)) {
                throw ParseError(lineno, "duplicate edge");
            }
            g.add_edge(u, v, edge_labels.intern(token));
        } else {
            throw ParseError(lineno, "unknown directive '" + tag + "'");
        }
    }
    return graphs;
}

} // namespace detail

/// Parses a graph database file. Graph ids are assigned densely in file
/// order; labels are interned in first-seen order.
inline GraphDatabase parse_db(std::istream& in) {
    GraphDatabase db;
    db.graphs = detail::parse_graph_stream(in, db.vertex_labels, db.edge_labels);
    return db;
}

/// Parses query graphs against an existing database: its interner is
/// reused, and labels unseen in the database get fresh ids (they simply
/// never match any data graph label).
inline std::vector<Graph> parse_graphs(std::istream& in, GraphDatabase& db) {
    return detail::parse_graph_stream(in, db.vertex_labels, db.edge_labels);
}

inline void write_graph(const Graph& g, const LabelInterner& vertex_labels,
                        const LabelInterner& edge_labels, std::ostream& out) {
    out << "t # " << g.id << '\n';
    for (int v = 0; v < g.vertex_count(); ++v) {
        out << "v " << v << ' ' << vertex_labels.token(g.vertex_label(v)) << '\n';
    }
    for (const auto& [u, v, l] : g.edges()) {
        out << "e " << u << ' ' << v << ' ' << edge_labels.token(l) << '\n';
    }
}

inline void write_db(const GraphDatabase& db, std::ostream& out) {
    for (const Graph& g : db.graphs) {
        write_graph(g, db.vertex_labels, db.edge_labels, out);
    }
}

} // namespace nass
