#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <istream>
#include <iterator>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "nass/ged.hpp"
#include "nass/graph.hpp"

namespace nass {

namespace detail {

inline std::uint32_t crc32(const std::string& data) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) {
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            }
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (unsigned char byte : data) {
        crc = table[(crc ^ byte) & 0xFFu] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }
}

} // namespace detail

class IndexIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IndexEntry {
    std::uint32_t neighbor = 0;
    std::uint8_t distance = 0;
    bool inexact = false;

    friend bool operator<(const IndexEntry& a, const IndexEntry& b) {
        if (a.distance != b.distance) {
            return a.distance < b.distance;
        }
        return a.neighbor < b.neighbor;
    }
    bool operator==(const IndexEntry&) const = default;
};

/// Precomputed pairwise-GED index: per graph, the neighbors within
/// tau_index sorted by distance then id. Inexact entries hold a valid
/// GED lower bound produced by a preempted computation.
class GedIndex {
public:
    static constexpr char kMagic[9] = "NASSIX01";

    GedIndex() = default;
    GedIndex(int tau_index, std::size_t n_graphs) : tau_index_(tau_index), entries_(n_graphs) {}

    int tau_index() const { return tau_index_; }
    std::size_t graph_count() const { return entries_.size(); }

    const std::vector<IndexEntry>& entries(int g) const {
        return entries_[static_cast<std::size_t>(g)];
    }

    /// Unsynchronized one-sided append; callers own the locking during a
    /// parallel build.
    void append_entry(int g, IndexEntry e) {
        entries_[static_cast<std::size_t>(g)].push_back(e);
    }

    /// Symmetric insert for tests and mock indices (self pairs insert once).
    void add_pair(int i, int j, int distance, bool inexact = false) {
        IndexEntry a{static_cast<std::uint32_t>(j), static_cast<std::uint8_t>(distance), inexact};
        append_entry(i, a);
        if (i != j) {
            append_entry(j, IndexEntry{static_cast<std::uint32_t>(i),
                                       static_cast<std::uint8_t>(distance), inexact});
        }
    }

    void finalize() {
        for (auto& row : entries_) {
            std::sort(row.begin(), row.end());
        }
    }

    /// Graph ids whose stored distance is at most t, optionally
    /// restricted to exact entries. With exact_only = false the result
    /// is a superset of the true neighborhood restricted to indexed
    /// pairs, because inexact entries are lower bounds.
    std::vector<int> neighbors(int g, int t, bool exact_only) const {
        if (t < 0 || t > tau_index_) {
            throw std::out_of_range("neighbors: threshold outside [0, tau_index]");
        }
        std::vector<int> out;
        for (const IndexEntry& e : entries_[static_cast<std::size_t>(g)]) {
            if (e.distance > t) {
                break; // rows are sorted by distance
            }
            if (exact_only && e.inexact) {
                continue;
            }
            out.push_back(static_cast<int>(e.neighbor));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::size_t entry_count() const {
        std::size_t n = 0;
        for (const auto& row : entries_) {
            n += row.size();
        }
        return n;
    }

    std::size_t inexact_count() const {
        std::size_t n = 0;
        for (const auto& row : entries_) {
            for (const IndexEntry& e : row) {
                n += e.inexact ? 1 : 0;
            }
        }
        return n;
    }

    bool operator==(const GedIndex&) const = default;

    void save(std::ostream& out) const {
        std::string buf;
        buf.append(kMagic, 8);
        detail::put_u32(buf, static_cast<std::uint32_t>(entries_.size()));
        buf.push_back(static_cast<char>(tau_index_));
        for (const auto& row : entries_) {
            detail::put_u32(buf, static_cast<std::uint32_t>(row.size()));
            for (const IndexEntry& e : row) {
                detail::put_u32(buf, e.neighbor);
                std::uint8_t packed =
                    static_cast<std::uint8_t>((e.distance & 0x7Fu) | (e.inexact ? 0x80u : 0u));
                buf.push_back(static_cast<char>(packed));
            }
        }
        std::uint32_t crc = detail::crc32(buf);
        detail::put_u32(buf, crc);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }

    static GedIndex load(std::istream& in) {
        std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (buf.size() < 17) { // magic + count + tau + crc
            throw IndexIoError("index file truncated");
        }
        if (buf.compare(0, 8, kMagic, 8) != 0) {
            throw IndexIoError("bad index magic");
        }
        std::string body = buf.substr(0, buf.size() - 4);
        std::size_t pos = buf.size() - 4;
        std::uint32_t stored_crc = read_u32(buf, pos);
        if (detail::crc32(body) != stored_crc) {
            throw IndexIoError("index checksum mismatch");
        }
        pos = 8;
        std::uint32_t n = read_u32(body, pos);
        GedIndex idx;
        idx.tau_index_ = static_cast<unsigned char>(body.at(pos++));
        idx.entries_.resize(n);
        for (std::uint32_t g = 0; g < n; ++g) {
            std::uint32_t count = read_u32(body, pos);
            auto& row = idx.entries_[g];
            row.reserve(count);
            for (std::uint32_t k = 0; k < count; ++k) {
                IndexEntry e;
                e.neighbor = read_u32(body, pos);
                std::uint8_t packed = static_cast<unsigned char>(body.at(pos++));
                e.distance = packed & 0x7Fu;
                e.inexact = (packed & 0x80u) != 0;
                row.push_back(e);
            }
        }
        if (pos != body.size()) {
            throw IndexIoError("index file has trailing bytes");
        }
        return idx;
    }

private:
    static std::uint32_t read_u32(const std::string& buf, std::size_t& pos) {
        if (pos + 4 > buf.size()) {
            throw IndexIoError("index file truncated");
        }
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + static_cast<std::size_t>(i)]))
                 << (8 * i);
        }
        pos += 4;
        return v;
    }

    int tau_index_ = 0;
    std::vector<std::vector<IndexEntry>> entries_;
};

inline constexpr std::size_t kUnlimitedNodes = std::numeric_limits<std::size_t>::max();

struct BuildConfig {
    int tau_index = 1;            ///< in [1, 127]
    int n_workers = 1;
    std::size_t node_budget = kUnlimitedNodes; ///< aggregate live search-tree nodes
    SearchOptions ged_options{};
};

/// Builds the pairwise index: workers pull graph ids from a shared
/// dispenser and compute the threshold GED of every later pair,
/// mirroring stored entries. While a bounded build runs, a governor
/// thread watches the aggregate live node count and, when the budget is
/// exceeded, aborts the worker with the largest queue; that worker's
/// search returns a lower bound stored as an inexact entry.
inline GedIndex build_index(const GraphDatabase& db, const BuildConfig& cfg) {
    if (cfg.tau_index < 1 || cfg.tau_index > 127) {
        throw std::invalid_argument("tau_index must be in [1, 127]");
    }
    if (cfg.n_workers < 1) {
        throw std::invalid_argument("n_workers must be positive");
    }
    if (cfg.node_budget == 0) {
        throw std::invalid_argument("node_budget must be positive");
    }
    const int n = static_cast<int>(db.graphs.size());
    GedIndex idx(cfg.tau_index, static_cast<std::size_t>(n));
    std::vector<std::mutex> row_locks(static_cast<std::size_t>(std::max(n, 1)));
    std::atomic<int> dispenser{0};
    std::atomic<bool> done{false};

    std::vector<std::unique_ptr<SearchControl>> controls;
    controls.reserve(static_cast<std::size_t>(cfg.n_workers));
    for (int w = 0; w < cfg.n_workers; ++w) {
        controls.push_back(std::make_unique<SearchControl>());
    }

    std::thread governor;
    if (cfg.node_budget != kUnlimitedNodes) {
        governor = std::thread([&] {
            while (!done.load(std::memory_order_relaxed)) {
                std::size_t total = 0;
                std::size_t largest = 0;
                int victim = -1;
                for (int w = 0; w < cfg.n_workers; ++w) {
                    std::size_t live = controls[static_cast<std::size_t>(w)]->live_nodes.load(
                        std::memory_order_relaxed);
                    total += live;
                    if (live > largest) {
                        largest = live;
                        victim = w;
                    }
                }
                if (total > cfg.node_budget && victim >= 0) {
                    controls[static_cast<std::size_t>(victim)]->abort.store(true);
                }
                std::this_thread::sleep_for(std::chrono::microseconds(50));
            }
        });
    }

    auto worker = [&](int w) {
        SearchControl& ctl = *controls[static_cast<std::size_t>(w)];
        for (;;) {
            int i = dispenser.fetch_add(1);
            if (i >= n) {
                break;
            }
            {
                std::lock_guard<std::mutex> lk(row_locks[static_cast<std::size_t>(i)]);
                idx.append_entry(i, IndexEntry{static_cast<std::uint32_t>(i), 0, false});
            }
            for (int j = i + 1; j < n; ++j) {
                ctl.abort.store(false);
                ctl.live_nodes.store(0);
                GedResult r =
                    nass_ged(db.graphs[static_cast<std::size_t>(i)],
                             db.graphs[static_cast<std::size_t>(j)], cfg.tau_index,
                             cfg.ged_options, &ctl);
                if (r.distance <= cfg.tau_index) {
                    IndexEntry forward{static_cast<std::uint32_t>(j),
                                       static_cast<std::uint8_t>(r.distance), !r.exact};
                    IndexEntry backward{static_cast<std::uint32_t>(i),
                                        static_cast<std::uint8_t>(r.distance), !r.exact};
                    {
                        std::lock_guard<std::mutex> lk(row_locks[static_cast<std::size_t>(i)]);
                        idx.append_entry(i, forward);
                    }
                    {
                        std::lock_guard<std::mutex> lk(row_locks[static_cast<std::size_t>(j)]);
                        idx.append_entry(j, backward);
                    }
                }
            }
            ctl.live_nodes.store(0);
        }
    };

    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(cfg.n_workers));
    for (int w = 0; w < cfg.n_workers; ++w) {
        workers.emplace_back(worker, w);
    }
    for (auto& t : workers) {
        t.join();
    }
    done.store(true);
    if (governor.joinable()) {
        governor.join();
    }
    idx.finalize();
    return idx;
}

} // namespace nass
