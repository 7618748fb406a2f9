#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nass/brute_force.hpp"
#include "nass/graph.hpp"
#include "nass/index.hpp"
#include "nass/search.hpp"
#include "nass/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

nass::GraphDatabase load_db(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open database file: " + path);
    }
    return nass::parse_db(in);
}

std::vector<nass::Graph> load_queries(const std::string& path, nass::GraphDatabase& db) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open query file: " + path);
    }
    return nass::parse_graphs(in, db);
}

std::uint64_t elapsed_us(std::chrono::steady_clock::time_point from) {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                          std::chrono::steady_clock::now() - from)
                                          .count());
}

struct ReportRow {
    std::string mode;
    int query_id = 0;
    int tau = 0;
    std::size_t results = 0;
    nass::QueryStats stats;
    std::uint64_t micros = 0;
};

void write_report(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << "# mode\tquery_id\ttau\tresults\tcandidates_verified\tregenerations"
           "\tmappings_pushed\tresults_from_index\telapsed_us\n";
    for (const ReportRow& r : rows) {
        out << r.mode << '\t' << r.query_id << '\t' << r.tau << '\t' << r.results << '\t'
            << r.stats.candidates_verified << '\t' << r.stats.regenerations << '\t'
            << r.stats.mappings_pushed << '\t' << r.stats.results_from_index << '\t' << r.micros
            << '\n';
    }
    // aggregate means per (mode, tau), recomputable from the rows above
    out << "# aggregate\tmode\ttau\tqueries\tmean_results\tmean_candidates_verified"
           "\tmean_mappings_pushed\tmean_elapsed_us\n";
    std::vector<std::pair<std::string, int>> groups;
    for (const ReportRow& r : rows) {
        if (std::find(groups.begin(), groups.end(), std::make_pair(r.mode, r.tau)) ==
            groups.end()) {
            groups.emplace_back(r.mode, r.tau);
        }
    }
    for (const auto& [mode, tau] : groups) {
        double n = 0;
        double results = 0;
        double verified = 0;
        double mappings = 0;
        double micros = 0;
        for (const ReportRow& r : rows) {
            if (r.mode != mode || r.tau != tau) {
                continue;
            }
            n += 1;
            results += static_cast<double>(r.results);
            verified += static_cast<double>(r.stats.candidates_verified);
            mappings += static_cast<double>(r.stats.mappings_pushed);
            micros += static_cast<double>(r.micros);
        }
        out << "aggregate\t" << mode << '\t' << tau << '\t' << n << '\t' << results / n << '\t'
            << verified / n << '\t' << mappings / n << '\t' << micros / n << '\n';
    }
}

int cmd_build(const std::string& db_path, const std::string& out_path, int tau_index,
              int threads, std::uint64_t node_budget, bool verify) {
    nass::GraphDatabase db = load_db(db_path);
    nass::BuildConfig cfg;
    cfg.tau_index = tau_index;
    cfg.n_workers = threads;
    cfg.node_budget = node_budget == 0 ? nass::kUnlimitedNodes : node_budget;
    nass::GedIndex idx = nass::build_index(db, cfg);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open output file: " << out_path << "\n";
        return kExitUsage;
    }
    idx.save(out);
    out.flush();
    if (!out) {
        std::cerr << "write failed: " << out_path << "\n";
        return kExitUsage;
    }

    std::size_t total = idx.entry_count();
    std::size_t inexact = idx.inexact_count();
    std::cout << "entries\t" << total << "\n";
    std::cout << "inexact_pct\t"
              << (total == 0 ? 0.0 : 100.0 * static_cast<double>(inexact) / static_cast<double>(total))
              << "\n";

    if (verify) {
        for (const nass::Graph& g : db.graphs) {
            if (g.vertex_count() > nass::kBruteForceLimit) {
                std::cerr << "--verify needs graphs of at most " << nass::kBruteForceLimit
                          << " vertices\n";
                return kExitUsage;
            }
        }
        const int n = static_cast<int>(db.graphs.size());
        for (int i = 0; i < n; ++i) {
            std::vector<std::optional<std::pair<int, bool>>> stored(static_cast<std::size_t>(n));
            for (const nass::IndexEntry& e : idx.entries(i)) {
                stored[e.neighbor] = std::make_pair(static_cast<int>(e.distance), e.inexact);
            }
            for (int j = 0; j < n; ++j) {
                int truth = i == j ? 0
                                   : nass::brute_force_ged(db.graphs[static_cast<std::size_t>(i)],
                                                           db.graphs[static_cast<std::size_t>(j)]);
                const auto& s = stored[static_cast<std::size_t>(j)];
                bool ok = s.has_value()
                              ? (s->second ? s->first <= truth : s->first == truth)
                              : truth > tau_index;
                if (!ok) {
                    std::cerr << "verification failed for pair (" << i << ", " << j
                              << "): oracle " << truth << "\n";
                    return kExitVerifyFailed;
                }
            }
        }
        std::cout << "verify\tok\n";
    }
    return kExitOk;
}

int cmd_query(const std::string& db_path, const std::string& index_path,
              const std::string& queries_path, int tau, bool no_index,
              const std::string& stats_path) {
    nass::GraphDatabase db = load_db(db_path);
    std::optional<nass::GedIndex> idx;
    if (!no_index) {
        std::ifstream in(index_path, std::ios::binary);
        if (!in) {
            std::cerr << "cannot open index file: " << index_path << "\n";
            return kExitUsage;
        }
        idx = nass::GedIndex::load(in);
    }
    std::vector<nass::Graph> queries = load_queries(queries_path, db);

    std::vector<ReportRow> rows;
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        nass::Query q{queries[qi], tau};
        auto start = std::chrono::steady_clock::now();
        nass::SearchResult r =
            no_index ? nass::linear_scan(db, q) : nass::nass_search(db, *idx, q);
        std::uint64_t us = elapsed_us(start);
        for (int gid : r.ids) {
            std::cout << qi << '\t' << gid << '\n';
        }
        rows.push_back(ReportRow{no_index ? "scan" : "nass", static_cast<int>(qi), tau,
                                 r.ids.size(), r.stats, us});
    }
    if (!stats_path.empty()) {
        std::ofstream out(stats_path);
        if (!out) {
            std::cerr << "cannot open stats file: " << stats_path << "\n";
            return kExitUsage;
        }
        write_report(out, rows);
    }
    return kExitOk;
}

int cmd_ged(const std::string& db_path, int g1, int g2, int tau) {
    nass::GraphDatabase db = load_db(db_path);
    const int n = static_cast<int>(db.graphs.size());
    if (g1 < 0 || g1 >= n || g2 < 0 || g2 >= n) {
        std::cerr << "graph ids must be in [0, " << n << ")\n";
        return kExitUsage;
    }
    nass::GedResult r = nass::nass_ged(db.graphs[static_cast<std::size_t>(g1)],
                                       db.graphs[static_cast<std::size_t>(g2)], tau);
    std::cout << "ged\t" << r.distance << "\n";
    std::cout << "mappings_pushed\t" << r.stats.mappings_pushed << "\n";
    return kExitOk;
}

int cmd_gen(const std::string& out_path, const nass::SyntheticConfig& cfg) {
    nass::GraphDatabase db = nass::gen_synthetic(cfg);
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot open output file: " << out_path << "\n";
        return kExitUsage;
    }
    nass::write_db(db, out);
    out.flush();
    if (!out) {
        std::cerr << "write failed: " << out_path << "\n";
        return kExitUsage;
    }
    std::cout << "graphs\t" << db.graphs.size() << "\n";
    return kExitOk;
}

int cmd_bench(const std::string& db_path, const std::string& index_path,
              const std::string& queries_path, const std::string& tau_range,
              const std::string& stats_path) {
    int tau_lo = 0;
    int tau_hi = 0;
    auto dots = tau_range.find("..");
    if (dots == std::string::npos) {
        std::cerr << "bad --tau-range, expected A..B\n";
        return kExitUsage;
    }
    try {
        tau_lo = std::stoi(tau_range.substr(0, dots));
        tau_hi = std::stoi(tau_range.substr(dots + 2));
    } catch (const std::exception&) {
        std::cerr << "bad --tau-range, expected A..B\n";
        return kExitUsage;
    }
    if (tau_lo < 0 || tau_hi < tau_lo) {
        std::cerr << "bad --tau-range, expected 0 <= A <= B\n";
        return kExitUsage;
    }

    nass::GraphDatabase db = load_db(db_path);
    std::ifstream in(index_path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open index file: " << index_path << "\n";
        return kExitUsage;
    }
    nass::GedIndex idx = nass::GedIndex::load(in);
    std::vector<nass::Graph> queries = load_queries(queries_path, db);

    std::vector<ReportRow> rows;
    bool all_equal = true;
    for (int tau = tau_lo; tau <= tau_hi; ++tau) {
        for (std::size_t qi = 0; qi < queries.size(); ++qi) {
            nass::Query q{queries[qi], tau};
            auto start = std::chrono::steady_clock::now();
            nass::SearchResult with_index = nass::nass_search(db, idx, q);
            std::uint64_t us_index = elapsed_us(start);
            start = std::chrono::steady_clock::now();
            nass::SearchResult scan = nass::linear_scan(db, q);
            std::uint64_t us_scan = elapsed_us(start);
            all_equal = all_equal && with_index.ids == scan.ids;
            rows.push_back(ReportRow{"nass", static_cast<int>(qi), tau, with_index.ids.size(),
                                     with_index.stats, us_index});
            rows.push_back(
                ReportRow{"scan", static_cast<int>(qi), tau, scan.ids.size(), scan.stats, us_scan});
        }
        std::cout << "tau " << tau << ": done\n";
    }
    std::ofstream out(stats_path);
    if (!out) {
        std::cerr << "cannot open stats file: " << stats_path << "\n";
        return kExitUsage;
    }
    write_report(out, rows);
    std::cout << "result_sets_equal\t" << (all_equal ? "true" : "false") << "\n";
    return all_equal ? kExitOk : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph similarity search under graph edit distance"};
    app.require_subcommand(1);

    auto* build = app.add_subcommand("build", "precompute the pairwise distance index");
    std::string build_db, build_out;
    int build_tau = 1;
    int build_threads = 1;
    std::uint64_t build_budget = 0;
    bool build_verify = false;
    build->add_option("--db", build_db, "graph database file")->required();
    build->add_option("--out", build_out, "output index file")->required();
    build->add_option("--tau-index", build_tau, "maximum indexed distance")->required();
    build->add_option("--threads", build_threads, "worker threads");
    build->add_option("--node-budget", build_budget,
                      "aggregate live search-node limit (0 = unlimited)");
    build->add_flag("--verify", build_verify, "cross-check entries against the exhaustive oracle");

    auto* query = app.add_subcommand("query", "answer threshold queries");
    std::string query_db, query_index, query_queries, query_stats;
    int query_tau = 0;
    bool query_no_index = false;
    query->add_option("--db", query_db, "graph database file")->required();
    query->add_option("--index", query_index, "index file");
    query->add_option("--queries", query_queries, "query graph file")->required();
    query->add_option("--tau", query_tau, "distance threshold")->required();
    query->add_flag("--no-index", query_no_index, "verify candidates without the index");
    query->add_option("--stats", query_stats, "write per-query statistics to this file");

    auto* ged = app.add_subcommand("ged", "threshold distance of one pair");
    std::string ged_db;
    int ged_g1 = 0;
    int ged_g2 = 0;
    int ged_tau = 0;
    ged->add_option("--db", ged_db, "graph database file")->required();
    ged->add_option("--g1", ged_g1, "first graph id")->required();
    ged->add_option("--g2", ged_g2, "second graph id")->required();
    ged->add_option("--tau", ged_tau, "distance threshold")->required();

    auto* gen = app.add_subcommand("gen", "generate a synthetic database");
    std::string gen_out;
    nass::SyntheticConfig gen_cfg;
    gen->add_option("--out", gen_out, "output database file")->required();
    gen->add_option("--count", gen_cfg.count, "number of base graphs")->required();
    gen->add_option("--avg-edges", gen_cfg.avg_edges, "average edge count");
    gen->add_option("--density", gen_cfg.density, "edge density in (0, 1]");
    gen->add_option("--vlabels", gen_cfg.n_vertex_labels, "vertex label alphabet size");
    gen->add_option("--elabels", gen_cfg.n_edge_labels, "edge label alphabet size");
    gen->add_option("--clones", gen_cfg.clones, "mutated copies per base graph");
    gen->add_option("--mutations", gen_cfg.mutations_per_clone, "edit operations per clone");
    gen->add_option("--seed", gen_cfg.rng_seed, "random seed");

    auto* bench = app.add_subcommand("bench", "run a workload over a threshold range");
    std::string bench_db, bench_index, bench_queries, bench_range, bench_stats;
    bench->add_option("--db", bench_db, "graph database file")->required();
    bench->add_option("--index", bench_index, "index file")->required();
    bench->add_option("--queries", bench_queries, "query graph file")->required();
    bench->add_option("--tau-range", bench_range, "thresholds to run, as A..B")->required();
    bench->add_option("--stats", bench_stats, "write the run report to this file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed()) {
            return cmd_build(build_db, build_out, build_tau, build_threads, build_budget,
                             build_verify);
        }
        if (query->parsed()) {
            return cmd_query(query_db, query_index, query_queries, query_tau, query_no_index,
                             query_stats);
        }
        if (ged->parsed()) {
            return cmd_ged(ged_db, ged_g1, ged_g2, ged_tau);
        }
        if (gen->parsed()) {
            return cmd_gen(gen_out, gen_cfg);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_db, bench_index, bench_queries, bench_range, bench_stats);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
