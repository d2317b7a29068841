#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kmatch/generate.hpp"
#include "kmatch/graph.hpp"
#include "kmatch/oracle.hpp"
#include "kmatch/report.hpp"
#include "kmatch/unweighted.hpp"
#include "kmatch/weighted.hpp"

namespace {

using namespace kmatch;

constexpr int kExitFound = 0;
constexpr int kExitNoMatching = 1;
constexpr int kExitUsage = 2;
constexpr int kExitHashFailure = 3;

struct CommonOpts {
    std::size_t k = 1;
    std::uint64_t seed = 0;
    double epsilon = 0x1p-20;
    bool paper_epsilon = false;
    bool deterministic = false;
    bool no_verify_input = false;
    bool stats_only = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_k = true) {
    if (with_k) cmd->add_option("--k", o.k, "matching size target")->required();
    cmd->add_option("--seed", o.seed, "seed for the randomized hash choices");
    cmd->add_option("--epsilon", o.epsilon, "per-build hash failure bound")
        ->check(CLI::Range(1e-300, 0.999999));
    cmd->add_flag("--paper-epsilon", o.paper_epsilon, "use the k-dependent epsilon schedule");
    cmd->add_flag("--deterministic", o.deterministic, "ordered-structure membership, no hashing");
    cmd->add_flag("--no-verify-input", o.no_verify_input, "skip input symmetry validation");
    cmd->add_flag("--stats-only", o.stats_only, "omit the edge list from the report");
}

RunConfig to_config(const CommonOpts& o) {
    RunConfig cfg;
    cfg.deterministic = o.deterministic;
    cfg.seed = o.seed;
    cfg.epsilon = o.epsilon;
    cfg.paper_epsilon = o.paper_epsilon;
    return cfg;
}

LoadOptions load_opts(const CommonOpts& o) {
    LoadOptions lo;
    lo.verify = o.no_verify_input ? InputVerify::kOff : InputVerify::kAuto;
    return lo;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int run_pipeline(const std::string& path, const CommonOpts& o, bool weighted_cmd) {
    AdjacencyGraph g = AdjacencyGraph::load_file(path, load_opts(o));
    if (weighted_cmd && !g.weighted()) {
        std::cerr << "wgm needs a weighted input file\n";
        return kExitUsage;
    }
    RunConfig cfg = to_config(o);
    ResourceMeter meter;
    RunReport rep;
    rep.command = weighted_cmd ? "wgm" : "ugm";
    rep.input = path;
    rep.k = o.k;
    rep.weighted = weighted_cmd;
    rep.deterministic = o.deterministic;
    rep.seed = o.seed;
    rep.epsilon = epsilon_text(cfg, o.k, weighted_cmd);
    rep.rounds = injectivity_rounds(cfg, o.k, weighted_cmd);

    auto t0 = std::chrono::steady_clock::now();
    if (weighted_cmd) {
        WgmResult r = max_weight_k_matching(g, o.k, cfg, meter);
        rep.hash_failure = r.hash_failure;
        rep.branch = r.branch;
        rep.hash_stats = r.hash_stats;
        if (r.matching) {
            rep.found = true;
            rep.edges = r.matching->edges;
            rep.total_weight = r.matching->total;
        }
    } else {
        UgmResult r = find_k_matching(g, o.k, cfg, meter);
        rep.hash_failure = r.hash_failure;
        rep.branch = r.branch;
        rep.hash_stats = r.hash_stats;
        if (r.matching) {
            rep.found = true;
            rep.edges = r.matching->edges;
        }
    }
    rep.wall_ms = ms_since(t0);
    rep.peak_workspace_words = meter.peak_workspace_words();
    rep.full_passes = meter.full_passes();
    rep.random_reads = meter.random_reads();
    write_report(std::cout, rep, o.stats_only);
    if (rep.hash_failure) {
        std::cerr << "injective hash construction failed after " << rep.rounds
                  << " rounds; rerun with another --seed or --deterministic\n";
        return kExitHashFailure;
    }
    return rep.found ? kExitFound : kExitNoMatching;
}

// Emits a graph file that preserves the k-matching answer: the reduced
// subgraph for weighted inputs, the kernel (or the already-constructed
// matching when a shortcut branch fires) for unweighted ones. Dense ids, with
// `# map` comments carrying the original ids.
int run_reduce(const std::string& path, const std::string& out_path, const CommonOpts& o) {
    AdjacencyGraph g = AdjacencyGraph::load_file(path, load_opts(o));
    RunConfig cfg = to_config(o);
    ResourceMeter meter;
    Rng rng(cfg.seed);

    std::vector<std::pair<VertexId, VertexId>> edges;
    std::vector<Weight> weights;
    std::vector<VertexId> mapping;  // dense -> original
    Branch branch = Branch::kNone;

    if (g.weighted()) {
        std::uint32_t rounds = injectivity_rounds(cfg, o.k, true);
        HashBuildStats stats;
        auto bs = build_bounding_set(g, o.k, cfg, rounds, rng, meter, &stats);
        if (!bs) {
            std::cerr << "hash failure during reduction; rerun with another --seed\n";
            return kExitHashFailure;
        }
        ReducedSubgraph rs = reduce_subgraph(g, o.k, *bs, meter);
        branch = rs.branch;
        WeightedKernel kernel = assemble_weighted_kernel(rs, o.k, meter);
        edges = kernel.kg.edges;
        weights = kernel.kg.weights;
        mapping.assign(kernel.original_ids.begin(), kernel.original_ids.end());
    } else {
        UgmResult r = find_k_matching(g, o.k, cfg, meter);
        if (r.hash_failure) {
            std::cerr << "hash failure during reduction; rerun with another --seed\n";
            return kExitHashFailure;
        }
        branch = r.branch;
        if (r.branch == Branch::kUgmStep5) {
            // rebuild the kernel explicitly (find_k_matching consumed it)
            Rng rng2(cfg.seed);
            std::uint32_t rounds = injectivity_rounds(cfg, o.k, false);
            ResourceMeter m2;
            LargeSet large = collect_large_vertices(g, o.k, m2);
            Workspace<KeyPayload> keys(m2, large.h());
            for (VertexId v : large.ids) keys.push_back({v, 0});
            HashBuildStats stats;
            auto is_large = MembershipSet::build(
                m2, cfg.deterministic, {keys.data(), keys.size()},
                std::max<std::uint64_t>(1, large.h() * large.h()), rounds, rng2, &stats);
            if (!is_large) return kExitHashFailure;
            HReducedParts parts = build_h_reduced(g, o.k, large, *is_large, m2);
            UnweightedKernel kernel = assemble_unweighted_kernel(parts, *is_large, o.k, large.h(), m2);
            edges = kernel.kg.edges;
            mapping.assign(kernel.original_ids.begin(), kernel.original_ids.end());
        } else if (r.matching) {
            // shortcut branches already hold a k-matching; emit it as the
            // (trivially equivalent) reduced artifact
            for (const Edge& e : r.matching->edges) {
                mapping.push_back(e.lo);
                mapping.push_back(e.hi);
            }
            std::sort(mapping.begin(), mapping.end());
            auto dense = [&](VertexId v) {
                return static_cast<VertexId>(
                    std::lower_bound(mapping.begin(), mapping.end(), v) - mapping.begin());
            };
            for (const Edge& e : r.matching->edges) edges.push_back({dense(e.lo), dense(e.hi)});
        }
    }

    AdjacencyGraph out = AdjacencyGraph::from_edges(
        mapping.size(), edges, g.weighted() ? std::span<const Weight>(weights) : std::span<const Weight>{});
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        std::cerr << "cannot write '" << out_path << "'\n";
        return kExitUsage;
    }
    os << "# reduced from " << path << " at k=" << o.k << " via " << branch_name(branch) << '\n';
    for (std::size_t i = 0; i < mapping.size(); ++i) os << "# map " << i << ' ' << mapping[i] << '\n';
    out.dump_text(os);
    return kExitFound;
}

int run_gen(const std::string& family, std::size_t n, double p, std::size_t count, std::size_t degree,
            std::size_t m, bool weighted, Weight wmin, Weight wmax, std::uint64_t seed,
            const std::string& out_path, const std::string& format) {
    std::optional<WeightRange> wr;
    if (weighted) wr = WeightRange{wmin, wmax};
    AdjacencyGraph g = [&] {
        if (family == "erdos-renyi") return gen_erdos_renyi(n, p, seed, wr);
        if (family == "planted") return gen_planted_large(n, count, degree, seed, wr);
        if (family == "disjoint-edges") return gen_disjoint_edges(m, seed, wr);
        throw CLI::ValidationError("unknown family '" + family + "'");
    }();
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        std::cerr << "cannot write '" << out_path << "'\n";
        return kExitUsage;
    }
    if (format == "binary")
        g.dump_binary(os);
    else
        g.dump_text(os);
    std::cout << "wrote " << out_path << ": n=" << g.vertex_count() << " m=" << g.edge_count()
              << (g.weighted() ? " weighted" : " unweighted") << '\n';
    return kExitFound;
}

std::vector<Edge> parse_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open solution file '" + path + "'");
    std::vector<Edge> edges;
    std::string tok;
    while (in >> tok) {
        auto dash = tok.find('-');
        if (dash == std::string::npos || dash == 0) continue;
        try {
            VertexId a = static_cast<VertexId>(std::stoull(tok.substr(0, dash)));
            VertexId b = static_cast<VertexId>(std::stoull(tok.substr(dash + 1)));
            edges.push_back(make_edge(a, b));
        } catch (...) {
            continue;  // not an edge token
        }
    }
    return edges;
}

int run_verify(const std::string& path, const CommonOpts& o, const std::string& solution) {
    AdjacencyGraph g = AdjacencyGraph::load_file(path, load_opts(o));
    if (!solution.empty()) {
        std::vector<Edge> edges = parse_solution(solution);
        std::string err = check_k_matching(g, edges, o.k);
        if (!err.empty()) {
            std::cout << "verify: INVALID (" << err << ")\n";
            return kExitNoMatching;
        }
        if (g.weighted()) {
            Weight total = 0;
            for (const Edge& e : edges) total += g.find_edge_weight(e.lo, e.hi).value();
            auto best = oracle::max_weight_k_matching(g, o.k);
            std::cout << "verify: valid " << o.k << "-matching, weight " << total;
            if (best.best_weight) {
                std::cout << (total == *best.best_weight ? " (optimal)" : " (oracle optimum is ");
                if (total != *best.best_weight) std::cout << *best.best_weight << ")";
            }
            std::cout << '\n';
            if (best.best_weight && total != *best.best_weight) return kExitNoMatching;
        } else {
            std::cout << "verify: valid " << o.k << "-matching\n";
        }
        return kExitFound;
    }
    // no solution file: cross-check the pipeline answer against the oracle
    RunConfig cfg = to_config(o);
    ResourceMeter meter;
    bool pipeline_exists;
    std::optional<Weight> pipeline_weight;
    if (g.weighted()) {
        WgmResult r = max_weight_k_matching(g, o.k, cfg, meter);
        if (r.hash_failure) return kExitHashFailure;
        pipeline_exists = r.matching.has_value();
        if (r.matching) pipeline_weight = r.matching->total;
    } else {
        UgmResult r = find_k_matching(g, o.k, cfg, meter);
        if (r.hash_failure) return kExitHashFailure;
        pipeline_exists = r.matching.has_value();
    }
    bool ok;
    if (g.weighted()) {
        auto best = oracle::max_weight_k_matching(g, o.k);
        ok = best.exists == pipeline_exists &&
             (!pipeline_exists || *pipeline_weight == *best.best_weight);
        std::cout << "verify: pipeline " << (pipeline_exists ? "found" : "reported none")
                  << ", oracle " << (best.exists ? "found" : "none");
        if (best.exists && pipeline_weight)
            std::cout << ", weights " << *pipeline_weight << "/" << *best.best_weight;
        std::cout << (ok ? " -- AGREE\n" : " -- MISMATCH\n");
    } else {
        bool oracle_exists = oracle::k_matching_exists(g, o.k);
        ok = oracle_exists == pipeline_exists;
        std::cout << "verify: pipeline " << (pipeline_exists ? "found" : "reported none")
                  << ", oracle " << (oracle_exists ? "exists" : "none")
                  << (ok ? " -- AGREE\n" : " -- MISMATCH\n");
    }
    return ok ? kExitFound : kExitNoMatching;
}

int run_bench(std::size_t k, const std::string& sizes_csv, bool weighted, std::uint64_t seed) {
    std::vector<std::uint64_t> sizes;
    std::stringstream ss(sizes_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) sizes.push_back(static_cast<std::uint64_t>(std::stod(tok)));
    }
    if (sizes.empty()) {
        std::cerr << "--sizes needs a comma-separated list, e.g. 1e4,1e5,1e6\n";
        return kExitUsage;
    }
    std::cout << "kmatch-bench v1\n";
    std::cout << "pipeline: " << (weighted ? "wgm" : "ugm") << "  k: " << k << "  seed: " << seed
              << '\n';
    std::cout << "size_words n m branch peak_words peak/k^2 passes wall_ms\n";
    RunConfig cfg;
    cfg.seed = seed;
    std::uint64_t first_peak = 0;
    bool identical = true;
    double cmax = 0.0;
    for (std::uint64_t target : sizes) {
        AdjacencyGraph g = weighted ? gen_bench_weighted(k, target, seed)
                                    : gen_bench_unweighted(k, target, seed);
        ResourceMeter meter;
        auto t0 = std::chrono::steady_clock::now();
        Branch branch;
        bool ok;
        if (weighted) {
            WgmResult r = max_weight_k_matching(g, k, cfg, meter);
            if (r.hash_failure) return kExitHashFailure;
            branch = r.branch;
            ok = r.matching.has_value();
        } else {
            UgmResult r = find_k_matching(g, k, cfg, meter);
            if (r.hash_failure) return kExitHashFailure;
            branch = r.branch;
            ok = r.matching.has_value();
        }
        double wall = ms_since(t0);
        std::uint64_t peak = meter.peak_workspace_words();
        double c = static_cast<double>(peak) / (static_cast<double>(k) * k);
        cmax = std::max(cmax, c);
        if (first_peak == 0)
            first_peak = peak;
        else if (peak != first_peak)
            identical = false;
        std::cout << g.size_words() << ' ' << g.vertex_count() << ' ' << g.edge_count() << ' '
                  << branch_name(branch) << ' ' << peak << ' ' << c << ' ' << meter.full_passes()
                  << ' ' << wall << (ok ? "" : " (no matching!)") << '\n';
    }
    std::cout << "fitted-c: " << cmax << '\n';
    std::cout << "identical-peaks: " << (identical ? "yes" : "no") << '\n';
    return identical ? kExitFound : kExitNoMatching;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bounded-workspace k-matching toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph file");
    std::string family, gen_out, gen_format = "text";
    std::size_t gen_n = 0, gen_count = 0, gen_degree = 0, gen_m = 0;
    double gen_p = 0.0;
    bool gen_weighted = false;
    Weight gen_wmin = 1, gen_wmax = 100;
    std::uint64_t gen_seed = 0;
    gen->add_option("family", family, "erdos-renyi | planted | disjoint-edges")->required();
    gen->add_option("-o,--out", gen_out, "output path")->required();
    gen->add_option("--n", gen_n, "vertex count");
    gen->add_option("--p", gen_p, "edge probability (erdos-renyi)");
    gen->add_option("--count", gen_count, "hub count (planted)");
    gen->add_option("--degree", gen_degree, "hub degree (planted)");
    gen->add_option("--m", gen_m, "edge count (disjoint-edges)");
    gen->add_flag("--weighted", gen_weighted, "draw integer weights");
    gen->add_option("--wmin", gen_wmin, "minimum weight");
    gen->add_option("--wmax", gen_wmax, "maximum weight");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--format", gen_format, "text | binary")
        ->check(CLI::IsMember({"text", "binary"}));

    // ugm / wgm
    auto* ugm = app.add_subcommand("ugm", "find a k-matching in an unweighted graph");
    auto* wgm = app.add_subcommand("wgm", "find a maximum-weight k-matching");
    std::string ugm_file, wgm_file;
    CommonOpts ugm_opts, wgm_opts;
    ugm->add_option("file", ugm_file, "input graph")->required();
    add_common(ugm, ugm_opts);
    wgm->add_option("file", wgm_file, "input graph")->required();
    add_common(wgm, wgm_opts);

    // reduce
    auto* reduce = app.add_subcommand("reduce", "emit the kernel as a graph file");
    std::string red_file, red_out;
    CommonOpts red_opts;
    reduce->add_option("file", red_file, "input graph")->required();
    reduce->add_option("-o,--out", red_out, "output path")->required();
    add_common(reduce, red_opts);

    // verify
    auto* verify = app.add_subcommand("verify", "oracle cross-check a run or a solution file");
    std::string ver_file, ver_solution;
    CommonOpts ver_opts;
    verify->add_option("file", ver_file, "input graph")->required();
    verify->add_option("--solution", ver_solution, "report or edge-list file to validate");
    add_common(verify, ver_opts);

    // bench
    auto* bench = app.add_subcommand("bench", "sweep input sizes at fixed k");
    std::size_t bench_k = 8;
    std::string bench_sizes = "1e4,1e5,1e6";
    bool bench_weighted = false;
    std::uint64_t bench_seed = 0;
    bench->add_option("--k", bench_k, "matching size target")->required();
    bench->add_option("--sizes", bench_sizes, "comma-separated word counts");
    bench->add_flag("--weighted", bench_weighted, "run the weighted pipeline");
    bench->add_option("--seed", bench_seed, "seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_gen(family, gen_n, gen_p, gen_count, gen_degree, gen_m, gen_weighted, gen_wmin,
                           gen_wmax, gen_seed, gen_out, gen_format);
        if (ugm->parsed()) return run_pipeline(ugm_file, ugm_opts, false);
        if (wgm->parsed()) return run_pipeline(wgm_file, wgm_opts, true);
        if (reduce->parsed()) return run_reduce(red_file, red_out, red_opts);
        if (verify->parsed()) return run_verify(ver_file, ver_opts, ver_solution);
        if (bench->parsed()) return run_bench(bench_k, bench_sizes, bench_weighted, bench_seed);
    } catch (const GraphFormatError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
