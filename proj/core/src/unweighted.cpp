#include "kmatch/unweighted.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace kmatch {

namespace {

// Shared step of Lemma-2.1 style extension: for each large vertex, probe its
// neighbor list for a vertex outside `excluded`, add the edge, and grow the
// exclusion set. The probe is guaranteed to succeed within 2k-1 neighbors.
bool extend_with_large(const AdjacencyGraph& g, std::span<const VertexId> larges, std::size_t k,
                       MembershipSet& excluded, std::uint32_t rounds, Rng& rng, ResourceMeter& meter,
                       HashBuildStats* stats, Matching& out) {
    for (VertexId v : larges) {
        bool found = false;
        std::size_t probes = 0;
        for (VertexId w : g.neighbors(v)) {
            ++probes;
            if (!excluded.contains(w)) {
                if (!excluded.insert(w, 0, rounds, rng, stats)) return false;
                out.edges.push_back(make_edge(v, w));
                found = true;
                break;
            }
        }
        meter.note_random_reads(probes);
        assert(found && probes <= 2 * k - 1 && "a large vertex always has a free neighbor");
        if (!found) throw std::logic_error("large-vertex extension failed");
    }
    return true;
}

}  // namespace

LargeSet collect_large_vertices(const AdjacencyGraph& g, std::size_t k, ResourceMeter& meter) {
    LargeSet out{Workspace<VertexId>(meter, k), false};
    meter.note_full_pass();  // the degree-collection phase counts as a pass
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) >= 2 * k) {
            out.ids.push_back(v);
            if (out.ids.size() == k) break;
        }
    }
    out.saturated = (out.ids.size() == k);
    return out;
}

std::optional<Matching> matching_from_large(const AdjacencyGraph& g, const LargeSet& large,
                                            const RunConfig& cfg, std::uint32_t rounds, Rng& rng,
                                            ResourceMeter& meter, HashBuildStats* stats) {
    std::size_t k = large.h();
    assert(large.saturated);
    // exclusion set Q starts as the k large vertices and grows by one matched
    // partner per step, so it holds at most 2k keys
    Workspace<KeyPayload> seed_keys(meter, k);
    for (VertexId v : large.ids) seed_keys.push_back({v, 0});
    auto q = MembershipSet::build(meter, cfg.deterministic, {seed_keys.data(), seed_keys.size()},
                                  4 * k * k, rounds, rng, stats, k);
    if (!q) return std::nullopt;
    meter.note_full_pass();  // re-scan of the chosen lists
    Matching m;
    m.edges.reserve(k);
    if (!extend_with_large(g, {large.ids.data(), large.ids.size()}, k, *q, rounds, rng, meter, stats, m))
        return std::nullopt;
    m.normalize();
    return m;
}

HReducedParts build_h_reduced(const AdjacencyGraph& g, std::size_t k, const LargeSet& large,
                              const MembershipSet& is_large, ResourceMeter& meter) {
    std::size_t h = large.h();
    assert(h < k);
    std::size_t cap = (4 * k - 3) * (k - h);
    HReducedParts parts{Workspace<Edge>(meter, 2 * k * h), Workspace<Edge>(meter, cap), false};

    // per-large-vertex buffers: all large neighbors (< k) and up to 2k small
    // candidates, of which the first 2k - (large neighbor count) are kept
    Workspace<VertexId> large_nbrs(meter, k);
    Workspace<VertexId> small_cands(meter, 2 * k);

    meter.note_full_pass();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (is_large.contains(v)) {
            large_nbrs.clear();
            small_cands.clear();
            for (VertexId w : g.neighbors(v)) {
                if (is_large.contains(w)) {
                    large_nbrs.push_back(w);
                } else if (small_cands.size() < 2 * k) {
                    small_cands.push_back(w);
                }
            }
            assert(large_nbrs.size() < k);
            std::size_t small_keep = 2 * k - large_nbrs.size();
            assert(small_cands.size() >= small_keep && "large vertices have degree >= 2k");
            for (VertexId w : large_nbrs) parts.retained.push_back({v, w});
            for (std::size_t i = 0; i < small_keep; ++i) parts.retained.push_back({v, small_cands[i]});
        } else {
            // small vertex: record small-small edges from the lower end only;
            // edges into large vertices are the large side's responsibility
            for (VertexId w : g.neighbors(v)) {
                if (v < w && !is_large.contains(w)) {
                    parts.small_edges.push_back(make_edge(v, w));
                    if (parts.small_edges.size() == cap) {
                        parts.cap_reached = true;
                        return parts;
                    }
                }
            }
        }
    }
    return parts;
}

std::optional<Matching> matching_from_cap(const AdjacencyGraph& g, std::size_t k, const LargeSet& large,
                                          std::span<const Edge> small_edges, const RunConfig& cfg,
                                          std::uint32_t rounds, Rng& rng, ResourceMeter& meter,
                                          HashBuildStats* stats) {
    std::size_t h = large.h();
    assert(small_edges.size() == (4 * k - 3) * (k - h));
    // exclusion set: large vertices, endpoints of picked small edges, and the
    // partners matched in the extension step; at most 2k keys
    Workspace<KeyPayload> seed_keys(meter, h);
    for (VertexId v : large.ids) seed_keys.push_back({v, 0});
    auto excluded = MembershipSet::build(meter, cfg.deterministic, {seed_keys.data(), seed_keys.size()},
                                         4 * k * k, rounds, rng, stats, 2 * k - h);
    if (!excluded) return std::nullopt;

    Matching m;
    m.edges.reserve(k);
    // greedy: each pick disqualifies at most 4k-4 other small edges, and the
    // cap supplies (4k-3)(k-h) of them, so k-h picks always succeed
    for (const Edge& e : small_edges) {
        if (m.size() == k - h) break;
        if (!excluded->contains(e.lo) && !excluded->contains(e.hi)) {
            if (!excluded->insert(e.lo, 0, rounds, rng, stats)) return std::nullopt;
            if (!excluded->insert(e.hi, 0, rounds, rng, stats)) return std::nullopt;
            m.edges.push_back(e);
        }
    }
    assert(m.size() == k - h && "the small-edge cap guarantees k-h disjoint picks");
    if (m.size() != k - h) throw std::logic_error("small-edge greedy fell short");
    if (!extend_with_large(g, {large.ids.data(), large.ids.size()}, k, *excluded, rounds, rng, meter,
                           stats, m))
        return std::nullopt;
    m.normalize();
    return m;
}

UnweightedKernel assemble_unweighted_kernel(const HReducedParts& parts, const MembershipSet& is_large,
                                            std::size_t k, std::size_t h, ResourceMeter& meter) {
    std::size_t edge_cap = 2 * k * h + (4 * k - 3) * (k - h);
    Workspace<Edge> edges(meter, edge_cap);
    for (const Edge& e : parts.small_edges) edges.push_back(e);
    for (std::size_t i = 0; i < parts.retained.size(); ++i) {
        // retained entries are (large vertex, neighbor); a large-large edge
        // appears in both lists, so keep it from its lower end only
        const Edge& d = parts.retained[i];
        if (is_large.contains(d.hi) && d.lo > d.hi) continue;
        edges.push_back(make_edge(d.lo, d.hi));
    }

    // dense renaming over the kernel's vertices (sorted original ids)
    Workspace<VertexId> ids(meter, 2 * edge_cap);
    for (const Edge& e : edges) {
        ids.push_back(e.lo);
        ids.push_back(e.hi);
    }
    std::sort(ids.begin(), ids.end());
    ids.truncate(static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin()));

    UnweightedKernel out{KernelGraph{}, std::move(ids)};
    out.kg.n = static_cast<std::uint32_t>(out.original_ids.size());
    out.kg.edges.reserve(edges.size());
    auto dense = [&](VertexId v) {
        auto it = std::lower_bound(out.original_ids.begin(), out.original_ids.end(), v);
        return static_cast<std::uint32_t>(it - out.original_ids.begin());
    };
    for (const Edge& e : edges) out.kg.edges.push_back({dense(e.lo), dense(e.hi)});
    return out;
}

UgmResult find_k_matching(const AdjacencyGraph& g, std::size_t k, const RunConfig& cfg,
                          ResourceMeter& meter) {
    UgmResult res;
    if (k == 0) {
        res.matching = Matching{};
        return res;
    }
    Rng rng(cfg.seed);
    std::uint32_t rounds = injectivity_rounds(cfg, k, /*weighted=*/false);

    LargeSet large = collect_large_vertices(g, k, meter);

    if (large.saturated) {
        res.branch = Branch::kUgmStep2;
        auto m = matching_from_large(g, large, cfg, rounds, rng, meter, &res.hash_stats);
        if (!m) {
            res.hash_failure = true;
            return res;
        }
        res.matching = std::move(*m);
    } else {
        std::size_t h = large.h();
        Workspace<KeyPayload> keys(meter, h);
        for (VertexId v : large.ids) keys.push_back({v, 0});
        auto is_large = MembershipSet::build(meter, cfg.deterministic, {keys.data(), keys.size()},
                                             std::max<std::uint64_t>(1, h) * std::max<std::uint64_t>(1, h),
                                             rounds, rng, &res.hash_stats);
        if (!is_large) {
            res.hash_failure = true;
            return res;
        }
        HReducedParts parts = build_h_reduced(g, k, large, *is_large, meter);
        if (parts.cap_reached) {
            res.branch = Branch::kUgmStep4;
            auto m = matching_from_cap(g, k, large, {parts.small_edges.data(), parts.small_edges.size()},
                                       cfg, rounds, rng, meter, &res.hash_stats);
            if (!m) {
                res.hash_failure = true;
                return res;
            }
            res.matching = std::move(*m);
        } else {
            res.branch = Branch::kUgmStep5;
            UnweightedKernel kernel = assemble_unweighted_kernel(parts, *is_large, k, h, meter);
            auto km = best_match(kernel.kg, k, &meter);
            if (!km) return res;  // proven: no k-matching
            Matching m;
            for (const Edge& e : km->edges)
                m.edges.push_back(make_edge(kernel.original_ids[e.lo], kernel.original_ids[e.hi]));
            m.normalize();
            res.matching = std::move(m);
        }
    }

    if (res.matching) {
        std::string err = check_k_matching(g, res.matching->edges, k, &meter);
        if (!err.empty()) throw std::logic_error("ugm produced an invalid matching: " + err);
    }
    return res;
}

}  // namespace kmatch
