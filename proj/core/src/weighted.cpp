#include "kmatch/weighted.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace kmatch {

namespace {

struct TbLess {
    bool operator()(const TieBreakWeight& a, const TieBreakWeight& b) const { return a < b; }
};

struct EntryLess {
    bool operator()(const BoundingEntry& a, const BoundingEntry& b) const {
        // keys alone can tie when two vertices share their 8k-th edge; the
        // vertex id makes the order strict
        if (a.e8k != b.e8k) return a.e8k < b.e8k;
        return a.v < b.v;
    }
};

}  // namespace

TieBreakWeight e8k_value(const AdjacencyGraph& g, VertexId v, std::size_t k, ResourceMeter& meter) {
    std::size_t threshold = 8 * k;
    if (g.degree(v) < threshold) return TieBreakWeight::neg_inf();
    TopKBuffer<TieBreakWeight, TbLess> buf(meter, threshold, threshold);
    for (std::size_t i = 0; i < g.degree(v); ++i) buf.push(tiebreak(g, v, i));
    auto top = buf.finish();
    return *std::min_element(top.begin(), top.end());
}

std::optional<BoundingSet> build_bounding_set(const AdjacencyGraph& g, std::size_t k,
                                              const RunConfig& cfg, std::uint32_t rounds, Rng& rng,
                                              ResourceMeter& meter, HashBuildStats* stats) {
    const std::size_t threshold = 8 * k;

    // Streaming selection over vertices keyed by e8k value. Each candidate
    // carries its full bounding list; the footprint below covers the worst
    // case of 16k live lists of 8k two-word edges each.
    MeterCharge list_charge(meter, (2ull * threshold) * (2ull * threshold));
    TopKBuffer<BoundingEntry, EntryLess> vertex_sel(meter, threshold, threshold);
    TopKBuffer<TieBreakWeight, TbLess> edge_buf(meter, threshold, threshold);

    meter.note_full_pass();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        std::size_t deg = g.degree(v);
        if (deg < threshold) continue;
        edge_buf.clear();
        for (std::size_t i = 0; i < deg; ++i) edge_buf.push(tiebreak(g, v, i));
        auto top = edge_buf.finish();
        BoundingEntry entry;
        entry.v = v;
        entry.list.assign(top.begin(), top.end());
        std::sort(entry.list.begin(), entry.list.end(), std::greater<>());
        entry.e8k = entry.list.back();  // the 8k-th heaviest
        vertex_sel.push(std::move(entry));
    }

    BoundingSet bs;
    auto survivors = vertex_sel.finish();
    bs.members.assign(std::make_move_iterator(survivors.begin()),
                      std::make_move_iterator(survivors.end()));
    std::sort(bs.members.begin(), bs.members.end(),
              [](const BoundingEntry& a, const BoundingEntry& b) { return a.v < b.v; });
    // the kept members' lists plus the per-member record
    bs.footprint = MeterCharge(meter, bs.members.size() * (2ull * threshold + 3));

    std::vector<KeyPayload> keys;
    keys.reserve(bs.members.size());
    for (std::size_t i = 0; i < bs.members.size(); ++i) keys.push_back({bs.members[i].v, i});
    auto lookup = MembershipSet::build(meter, cfg.deterministic, keys,
                                       static_cast<std::uint64_t>(threshold) * threshold, rounds, rng,
                                       stats);
    if (!lookup) return std::nullopt;
    bs.lookup = std::move(*lookup);
    return bs;
}

bool edge_in_trimmed(const BoundingSet& bs, const TieBreakWeight& e, VertexId list_owner) {
    VertexId other = (e.lo == list_owner) ? e.hi : e.lo;
    auto idx = bs.index_of(other);
    if (!idx) return true;  // outside the set: its 8k-th value can only be lower
    return e >= bs.members[*idx].e8k;
}

ReducedSubgraph reduce_subgraph(const AdjacencyGraph& g, std::size_t k, const BoundingSet& bs,
                                ResourceMeter& meter) {
    const std::size_t threshold = 8 * k;
    const std::size_t edge_cap = k * (16 * k - 1);
    TopKBuffer<TieBreakWeight, TbLess> er(meter, edge_cap, k * k);

    // step 3: bounding-list edges that lie in the trimmed subgraph, edges
    // between two members deduplicated by the lower endpoint
    for (const BoundingEntry& member : bs.members) {
        for (const TieBreakWeight& e : member.list) {
            VertexId other = (e.lo == member.v) ? e.hi : e.lo;
            if (bs.index_of(other)) {
                if (member.v < other && edge_in_trimmed(bs, e, member.v)) er.push(e);
            } else {
                er.push(e);
            }
        }
    }

    ReducedSubgraph rs{Workspace<TieBreakWeight>(meter, edge_cap), Branch::kRsubgStep4, std::nullopt,
                       er.pushed()};
    bool cap_hit = rs.step3_count >= edge_cap;
    if (bs.members.size() == threshold) {
        // a saturated bounding set always overflows the cap
        assert(rs.step3_count > edge_cap);
        if (rs.step3_count <= edge_cap)
            throw std::logic_error("saturated bounding set produced too few candidate edges");
    }

    if (!cap_hit) {
        // step 4: second pass over all vertices outside the set; every edge
        // with both ends outside is eligible, keep the heaviest
        rs.branch = Branch::kRsubgStep4;
        meter.note_full_pass();
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (bs.index_of(v)) continue;
            auto ns = g.neighbors(v);
            for (std::size_t i = 0; i < ns.size(); ++i) {
                VertexId w = ns[i];
                if (v < w && !bs.index_of(w)) er.push(tiebreak(g, v, i));
            }
        }
    } else {
        // step 5: trim to the cap, record the cut threshold, then admit only
        // edges at least that heavy (all of which are in the trimmed graph)
        rs.branch = Branch::kRsubgStep5;
        auto kept = er.finish();
        assert(kept.size() == edge_cap);
        TieBreakWeight m0 = *std::min_element(kept.begin(), kept.end());
        rs.m0 = m0;
        meter.note_full_pass();
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (bs.index_of(v)) continue;
            auto ns = g.neighbors(v);
            for (std::size_t i = 0; i < ns.size(); ++i) {
                VertexId w = ns[i];
                if (v >= w || bs.index_of(w)) continue;
                TieBreakWeight t = tiebreak(g, v, i);
                if (t >= m0) er.push(t);
            }
        }
    }

    auto fin = er.finish();
    for (const TieBreakWeight& t : fin) rs.edges.push_back(t);
    std::sort(rs.edges.begin(), rs.edges.end(), std::greater<>());  // canonical order
    return rs;
}

WeightedKernel assemble_weighted_kernel(const ReducedSubgraph& rs, std::size_t k, ResourceMeter& meter) {
    std::size_t edge_cap = k * (16 * k - 1);
    Workspace<VertexId> ids(meter, 2 * edge_cap);
    for (const TieBreakWeight& t : rs.edges) {
        ids.push_back(t.lo);
        ids.push_back(t.hi);
    }
    std::sort(ids.begin(), ids.end());
    ids.truncate(static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin()));

    WeightedKernel out{KernelGraph{}, std::move(ids)};
    out.kg.n = static_cast<std::uint32_t>(out.original_ids.size());
    out.kg.edges.reserve(rs.edges.size());
    out.kg.weights.reserve(rs.edges.size());
    auto dense = [&](VertexId v) {
        auto it = std::lower_bound(out.original_ids.begin(), out.original_ids.end(), v);
        return static_cast<std::uint32_t>(it - out.original_ids.begin());
    };
    for (const TieBreakWeight& t : rs.edges) {
        out.kg.edges.push_back({dense(t.lo), dense(t.hi)});
        out.kg.weights.push_back(t.wt);
    }
    return out;
}

WgmResult max_weight_k_matching(const AdjacencyGraph& g, std::size_t k, const RunConfig& cfg,
                                ResourceMeter& meter) {
    WgmResult res;
    if (k == 0) {
        res.matching = WeightedMatching{};
        return res;
    }
    Rng rng(cfg.seed);
    std::uint32_t rounds = injectivity_rounds(cfg, k, /*weighted=*/true);

    auto bs = build_bounding_set(g, k, cfg, rounds, rng, meter, &res.hash_stats);
    if (!bs) {
        res.hash_failure = true;
        return res;
    }
    ReducedSubgraph rs = reduce_subgraph(g, k, *bs, meter);
    res.branch = rs.branch;
    WeightedKernel kernel = assemble_weighted_kernel(rs, k, meter);

    WeightedPhaseResult pr = max_weight_k_matching_kernel(kernel.kg, k, &meter);
    if (!pr.reached_k) return res;  // proven: no k-matching

    WeightedMatching wm;
    for (std::size_t i = 0; i < pr.matching.edges.size(); ++i) {
        const Edge& e = pr.matching.edges[i];
        wm.edges.push_back(make_edge(kernel.original_ids[e.lo], kernel.original_ids[e.hi]));
        wm.weights.push_back(pr.matching.weights[i]);
        wm.total += pr.matching.weights[i];
    }
    wm.normalize();

    std::string err = check_k_matching(g, wm.edges, k, &meter);
    if (!err.empty()) throw std::logic_error("wgm produced an invalid matching: " + err);
    for (std::size_t i = 0; i < wm.edges.size(); ++i) {
        Weight actual = g.find_edge_weight(wm.edges[i].lo, wm.edges[i].hi).value();
        if (actual != wm.weights[i]) throw std::logic_error("wgm weight mismatch against the store");
    }
    res.matching = std::move(wm);
    return res;
}

}  // namespace kmatch
