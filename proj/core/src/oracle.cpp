#include "kmatch/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <map>

namespace kmatch::oracle {

namespace {

std::vector<Edge> dedup_edges(const AdjacencyGraph& g) {
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (VertexId w : g.neighbors(v)) {
            if (v < w) edges.push_back({v, w});
        }
    }
    return edges;
}

struct ExistsSearch {
    const AdjacencyGraph& g;
    std::size_t need;
    std::vector<bool> used;

    bool search(VertexId v, std::size_t have) {
        if (have == need) return true;
        std::size_t n = g.vertex_count();
        // not enough vertices left to host the remaining edges
        if (v >= n || (n - v) < 2 * (need - have)) return false;
        if (used[v]) return search(v + 1, have);
        // match v with a later, unused neighbor; working on the lowest
        // uncovered vertex visits each matching exactly once
        for (VertexId w : g.neighbors(v)) {
            if (w > v && !used[w]) {
                used[v] = used[w] = true;
                bool ok = search(v + 1, have + 1);
                used[v] = used[w] = false;
                if (ok) return true;
            }
        }
        // or leave v uncovered
        return search(v + 1, have);
    }
};

}  // namespace

bool k_matching_exists(const AdjacencyGraph& g, std::size_t k) {
    if (k == 0) return true;
    if (g.vertex_count() > 32)
        throw InstanceTooLarge("existence oracle is exhaustive; vertex count capped at 32");
    if (2 * k > g.vertex_count()) return false;
    ExistsSearch s{g, k, std::vector<bool>(g.vertex_count(), false)};
    return s.search(0, 0);
}

std::size_t max_matching_size_dp(const AdjacencyGraph& g) {
    std::size_t n = g.vertex_count();
    if (n > 20) throw InstanceTooLarge("bitmask DP oracle capped at 20 vertices");
    std::vector<std::uint32_t> nbr(n, 0);
    for (VertexId v = 0; v < n; ++v) {
        for (VertexId w : g.neighbors(v)) nbr[v] |= 1u << w;
    }
    std::vector<std::int8_t> memo(std::size_t{1} << n, -1);
    memo[0] = 0;
    // dp over the set of still-available vertices
    auto dp = [&](auto&& self, std::uint32_t mask) -> std::int8_t {
        std::int8_t& m = memo[mask];
        if (m >= 0) return m;
        int v = std::countr_zero(mask);
        std::int8_t best = self(self, mask & (mask - 1));  // v stays unmatched
        std::uint32_t cands = nbr[v] & mask;
        while (cands) {
            int w = std::countr_zero(cands);
            cands &= cands - 1;
            best = std::max<std::int8_t>(
                best, static_cast<std::int8_t>(1 + self(self, mask & ~(1u << v) & ~(1u << w))));
        }
        return m = best;
    };
    if (n == 0) return 0;
    return static_cast<std::size_t>(dp(dp, (1u << n) - 1));
}

OracleResult max_weight_k_matching(const AdjacencyGraph& g, std::size_t k) {
    OracleResult res;
    if (k == 0) {
        res.exists = true;
        res.best_weight = 0;
        res.best_matching = std::vector<Edge>{};
        return res;
    }
    std::vector<Edge> edges = dedup_edges(g);
    if (edges.size() > 160 || k > 8)
        throw InstanceTooLarge("weighted oracle is exhaustive; capped at 160 edges, k <= 8");
    std::vector<Weight> wt(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
        wt[i] = g.find_edge_weight(edges[i].lo, edges[i].hi).value();
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return wt[a] > wt[b]; });

    // Since order[] is sorted descending, the best c weights available in the
    // suffix order[i..] are just the next c entries; prefix sums give the
    // optimistic bound in O(1).
    std::size_t m = edges.size();
    std::vector<Weight> prefix(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + wt[order[i]];
    auto optimistic = [&](std::size_t idx, std::size_t c) {
        return prefix[idx + c] - prefix[idx];  // callers guarantee idx + c <= m
    };

    std::vector<bool> used(g.vertex_count(), false);
    std::vector<Edge> picked;
    bool found = false;
    Weight best = 0;
    std::vector<Edge> best_edges;

    auto dfs = [&](auto&& self, std::size_t idx, std::size_t cnt, Weight acc) -> void {
        if (cnt == k) {
            if (!found || acc > best) {
                found = true;
                best = acc;
                best_edges = picked;
            }
            return;
        }
        if (m - idx < k - cnt) return;
        if (found && acc + optimistic(idx, k - cnt) <= best) return;
        // take order[idx] if its ends are free
        const Edge& e = edges[order[idx]];
        if (!used[e.lo] && !used[e.hi]) {
            used[e.lo] = used[e.hi] = true;
            picked.push_back(e);
            self(self, idx + 1, cnt + 1, acc + wt[order[idx]]);
            picked.pop_back();
            used[e.lo] = used[e.hi] = false;
        }
        self(self, idx + 1, cnt, acc);
    };
    dfs(dfs, 0, 0, 0);

    res.exists = found;
    if (found) {
        res.best_weight = best;
        std::sort(best_edges.begin(), best_edges.end());
        res.best_matching = std::move(best_edges);
    }
    return res;
}

namespace {

TieBreakWeight tb(const AdjacencyGraph& g, VertexId v, std::size_t i) {
    return TieBreakWeight::of(g.slot_weight(v, i), v, g.neighbors(v)[i]);
}

}  // namespace

std::vector<TieBreakWeight> materialize_trimmed_subgraph(const AdjacencyGraph& g, std::size_t k) {
    const std::size_t threshold = 8 * k;
    // definitional filter: an edge survives iff it ranks among the 8k
    // heaviest at both of its endpoints
    std::map<Edge, int> rank_ok;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        std::vector<TieBreakWeight> inc;
        for (std::size_t i = 0; i < g.degree(v); ++i) inc.push_back(tb(g, v, i));
        std::sort(inc.begin(), inc.end(), std::greater<>());
        std::size_t keep = std::min(inc.size(), threshold);
        for (std::size_t i = 0; i < keep; ++i) ++rank_ok[{inc[i].lo, inc[i].hi}];
    }
    std::vector<TieBreakWeight> definitional;
    for (auto& [e, cnt] : rank_ok) {
        assert(cnt <= 2);
        if (cnt == 2) definitional.push_back(TieBreakWeight::of(g.find_edge_weight(e.lo, e.hi).value(), e.lo, e.hi));
    }

    // sequential procedure: process large vertices by ascending 8k-th
    // heaviest incident weight, deleting all but the 8k heaviest each time
    std::map<Edge, TieBreakWeight> alive;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (std::size_t i = 0; i < g.degree(v); ++i) {
            TieBreakWeight t = tb(g, v, i);
            alive[{t.lo, t.hi}] = t;
        }
    }
    std::vector<std::pair<TieBreakWeight, VertexId>> large;  // (e8k value, v)
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) < threshold) continue;
        std::vector<TieBreakWeight> inc;
        for (std::size_t i = 0; i < g.degree(v); ++i) inc.push_back(tb(g, v, i));
        std::sort(inc.begin(), inc.end(), std::greater<>());
        large.push_back({inc[threshold - 1], v});
    }
    std::sort(large.begin(), large.end());
    for (auto& [e8k, v] : large) {
        std::vector<TieBreakWeight> inc;
        for (std::size_t i = 0; i < g.degree(v); ++i) {
            TieBreakWeight t = tb(g, v, i);
            if (alive.count({t.lo, t.hi})) inc.push_back(t);
        }
        std::sort(inc.begin(), inc.end(), std::greater<>());
        for (std::size_t i = threshold; i < inc.size(); ++i) alive.erase({inc[i].lo, inc[i].hi});
    }
    std::vector<TieBreakWeight> sequential;
    for (auto& [e, t] : alive) sequential.push_back(t);

    assert(sequential == definitional && "sequential trimming must equal the definitional filter");
    return sequential;
}

AdjacencyGraph materialize_h_reduced(const AdjacencyGraph& g, std::size_t k) {
    const std::size_t threshold = 2 * k;
    std::vector<bool> large(g.vertex_count(), false);
    std::size_t h = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) >= threshold) {
            large[v] = true;
            ++h;
        }
    }
    assert(h < k && "h-reduced graph is only defined for h < k");
    std::vector<std::pair<VertexId, VertexId>> kept;
    std::vector<Weight> kept_w;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto ns = g.neighbors(v);
        if (!large[v]) {
            // small-small edges are never deleted; record from the lower end
            for (VertexId w : ns) {
                if (!large[w] && v < w) {
                    kept.push_back({v, w});
                    if (g.weighted()) kept_w.push_back(g.find_edge_weight(v, w).value());
                }
            }
            continue;
        }
        // large vertex: all large-large edges (from the lower end) plus
        // first-encountered small neighbors up to 2k retained edges total
        std::size_t large_nbrs = 0;
        for (VertexId w : ns)
            if (large[w]) ++large_nbrs;
        std::size_t small_budget = threshold - large_nbrs;
        for (VertexId w : ns) {
            if (large[w]) {
                if (v < w) {
                    kept.push_back({v, w});
                    if (g.weighted()) kept_w.push_back(g.find_edge_weight(v, w).value());
                }
            } else if (small_budget > 0) {
                --small_budget;
                kept.push_back({v, w});
                if (g.weighted()) kept_w.push_back(g.find_edge_weight(v, w).value());
            }
        }
    }
    return AdjacencyGraph::from_edges(g.vertex_count(), kept,
                                      g.weighted() ? std::span<const Weight>(kept_w) : std::span<const Weight>{});
}

}  // namespace kmatch::oracle
