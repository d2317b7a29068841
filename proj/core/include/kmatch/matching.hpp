#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "kmatch/graph.hpp"

namespace kmatch {

struct Edge {
    VertexId lo;
    VertexId hi;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend bool operator<(const Edge& a, const Edge& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    }
};

inline Edge make_edge(VertexId u, VertexId v) { return {std::min(u, v), std::max(u, v)}; }

struct Matching {
    std::vector<Edge> edges;

    std::size_t size() const { return edges.size(); }
    void normalize() { std::sort(edges.begin(), edges.end()); }
};

struct WeightedMatching {
    std::vector<Edge> edges;
    std::vector<Weight> weights;  // parallel to edges
    Weight total = 0;

    std::size_t size() const { return edges.size(); }
    void normalize();
};

// Checks that `edges` is a k-matching of g: exactly k edges, all present in
// g, pairwise vertex-disjoint. Returns an empty string on success and a
// diagnostic otherwise. Reads of g's lists are charged as random reads when a
// meter is supplied.
std::string check_k_matching(const AdjacencyGraph& g, std::span<const Edge> edges, std::size_t k,
                             ResourceMeter* meter = nullptr);

// Distinct total order on edges: the base weight refined by the endpoint
// pair, compared lexicographically. Any h heaviest edges under this order are
// h heaviest under the base weight alone.
struct TieBreakWeight {
    Weight wt;
    VertexId lo;
    VertexId hi;

    static TieBreakWeight of(Weight w, VertexId u, VertexId v) {
        return {w, std::min(u, v), std::max(u, v)};
    }

    // Strictly below every real edge: no edge has lo == hi.
    static TieBreakWeight neg_inf() { return {std::numeric_limits<Weight>::min(), 0, 0}; }
    bool is_neg_inf() const { return wt == std::numeric_limits<Weight>::min() && lo == hi; }

    friend bool operator==(const TieBreakWeight&, const TieBreakWeight&) = default;
    friend bool operator<(const TieBreakWeight& a, const TieBreakWeight& b) {
        if (a.wt != b.wt) return a.wt < b.wt;
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi < b.hi;
    }
    friend bool operator>(const TieBreakWeight& a, const TieBreakWeight& b) { return b < a; }
    friend bool operator<=(const TieBreakWeight& a, const TieBreakWeight& b) { return !(b < a); }
    friend bool operator>=(const TieBreakWeight& a, const TieBreakWeight& b) { return !(a < b); }
};

}  // namespace kmatch
