#pragma once

#include <optional>
#include <vector>

#include "kmatch/blossom.hpp"
#include "kmatch/graph.hpp"
#include "kmatch/matching.hpp"
#include "kmatch/membership.hpp"
#include "kmatch/meter.hpp"
#include "kmatch/report.hpp"
#include "kmatch/rng.hpp"
#include "kmatch/select.hpp"

namespace kmatch {

inline TieBreakWeight tiebreak(const AdjacencyGraph& g, VertexId v, std::size_t slot) {
    return TieBreakWeight::of(g.slot_weight(v, slot), v, g.neighbors(v)[slot]);
}

// Tie-break weight of the 8k-th heaviest edge at v; negative infinity when
// deg(v) < 8k. Streams v's list through an O(k)-space top-8k buffer.
TieBreakWeight e8k_value(const AdjacencyGraph& g, VertexId v, std::size_t k, ResourceMeter& meter);

// One retained member of the bounding set: the vertex, its top-8k incident
// edges sorted descending, and the 8k-th value used as its selection key.
struct BoundingEntry {
    TieBreakWeight e8k;
    VertexId v = 0;
    std::vector<TieBreakWeight> list;
};

struct BoundingSet {
    MeterCharge footprint;
    std::vector<BoundingEntry> members;   // sorted by vertex id
    std::optional<MembershipSet> lookup;  // vertex -> index into members

    std::optional<std::size_t> index_of(VertexId v) const {
        auto p = lookup->lookup(v);
        if (!p) return std::nullopt;
        return static_cast<std::size_t>(*p);
    }
};

// One full pass: every vertex of degree >= 8k gets its bounding list and
// selection key computed in O(k) space; lists survive only while their vertex
// survives the streaming top-8k selection over the keys. Returns nullopt on
// hash failure.
std::optional<BoundingSet> build_bounding_set(const AdjacencyGraph& g, std::size_t k,
                                              const RunConfig& cfg, std::uint32_t rounds, Rng& rng,
                                              ResourceMeter& meter, HashBuildStats* stats);

// Trimmed-subgraph membership for an edge taken from member v's bounding
// list: if the other end is outside the set its own threshold is lower, so
// the edge is in; otherwise compare against the other end's 8k-th value.
bool edge_in_trimmed(const BoundingSet& bs, const TieBreakWeight& e, VertexId list_owner);

struct ReducedSubgraph {
    Workspace<TieBreakWeight> edges;  // final edge set, identity + weight per entry
    Branch branch = Branch::kRsubgStep4;
    std::optional<TieBreakWeight> m0;  // cut threshold when the cap was hit
    std::size_t step3_count = 0;       // candidate edges seen before the branch test
};

// Second full pass: edges with both ends outside the bounding set stream
// through a k^2-record staging buffer; compactions keep the k(16k-1) heaviest
// seen. When the bounding-list union already met the cap, only edges at least
// as heavy as the current minimum are admitted.
ReducedSubgraph reduce_subgraph(const AdjacencyGraph& g, std::size_t k, const BoundingSet& bs,
                                ResourceMeter& meter);

struct WeightedKernel {
    KernelGraph kg;
    Workspace<VertexId> original_ids;
};

WeightedKernel assemble_weighted_kernel(const ReducedSubgraph& rs, std::size_t k, ResourceMeter& meter);

struct WgmResult {
    std::optional<WeightedMatching> matching;
    bool hash_failure = false;
    Branch branch = Branch::kNone;
    HashBuildStats hash_stats;
};

// Full weighted pipeline: bounding pass, reduction pass, k-phase exact solve
// on the kernel, mapped back to original ids. At most 2 full passes,
// workspace O(k^2) words.
WgmResult max_weight_k_matching(const AdjacencyGraph& g, std::size_t k, const RunConfig& cfg,
                                ResourceMeter& meter);

}  // namespace kmatch
