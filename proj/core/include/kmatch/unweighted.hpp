#pragma once

#include <optional>
#include <variant>

#include "kmatch/blossom.hpp"
#include "kmatch/graph.hpp"
#include "kmatch/matching.hpp"
#include "kmatch/membership.hpp"
#include "kmatch/meter.hpp"
#include "kmatch/report.hpp"
#include "kmatch/rng.hpp"

namespace kmatch {

// Vertices of degree >= 2k, collected in vertex order, at most k of them.
struct LargeSet {
    Workspace<VertexId> ids;
    bool saturated = false;  // exactly k found

    std::size_t h() const { return ids.size(); }
};

// One full pass (charged even though degrees come from the offset index).
LargeSet collect_large_vertices(const AdjacencyGraph& g, std::size_t k, ResourceMeter& meter);

// k large vertices guarantee a k-matching: match each to a neighbor outside
// the exclusion set, which never exceeds 2k-2 other vertices. Charges one
// pass for re-reading the chosen lists. Returns nullopt only on hash failure.
std::optional<Matching> matching_from_large(const AdjacencyGraph& g, const LargeSet& large,
                                            const RunConfig& cfg, std::uint32_t rounds, Rng& rng,
                                            ResourceMeter& meter, HashBuildStats* stats);

// Outcome of the reduction scan: either the kernel ingredients, or proof that
// enough small edges exist to build a k-matching greedily.
struct HReducedParts {
    Workspace<Edge> retained;     // per large vertex, exactly 2k incident edges
    Workspace<Edge> small_edges;  // both ends small, recorded from the lower end
    bool cap_reached = false;     // small_edges hit (4k-3)(k-h)
};

HReducedParts build_h_reduced(const AdjacencyGraph& g, std::size_t k, const LargeSet& large,
                              const MembershipSet& is_large, ResourceMeter& meter);

// Greedy construction once (4k-3)(k-h) small edges are in hand: k-h disjoint
// small edges always survive, then the large vertices extend the matching as
// above. Returns nullopt only on hash failure.
std::optional<Matching> matching_from_cap(const AdjacencyGraph& g, std::size_t k, const LargeSet& large,
                                          std::span<const Edge> small_edges, const RunConfig& cfg,
                                          std::uint32_t rounds, Rng& rng, ResourceMeter& meter,
                                          HashBuildStats* stats);

// Kernel with dense ids plus the back-mapping to original vertex ids.
struct UnweightedKernel {
    KernelGraph kg;
    Workspace<VertexId> original_ids;  // dense id -> original id (sorted)
};

UnweightedKernel assemble_unweighted_kernel(const HReducedParts& parts, const MembershipSet& is_large,
                                            std::size_t k, std::size_t h, ResourceMeter& meter);

struct UgmResult {
    std::optional<Matching> matching;  // absent + !hash_failure = proven no-k-matching
    bool hash_failure = false;
    Branch branch = Branch::kNone;
    HashBuildStats hash_stats;
};

// Full pipeline: degree pass, saturation shortcut, reduction scan with the
// small-edge cap, exact solve on the kernel. At most 3 full passes; workspace
// bounded by O(k^2) words, all of it on the meter.
UgmResult find_k_matching(const AdjacencyGraph& g, std::size_t k, const RunConfig& cfg,
                          ResourceMeter& meter);

}  // namespace kmatch
