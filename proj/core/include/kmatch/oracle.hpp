#pragma once

#include <optional>
#include <vector>

#include "kmatch/graph.hpp"
#include "kmatch/matching.hpp"

// Exhaustive reference implementations used to ground the test suite. These
// deliberately share no searching logic with the production solvers: both
// sides of every cross-check are computed independently.
namespace kmatch::oracle {

struct OracleResult {
    bool exists = false;
    std::optional<Weight> best_weight;
    std::optional<std::vector<Edge>> best_matching;
};

struct InstanceTooLarge : std::runtime_error {
    explicit InstanceTooLarge(const std::string& msg) : std::runtime_error(msg) {}
};

// Branch-and-bound over vertices in id order; exact. Aborts above the size
// guard instead of running unbounded.
bool k_matching_exists(const AdjacencyGraph& g, std::size_t k);

// Maximum matching size by bitmask DP over vertex subsets (n <= 20). This is
// the second, structurally different oracle used to cross-check the first.
std::size_t max_matching_size_dp(const AdjacencyGraph& g);

// Exact maximum-weight k-matching by edge-subset enumeration with
// disjointness pruning and a sorted-prefix bound.
OracleResult max_weight_k_matching(const AdjacencyGraph& g, std::size_t k);

// Literal execution of the sequential trimming procedure: sort vertices of
// degree >= 8k by ascending 8k-th heaviest incident weight, then delete all
// but the 8k heaviest edges at each in turn. Cross-checked internally against
// the definitional filter (edge kept iff among the 8k heaviest at both ends).
std::vector<TieBreakWeight> materialize_trimmed_subgraph(const AdjacencyGraph& g, std::size_t k);

// Explicit h-reduced graph for h < k large vertices: every large vertex keeps
// its large-large edges plus first-encountered large-small edges up to 2k
// total; small-small edges survive unchanged. Vertex ids are preserved.
AdjacencyGraph materialize_h_reduced(const AdjacencyGraph& g, std::size_t k);

}  // namespace kmatch::oracle
