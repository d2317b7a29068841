#pragma once

#include <optional>
#include <vector>

#include "kmatch/graph.hpp"
#include "kmatch/matching.hpp"
#include "kmatch/meter.hpp"

namespace kmatch {

// Dense-id graph the kernel solvers run on. Kernels are the only graphs the
// exact solvers ever see; they carry O(k^2) edges by construction.
struct KernelGraph {
    std::uint32_t n = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<Weight> weights;  // empty for unweighted kernels

    bool weighted() const { return !weights.empty(); }
    std::size_t m() const { return edges.size(); }
};

// Repeatedly adds any edge with two uncovered ends. O(m) time.
Matching greedy_maximal_matching(const KernelGraph& kg);

// Maximum-cardinality matching by augmenting-path search with blossom
// contraction. Accepts an optional starting matching; every augmentation
// grows the matching by one edge until no augmenting path remains.
Matching max_matching_blossom(const KernelGraph& kg, const Matching* warm_start = nullptr,
                              ResourceMeter* meter = nullptr);

// Greedy first: a maximal matching of size >= k already contains a
// k-matching. Otherwise the maximum matching is at most twice the maximal
// size, so the blossom search finishes the job from the greedy start.
std::optional<Matching> best_match(const KernelGraph& kg, std::size_t k,
                                   ResourceMeter* meter = nullptr);

struct AugmentingPath {
    std::vector<std::uint32_t> vertices;  // odd number of edges, both ends uncovered
    Weight weight_gain = 0;
};

struct WeightedPhaseResult {
    bool reached_k = false;
    WeightedMatching matching;          // the last matching constructed
    std::vector<Weight> phase_weights;  // weight after each completed phase
};

// Runs up to k augmentation phases from the empty matching. After phase i the
// current matching has maximum weight among all i-edge matchings; stops early
// when no augmenting path exists. Primal-dual blossom machinery, one
// maximum-gain augmentation per phase.
WeightedPhaseResult max_weight_k_matching_kernel(const KernelGraph& kg, std::size_t k,
                                                 ResourceMeter* meter = nullptr);

// Given a maximum |m|-matching of kg, returns an augmenting path of maximum
// weight-gain, or nullopt if none exists. The path is recovered from the
// symmetric difference with an internally computed maximum (|m|+1)-matching.
std::optional<AugmentingPath> max_gain_augment(const KernelGraph& kg, const WeightedMatching& m);

}  // namespace kmatch
