#pragma once

#include <cstdint>
#include <optional>

#include "kmatch/graph.hpp"

namespace kmatch {

struct WeightRange {
    Weight lo = 1;
    Weight hi = 100;
};

// G(n, p) with geometric gap skipping, so sparse graphs cost O(n + m).
AdjacencyGraph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                               std::optional<WeightRange> weights = std::nullopt);

// `count` hub vertices (ids 0..count) each wired to `degree` distinct targets
// drawn from the remaining ids. Non-hub degrees stay at most `count`, so for
// count < degree exactly the hubs reach the degree threshold.
AdjacencyGraph gen_planted_large(std::size_t n, std::size_t count, std::size_t degree,
                                 std::uint64_t seed, std::optional<WeightRange> weights = std::nullopt);

// m independent edges (2i, 2i+1); maximum degree 1.
AdjacencyGraph gen_disjoint_edges(std::size_t m, std::uint64_t seed,
                                  std::optional<WeightRange> weights = std::nullopt);

// Benchmark inputs sized to a word target N = n + m. The structure near the
// top of the weight order is drawn from a size-independent generator stream,
// so runs at different N exercise identical workspace footprints.
AdjacencyGraph gen_bench_unweighted(std::size_t k, std::uint64_t target_words, std::uint64_t seed);
AdjacencyGraph gen_bench_weighted(std::size_t k, std::uint64_t target_words, std::uint64_t seed);

}  // namespace kmatch
