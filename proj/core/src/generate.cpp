#include "kmatch/generate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "kmatch/rng.hpp"

namespace kmatch {

namespace {

using EdgeVec = std::vector<std::pair<VertexId, VertexId>>;

std::vector<Weight> draw_weights(Rng& rng, std::size_t count, WeightRange r) {
    if (r.lo > r.hi) throw std::invalid_argument("weight range empty");
    std::vector<Weight> w(count);
    for (auto& x : w) x = rng.range(r.lo, r.hi);
    return w;
}

AdjacencyGraph finish(std::size_t n, const EdgeVec& edges, std::optional<WeightRange> weights,
                      Rng& rng) {
    if (!weights) return AdjacencyGraph::from_edges(n, edges);
    std::vector<Weight> w = draw_weights(rng, edges.size(), *weights);
    return AdjacencyGraph::from_edges(n, edges, w);
}

}  // namespace

AdjacencyGraph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                               std::optional<WeightRange> weights) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("edge probability out of [0,1]");
    Rng rng(seed);
    EdgeVec edges;
    if (p > 0.0 && n >= 2) {
        if (p >= 1.0) {
            for (VertexId i = 0; i + 1 < n; ++i)
                for (VertexId j = i + 1; j < n; ++j) edges.push_back({i, j});
        } else {
            // skip-length sampling over the row-major pair enumeration;
            // row i starts at linear index i*n - i*(i+1)/2 and holds n-1-i pairs
            double logq = std::log1p(-p);
            auto row_start = [n](std::uint64_t r) { return r * n - r * (r + 1) / 2; };
            std::uint64_t i = 0;
            std::uint64_t pos = 0;
            std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
            for (;;) {
                double u = rng.unit();
                pos += static_cast<std::uint64_t>(std::floor(std::log1p(-u) / logq));
                if (pos >= total) break;
                while (pos >= row_start(i + 1)) ++i;
                std::uint64_t j = i + 1 + (pos - row_start(i));
                edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j)});
                ++pos;
            }
        }
    }
    return finish(n, edges, weights, rng);
}

AdjacencyGraph gen_planted_large(std::size_t n, std::size_t count, std::size_t degree,
                                 std::uint64_t seed, std::optional<WeightRange> weights) {
    if (count > n) throw std::invalid_argument("more hubs than vertices");
    if (degree > n - count) throw std::invalid_argument("hub degree exceeds available targets");
    Rng rng(seed);
    EdgeVec edges;
    edges.reserve(count * degree);
    std::size_t pool = n - count;
    for (VertexId hub = 0; hub < count; ++hub) {
        // Floyd's sampling: `degree` distinct targets from the non-hub pool
        std::set<std::uint64_t> picked;
        for (std::uint64_t j = pool - degree; j < pool; ++j) {
            std::uint64_t t = rng.below(j + 1);
            if (!picked.insert(t).second) picked.insert(j);
        }
        for (std::uint64_t t : picked)
            edges.push_back({hub, static_cast<VertexId>(count + t)});
    }
    return finish(n, edges, weights, rng);
}

AdjacencyGraph gen_disjoint_edges(std::size_t m, std::uint64_t seed,
                                  std::optional<WeightRange> weights) {
    Rng rng(seed);
    EdgeVec edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        edges.push_back({static_cast<VertexId>(2 * i), static_cast<VertexId>(2 * i + 1)});
    return finish(2 * m, edges, weights, rng);
}

AdjacencyGraph gen_bench_unweighted(std::size_t k, std::uint64_t target_words, std::uint64_t seed) {
    // k hubs of degree exactly 2k saturate the large-vertex collection on any
    // input size; everything else is sparse filler.
    std::size_t m = 2 * k * k;
    std::size_t min_n = k + 2 * k + 1;
    std::size_t n = target_words > m + min_n ? static_cast<std::size_t>(target_words - m) : min_n;
    return gen_planted_large(n, k, 2 * k, seed);
}

AdjacencyGraph gen_bench_weighted(std::size_t k, std::uint64_t target_words, std::uint64_t seed) {
    // Two cliques on 4k+2 vertices carry all heavy weights: every degree
    // stays below 8k, and the cliques alone exceed k(16k-1) edges, so the
    // reduction's final edge set is a function of the clique stream only.
    // Chaff edges and isolated vertices scale the input to the word target.
    std::size_t c = 4 * k + 2;
    Rng core_rng(seed);
    Rng chaff_rng(seed ^ 0x9e3779b97f4a7c15ull);
    EdgeVec edges;
    std::vector<Weight> weights;
    for (VertexId i = 0; i < 2 * c; ++i) {
        VertexId base = i < c ? 0 : static_cast<VertexId>(c);
        for (VertexId j = i + 1; j < base + c; ++j) {
            edges.push_back({i, j});
            weights.push_back(i < c ? core_rng.range(1 << 20, 2 << 20) : core_rng.range(1 << 10, 2 << 10));
        }
    }
    std::size_t m_core = edges.size();
    std::size_t chaff = (target_words > m_core + 2 * c + 3 * 500) ? 500 : 0;
    for (std::size_t i = 0; i < chaff; ++i) {
        VertexId a = static_cast<VertexId>(2 * c + 2 * i);
        edges.push_back({a, a + 1});
        weights.push_back(chaff_rng.range(0, (1 << 9) - 1));
    }
    std::size_t m = edges.size();
    std::size_t min_n = 2 * c + 2 * chaff;
    std::size_t n = target_words > m + min_n ? static_cast<std::size_t>(target_words - m) : min_n;
    return AdjacencyGraph::from_edges(n, edges, weights);
}

}  // namespace kmatch
