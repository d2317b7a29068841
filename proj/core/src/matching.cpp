#include "kmatch/matching.hpp"

#include <numeric>

namespace kmatch {

void WeightedMatching::normalize() {
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [this](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    std::vector<Edge> e2(edges.size());
    std::vector<Weight> w2(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        e2[i] = edges[order[i]];
        w2[i] = weights[order[i]];
    }
    edges = std::move(e2);
    weights = std::move(w2);
}

std::string check_k_matching(const AdjacencyGraph& g, std::span<const Edge> edges, std::size_t k,
                             ResourceMeter* meter) {
    if (edges.size() != k)
        return "expected " + std::to_string(k) + " edges, got " + std::to_string(edges.size());
    std::vector<VertexId> covered;
    covered.reserve(2 * k);
    for (const Edge& e : edges) {
        if (e.lo == e.hi) return "self-loop in matching";
        if (e.hi >= g.vertex_count()) return "matching endpoint out of range";
        if (meter) meter->note_random_reads(g.degree(e.lo));
        if (!g.has_edge(e.lo, e.hi))
            return "edge [" + std::to_string(e.lo) + "," + std::to_string(e.hi) + "] not in graph";
        covered.push_back(e.lo);
        covered.push_back(e.hi);
    }
    std::sort(covered.begin(), covered.end());
    for (std::size_t i = 0; i + 1 < covered.size(); ++i) {
        if (covered[i] == covered[i + 1])
            return "vertex " + std::to_string(covered[i]) + " covered twice";
    }
    return {};
}

}  // namespace kmatch
