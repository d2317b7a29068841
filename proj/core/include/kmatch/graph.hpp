#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmatch/meter.hpp"

namespace kmatch {

using VertexId = std::uint32_t;
using Weight = std::int64_t;

struct GraphFormatError : std::runtime_error {
    explicit GraphFormatError(const std::string& what) : std::runtime_error(what) {}
};

enum class InputVerify { kAuto, kOn, kOff };

struct LoadOptions {
    InputVerify verify = InputVerify::kAuto;
};

// Read-only word-addressable adjacency store. Every undirected edge appears
// once in each endpoint's neighbor list; vertex ids are contiguous in [0, n).
// The store is immutable after construction and is never charged against any
// run's workspace meter.
class AdjacencyGraph {
public:
    static AdjacencyGraph load_text(std::istream& in, const LoadOptions& opts = {});
    static AdjacencyGraph load_binary(std::istream& in, const LoadOptions& opts = {});
    static AdjacencyGraph load_file(const std::string& path, const LoadOptions& opts = {});

    // Builds a store from an undirected edge list (u, v) with optional
    // parallel weights. Neighbor lists come out sorted by neighbor id.
    static AdjacencyGraph from_edges(std::size_t n,
                                     std::span<const std::pair<VertexId, VertexId>> edges,
                                     std::span<const Weight> weights = {});

    void dump_text(std::ostream& out) const;
    void dump_binary(std::ostream& out) const;

    std::size_t vertex_count() const { return n_; }
    std::size_t edge_count() const { return m_; }
    // N = n + m, the store's size measure in words.
    std::uint64_t size_words() const { return static_cast<std::uint64_t>(n_) + m_; }
    bool weighted() const { return weighted_; }

    std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::span<const Weight> weights_of(VertexId v) const {
        return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
    }

    // Weight of the directed slot (v, i-th neighbor); 0 for unweighted stores.
    Weight slot_weight(VertexId v, std::size_t i) const {
        return weighted_ ? weights_[offsets_[v] + i] : 0;
    }

    // Looks up the weight of edge [v, w] by scanning v's list (test/validator
    // helper, not used on hot paths).
    std::optional<Weight> find_edge_weight(VertexId v, VertexId w) const;
    bool has_edge(VertexId v, VertexId w) const;

    // One complete pass over the adjacency lists in vertex order. The visitor
    // is called once per (v, w, weight) slot, i.e. twice per undirected edge,
    // and may return false to stop early; either way one full pass is charged.
    template <typename Visitor>
    void scan(ResourceMeter& meter, Visitor&& visit) const {
        meter.note_full_pass();
        for (VertexId v = 0; v < n_; ++v) {
            std::size_t lo = offsets_[v], hi = offsets_[v + 1];
            for (std::size_t i = lo; i < hi; ++i) {
                if (!visit(v, neighbors_[i], weighted_ ? weights_[i] : Weight{0})) return;
            }
        }
    }

    // FNV-1a over the structural arrays; used to check the store is never
    // mutated by an algorithm run.
    std::uint64_t checksum() const;

    // Full structural validation: ids in range, no self-loops, no parallel
    // edges, symmetric adjacency, matching weights on both edge copies.
    void validate() const;

private:
    AdjacencyGraph() = default;
    void finalize(const LoadOptions& opts, std::uint64_t parsed_m);

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    bool weighted_ = false;
    std::vector<std::uint64_t> offsets_;  // n+1 entries
    std::vector<VertexId> neighbors_;     // 2m entries
    std::vector<Weight> weights_;         // 2m entries iff weighted
};

}  // namespace kmatch
