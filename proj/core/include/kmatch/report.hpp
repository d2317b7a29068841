#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kmatch/matching.hpp"
#include "kmatch/membership.hpp"

namespace kmatch {

enum class Branch {
    kNone,
    kUgmStep2,   // saturated: k large vertices found
    kUgmStep4,   // small-edge cap reached
    kUgmStep5,   // kernel handed to the exact solver
    kRsubgStep4, // reduction finished below the edge cap
    kRsubgStep5, // reduction trimmed at the edge cap
};

const char* branch_name(Branch b);

struct RunConfig {
    bool deterministic = false;  // balanced-structure membership, no hashing
    std::uint64_t seed = 0;
    double epsilon = 0x1p-20;    // per-build injectivity failure bound
    bool paper_epsilon = false;  // k-dependent epsilon schedule instead
};

// Sampling rounds per injective-hash build: ceil(log2(1/eps)); the
// k-dependent schedule uses eps = 2^(-k^1.5) for the unweighted pipeline and
// eps = k^(-k^2) for the weighted one.
std::uint32_t injectivity_rounds(const RunConfig& cfg, std::size_t k, bool weighted_pipeline);
std::string epsilon_text(const RunConfig& cfg, std::size_t k, bool weighted_pipeline);

struct RunReport {
    std::string command;  // ugm | wgm
    std::string input;
    std::size_t k = 0;
    bool weighted = false;
    bool found = false;
    bool hash_failure = false;
    std::vector<Edge> edges;   // lo < hi, sorted
    Weight total_weight = 0;
    Branch branch = Branch::kNone;
    bool deterministic = false;
    std::uint64_t seed = 0;
    std::string epsilon;
    std::uint32_t rounds = 0;
    HashBuildStats hash_stats;
    std::uint64_t peak_workspace_words = 0;
    std::uint64_t full_passes = 0;
    std::uint64_t random_reads = 0;
    double wall_ms = 0.0;
};

// Deterministic serialization: fixed key order, so two runs with the same
// seed and input differ at most in the wall-ms line.
void write_report(std::ostream& out, const RunReport& r, bool stats_only = false);

}  // namespace kmatch
