#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "kmatch/meter.hpp"
#include "kmatch/rng.hpp"

namespace kmatch {

// Multiply-shift universal family ((a*x + b) mod p) mod r with the Mersenne
// prime p = 2^61 - 1. For distinct x != y the collision probability over the
// random (a, b) is ~1/r, which is what the injectivity retry bound needs.
class UniversalHash {
public:
    static constexpr std::uint64_t kPrime = (1ull << 61) - 1;

    static UniversalHash sample(Rng& rng) {
        UniversalHash h;
        h.a_ = 1 + rng.below(kPrime - 1);
        h.b_ = rng.below(kPrime);
        return h;
    }

    std::uint64_t slot(std::uint64_t key, std::uint64_t range) const {
        unsigned __int128 t = static_cast<unsigned __int128>(a_) * key + b_;
        std::uint64_t r = static_cast<std::uint64_t>(t % kPrime);
        return r % range;
    }

private:
    std::uint64_t a_ = 1;
    std::uint64_t b_ = 0;
};

struct KeyPayload {
    std::uint32_t key;
    std::uint64_t payload;
};

struct HashBuildStats {
    std::uint32_t builds = 0;   // hash functions sampled (first try + retries)
    std::uint32_t rebuilds = 0; // rebuilds triggered by inserts
};

// Constant-time membership over a small key set: a table of `range` slots
// whose hash function is injective on the stored keys. Construction samples
// hash functions up to `rounds` times; each candidate is checked with the
// epoch-marker trick so the slot array is allocated and zeroed exactly once.
// Slots remember their key, so universe keys that merely collide into a live
// slot still resolve to absent.
class InjectiveTable {
public:
    // Returns nullopt if no sampled function was injective within `rounds`.
    static std::optional<InjectiveTable> build(ResourceMeter& meter,
                                               std::span<const KeyPayload> entries,
                                               std::uint64_t range, std::uint32_t rounds, Rng& rng,
                                               HashBuildStats* stats = nullptr,
                                               std::size_t insert_capacity = 0);

    std::optional<std::uint64_t> lookup(std::uint32_t key) const {
        if (slots_.size() == 0) return std::nullopt;
        const Slot& s = slots_[hash_.slot(key, slots_.size())];
        if (s.epoch == epoch_ && s.key == key) return s.payload;
        return std::nullopt;
    }

    bool contains(std::uint32_t key) const { return lookup(key).has_value(); }

    // Adds a key after construction. A collision with a live slot triggers a
    // full rebuild over the stored keys with fresh hash functions, bounded by
    // the same per-build round budget. Returns false on budget exhaustion.
    bool insert(std::uint32_t key, std::uint64_t payload, std::uint32_t rounds, Rng& rng,
                HashBuildStats* stats = nullptr);

    std::size_t size() const { return entries_.size(); }

private:
    struct Slot {
        std::uint32_t epoch = 0;
        std::uint32_t key = 0;
        std::uint64_t payload = 0;
    };

    InjectiveTable(ResourceMeter& meter, std::uint64_t range, std::size_t key_capacity)
        : slots_(meter, range), entries_(meter, key_capacity) {
        slots_.resize(range);
    }

    // Tries one sampled function; on success installs all entries.
    bool try_build(std::uint32_t rounds, Rng& rng, HashBuildStats* stats);

    Workspace<Slot> slots_;
    Workspace<KeyPayload> entries_;  // kept for rebuilds on insert
    UniversalHash hash_;
    std::uint32_t epoch_ = 0;
};

// Deterministic fallback: keys kept in sorted order, binary-search lookups.
// Inserts shift the tail, which is fine at the O(k) sizes this is used for.
class OrderedMembership {
public:
    OrderedMembership(ResourceMeter& meter, std::size_t capacity) : entries_(meter, capacity) {}

    static OrderedMembership build(ResourceMeter& meter, std::span<const KeyPayload> entries,
                                   std::size_t capacity);

    std::optional<std::uint64_t> lookup(std::uint32_t key) const;
    bool contains(std::uint32_t key) const { return lookup(key).has_value(); }
    void insert(std::uint32_t key, std::uint64_t payload);
    std::size_t size() const { return entries_.size(); }

private:
    Workspace<KeyPayload> entries_;  // sorted by key
};

// The membership structure pipelines actually use: a hash table in randomized
// mode, the ordered structure in deterministic mode, behind one interface.
class MembershipSet {
public:
    static std::optional<MembershipSet> build(ResourceMeter& meter, bool deterministic,
                                              std::span<const KeyPayload> entries, std::uint64_t hash_range,
                                              std::uint32_t rounds, Rng& rng, HashBuildStats* stats,
                                              std::size_t insert_capacity = 0);

    std::optional<std::uint64_t> lookup(std::uint32_t key) const {
        return table_ ? table_->lookup(key) : ordered_->lookup(key);
    }
    bool contains(std::uint32_t key) const { return lookup(key).has_value(); }

    // False only in randomized mode when the retry budget runs out.
    bool insert(std::uint32_t key, std::uint64_t payload, std::uint32_t rounds, Rng& rng,
                HashBuildStats* stats = nullptr) {
        if (table_) return table_->insert(key, payload, rounds, rng, stats);
        ordered_->insert(key, payload);
        return true;
    }

    bool deterministic() const { return !table_.has_value(); }

private:
    MembershipSet() = default;
    std::optional<InjectiveTable> table_;
    std::optional<OrderedMembership> ordered_;
};

}  // namespace kmatch
