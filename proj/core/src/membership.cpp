#include "kmatch/membership.hpp"

#include <algorithm>
#include <stdexcept>

namespace kmatch {

bool InjectiveTable::try_build(std::uint32_t rounds, Rng& rng, HashBuildStats* stats) {
    std::uint64_t range = slots_.size();
    for (std::uint32_t round = 0; round < rounds; ++round) {
        UniversalHash h = UniversalHash::sample(rng);
        if (stats) ++stats->builds;
        ++epoch_;
        bool injective = true;
        for (const KeyPayload& e : entries_) {
            Slot& s = slots_[h.slot(e.key, range)];
            if (s.epoch == epoch_) {
                injective = false;
                break;
            }
            s.epoch = epoch_;
            s.key = e.key;
            s.payload = e.payload;
        }
        if (injective) {
            hash_ = h;
            return true;
        }
    }
    return false;
}

std::optional<InjectiveTable> InjectiveTable::build(ResourceMeter& meter,
                                                    std::span<const KeyPayload> entries,
                                                    std::uint64_t range, std::uint32_t rounds, Rng& rng,
                                                    HashBuildStats* stats, std::size_t insert_capacity) {
    std::size_t cap = entries.size() + insert_capacity;
    if (range == 0) range = 1;  // empty sets still get a well-formed table
    InjectiveTable t(meter, range, cap);
    if (entries.size() <= 512) {
        // Duplicate keys can never hash injectively; catch the caller bug
        // up front instead of burning the whole retry budget.
        for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
            for (std::size_t j = i + 1; j < entries.size(); ++j) {
                if (entries[i].key == entries[j].key)
                    throw std::invalid_argument("InjectiveTable: duplicate keys");
            }
        }
    }
    for (const KeyPayload& e : entries) t.entries_.push_back(e);
    if (t.entries_.empty()) {
        t.hash_ = UniversalHash::sample(rng);
        if (stats) ++stats->builds;
        ++t.epoch_;
        return t;
    }
    if (!t.try_build(rounds, rng, stats)) return std::nullopt;
    return t;
}

bool InjectiveTable::insert(std::uint32_t key, std::uint64_t payload, std::uint32_t rounds, Rng& rng,
                            HashBuildStats* stats) {
    Slot& s = slots_[hash_.slot(key, slots_.size())];
    if (s.epoch != epoch_) {
        s.epoch = epoch_;
        s.key = key;
        s.payload = payload;
        entries_.push_back({key, payload});
        return true;
    }
    if (s.key == key) {
        s.payload = payload;  // same key: refresh payload, no new entry
        return true;
    }
    // Collision with a live slot: rebuild over the extended key set.
    entries_.push_back({key, payload});
    if (stats) ++stats->rebuilds;
    return try_build(rounds, rng, stats);
}

OrderedMembership OrderedMembership::build(ResourceMeter& meter, std::span<const KeyPayload> entries,
                                           std::size_t capacity) {
    OrderedMembership m(meter, std::max(capacity, entries.size()));
    for (const KeyPayload& e : entries) m.entries_.push_back(e);
    std::sort(m.entries_.begin(), m.entries_.end(),
              [](const KeyPayload& a, const KeyPayload& b) { return a.key < b.key; });
    return m;
}

std::optional<std::uint64_t> OrderedMembership::lookup(std::uint32_t key) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const KeyPayload& e, std::uint32_t k) { return e.key < k; });
    if (it != entries_.end() && it->key == key) return it->payload;
    return std::nullopt;
}

void OrderedMembership::insert(std::uint32_t key, std::uint64_t payload) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const KeyPayload& e, std::uint32_t k) { return e.key < k; });
    if (it != entries_.end() && it->key == key) {
        it->payload = payload;
        return;
    }
    std::size_t pos = static_cast<std::size_t>(it - entries_.begin());
    entries_.push_back({key, payload});
    std::rotate(entries_.begin() + pos, entries_.end() - 1, entries_.end());
}

std::optional<MembershipSet> MembershipSet::build(ResourceMeter& meter, bool deterministic,
                                                  std::span<const KeyPayload> entries,
                                                  std::uint64_t hash_range, std::uint32_t rounds, Rng& rng,
                                                  HashBuildStats* stats, std::size_t insert_capacity) {
    MembershipSet m;
    if (deterministic) {
        m.ordered_ = OrderedMembership::build(meter, entries, entries.size() + insert_capacity);
        return m;
    }
    auto t = InjectiveTable::build(meter, entries, hash_range, rounds, rng, stats, insert_capacity);
    if (!t) return std::nullopt;
    m.table_ = std::move(*t);
    return m;
}

}  // namespace kmatch
