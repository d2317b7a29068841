#include <doctest.h>
#include <set>

#include "kmatch/membership.hpp"

using namespace kmatch;

TEST_CASE("empty key set builds trivially") {
    ResourceMeter meter;
    Rng rng(1);
    auto t = InjectiveTable::build(meter, {}, 0, 1, rng);
    REQUIRE(t.has_value());
    CHECK_FALSE(t->lookup(0).has_value());
    CHECK_FALSE(t->lookup(99).has_value());
}

TEST_CASE("single key always succeeds in one round") {
    ResourceMeter meter;
    Rng rng(7);
    std::vector<KeyPayload> keys{{7, 42}};
    HashBuildStats stats;
    auto t = InjectiveTable::build(meter, keys, 1, 1, rng, &stats);
    REQUIRE(t.has_value());
    CHECK(t->lookup(7) == 42);
    CHECK(stats.builds == 1);
}

TEST_CASE("duplicate keys are rejected up front") {
    ResourceMeter meter;
    Rng rng(7);
    std::vector<KeyPayload> keys{{5, 0}, {5, 1}};
    CHECK_THROWS_AS(InjectiveTable::build(meter, keys, 25, 8, rng), std::invalid_argument);
}

TEST_CASE("full-universe classification matches a linear sweep") {
    ResourceMeter meter;
    Rng rng(99);
    const std::uint32_t universe = 5000;
    std::set<std::uint32_t> members;
    while (members.size() < 64) members.insert(static_cast<std::uint32_t>(rng.below(universe)));
    std::vector<KeyPayload> keys;
    for (auto k : members) keys.push_back({k, k * 10ull});
    auto t = InjectiveTable::build(meter, keys, 64 * 64, 40, rng);
    REQUIRE(t.has_value());
    for (std::uint32_t x = 0; x < universe; ++x) {
        auto got = t->lookup(x);
        if (members.count(x)) {
            REQUIRE(got.has_value());
            CHECK(*got == x * 10ull);
        } else {
            CHECK_FALSE(got.has_value());
        }
    }
}

TEST_CASE("single-round injectivity succeeds at least half the time") {
    // 64 keys into 64^2 slots: pairwise collision bound gives >= 1/2
    ResourceMeter meter;
    Rng rng(2024);
    int success = 0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        std::set<std::uint32_t> members;
        while (members.size() < 64) members.insert(static_cast<std::uint32_t>(rng.below(1u << 20)));
        std::vector<KeyPayload> keys;
        for (auto k : members) keys.push_back({k, 0});
        HashBuildStats stats;
        auto tab = InjectiveTable::build(meter, keys, 64 * 64, 1, rng, &stats);
        if (tab) ++success;
    }
    double rate = static_cast<double>(success) / trials;
    double sigma = std::sqrt(0.25 / trials);
    CHECK(rate >= 0.5 - 3 * sigma);
}

TEST_CASE("inserts after build keep lookups exact") {
    ResourceMeter meter;
    Rng rng(5);
    std::vector<KeyPayload> keys{{10, 1}, {20, 2}, {30, 3}};
    HashBuildStats stats;
    auto t = InjectiveTable::build(meter, keys, 144, 30, rng, &stats, /*insert_capacity=*/64);
    REQUIRE(t.has_value());
    for (std::uint32_t x = 0; x < 64; ++x) {
        REQUIRE(t->insert(1000 + x, x, 30, rng, &stats));
    }
    for (std::uint32_t x = 0; x < 64; ++x) CHECK(t->lookup(1000 + x) == x);
    CHECK(t->lookup(10) == 1);
    CHECK_FALSE(t->lookup(999).has_value());
    // 67 keys in a 144-slot table forces at least one collision-rebuild
    CHECK(stats.rebuilds > 0);
}

TEST_CASE("ordered fallback agrees with the hash table on the full universe") {
    ResourceMeter meter;
    Rng rng(321);
    std::vector<KeyPayload> keys;
    for (std::uint32_t i = 0; i < 100; ++i) keys.push_back({i * 3 + 1, i});
    auto hash = MembershipSet::build(meter, false, keys, 100 * 100, 30, rng, nullptr);
    auto tree = MembershipSet::build(meter, true, keys, 0, 0, rng, nullptr);
    REQUIRE(hash.has_value());
    REQUIRE(tree.has_value());
    CHECK(tree->deterministic());
    for (std::uint32_t x = 0; x < 400; ++x) {
        CHECK(hash->lookup(x) == tree->lookup(x));
    }
}

TEST_CASE("ordered fallback basic cases") {
    ResourceMeter meter;
    OrderedMembership empty(meter, 0);
    CHECK_FALSE(empty.lookup(3).has_value());

    std::vector<KeyPayload> keys;
    for (std::uint32_t i = 1; i <= 100; ++i) keys.push_back({i, i});
    auto m = OrderedMembership::build(meter, keys, 100);
    for (std::uint32_t i = 1; i <= 100; ++i) CHECK(m.lookup(i) == i);
    CHECK_FALSE(m.lookup(101).has_value());
}

TEST_CASE("table workspace stays quadratic in the key count") {
    ResourceMeter meter;
    Rng rng(8);
    std::vector<KeyPayload> keys;
    for (std::uint32_t i = 0; i < 50; ++i) keys.push_back({i * 7, 0});
    std::uint64_t before = meter.current_words();
    auto t = InjectiveTable::build(meter, keys, 50 * 50, 30, rng);
    REQUIRE(t.has_value());
    std::uint64_t held = meter.current_words() - before;
    CHECK(held >= 50 * 50 * 2);      // slot array dominates
    CHECK(held <= 50 * 50 * 2 + 200);
}
