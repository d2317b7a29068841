#include <algorithm>
#include <doctest.h>
#include <random>

#include "kmatch/select.hpp"

using namespace kmatch;

TEST_CASE("kth largest on a small vector") {
    std::vector<int> v{5, 1, 9, 3, 7};
    CHECK(select_kth_largest(std::span<int>(v), 1) == 9);
    v = {5, 1, 9, 3, 7};
    CHECK(select_kth_largest(std::span<int>(v), 5) == 1);
    v = {5, 1, 9, 3, 7};
    CHECK(select_kth_largest(std::span<int>(v), 2) == 7);
}

TEST_CASE("kth largest equals the sort oracle on random input") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 1 + rng() % 10000;
        std::vector<std::uint64_t> v(n);
        for (auto& x : v) x = rng();
        std::vector<std::uint64_t> sorted = v;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        std::size_t k = 1 + rng() % n;
        auto got = select_kth_largest(std::span<std::uint64_t>(v), k);
        CHECK(got == sorted[k - 1]);
        // the front block holds exactly the k largest
        std::vector<std::uint64_t> front(v.begin(), v.begin() + k);
        std::sort(front.begin(), front.end(), std::greater<>());
        CHECK(std::equal(front.begin(), front.end(), sorted.begin()));
    }
}

TEST_CASE("randomized selection agrees with the deterministic one") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 1 + rng() % 3000;
        std::vector<std::uint64_t> a(n);
        for (auto& x : a) x = rng();
        std::vector<std::uint64_t> b = a;
        std::size_t k = 1 + rng() % n;
        auto x = select_kth_largest(std::span<std::uint64_t>(a), k);
        auto y = select_kth_largest_random(std::span<std::uint64_t>(b), k, std::less<std::uint64_t>{}, rng);
        CHECK(x == y);
    }
}

TEST_CASE("top-k buffer keeps the largest items") {
    ResourceMeter meter;
    SUBCASE("1..10 with k=3") {
        TopKBuffer<int> buf(meter, 3, 3);
        for (int i = 1; i <= 10; ++i) buf.push(i);
        auto out = buf.finish();
        std::vector<int> v(out.begin(), out.end());
        std::sort(v.begin(), v.end());
        CHECK(v == std::vector<int>{8, 9, 10});
    }
    SUBCASE("fewer items than k") {
        TopKBuffer<int> buf(meter, 5, 5);
        buf.push(42);
        buf.push(-7);
        auto out = buf.finish();
        CHECK(out.size() == 2);
    }
}

TEST_CASE("top-k buffer matches the sort oracle and stays within budget") {
    std::mt19937_64 rng(777);
    const std::size_t k = 64;
    const std::size_t pushes = 100000;
    ResourceMeter meter;
    TopKBuffer<std::uint64_t> buf(meter, k, k);
    // capacity charge is 2k records, visible on the meter for the whole run
    CHECK(meter.peak_workspace_words() == Workspace<std::uint64_t>::words_for(2 * k));
    std::vector<std::uint64_t> all;
    all.reserve(pushes);
    for (std::size_t i = 0; i < pushes; ++i) {
        std::uint64_t x = rng();
        all.push_back(x);
        buf.push(x);
        CHECK(buf.size() <= 2 * k);
    }
    auto out = buf.finish();
    std::vector<std::uint64_t> got(out.begin(), out.end());
    std::sort(got.begin(), got.end(), std::greater<>());
    std::sort(all.begin(), all.end(), std::greater<>());
    all.resize(k);
    CHECK(got == all);
    // selection work: at most ceil(pushed/k) compactions
    CHECK(buf.compactions() <= (buf.pushed() + k - 1) / k);
}

TEST_CASE("asymmetric retain/staging compaction") {
    std::mt19937_64 rng(31);
    ResourceMeter meter;
    TopKBuffer<std::uint64_t> buf(meter, 100, 17);
    std::vector<std::uint64_t> all;
    for (std::size_t i = 0; i < 5000; ++i) {
        std::uint64_t x = rng();
        all.push_back(x);
        buf.push(x);
    }
    auto out = buf.finish();
    std::vector<std::uint64_t> got(out.begin(), out.end());
    std::sort(got.begin(), got.end(), std::greater<>());
    std::sort(all.begin(), all.end(), std::greater<>());
    all.resize(100);
    CHECK(got == all);
    CHECK(buf.compactions() <= 5000 / 17 + 1);
}
