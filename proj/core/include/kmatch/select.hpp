#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <utility>

#include "kmatch/meter.hpp"

namespace kmatch {

namespace detail {

// Insertion sort for the 5-element groups; also the recursion floor.
template <typename T, typename Less>
void small_sort(T* lo, T* hi, Less& less) {
    for (T* p = lo + 1; p < hi; ++p) {
        for (T* q = p; q > lo && less(*q, *(q - 1)); --q) std::swap(*q, *(q - 1));
    }
}

// Three-way partition around the value at pivot_pos. Returns the half-open
// range now holding elements equal to the pivot; smaller elements precede it.
template <typename T, typename Less>
std::pair<std::size_t, std::size_t> partition3(T* lo, T* hi, std::size_t pivot_pos, Less& less) {
    std::size_t n = static_cast<std::size_t>(hi - lo);
    std::swap(lo[pivot_pos], lo[n - 1]);
    const T& pivot = lo[n - 1];
    std::size_t lt = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (less(lo[i], pivot)) std::swap(lo[i], lo[lt++]);
    }
    std::size_t eq = lt;
    for (std::size_t i = lt; i + 1 < n; ++i) {
        if (!less(pivot, lo[i])) std::swap(lo[i], lo[eq++]);
    }
    std::swap(lo[eq], lo[n - 1]);
    return {lt, eq + 1};
}

// Places the element of the given rank (0-based, ascending under less) at
// lo[rank], with smaller elements before it and larger after. Deterministic
// median-of-medians pivoting, worst-case linear.
template <typename T, typename Less>
void nth_smallest(T* lo, T* hi, std::size_t rank, Less& less) {
    for (;;) {
        std::size_t n = static_cast<std::size_t>(hi - lo);
        assert(rank < n);
        if (n <= 10) {
            small_sort(lo, hi, less);
            return;
        }
        // Sort each group of 5 and collect the group medians at the front.
        // Slot `g` lies in an already-consumed group, so the swap is safe.
        std::size_t groups = 0;
        for (std::size_t i = 0; i < n; i += 5) {
            std::size_t glen = std::min<std::size_t>(5, n - i);
            small_sort(lo + i, lo + i + glen, less);
            std::swap(lo[groups], lo[i + glen / 2]);
            ++groups;
        }
        nth_smallest(lo, lo + groups, groups / 2, less);
        auto [eq_lo, eq_hi] = partition3(lo, hi, groups / 2, less);
        if (rank < eq_lo) {
            hi = lo + eq_lo;
        } else if (rank < eq_hi) {
            return;
        } else {
            lo += eq_hi;
            rank -= eq_hi;
        }
    }
}

template <typename T, typename Less>
void nth_smallest_random(T* lo, T* hi, std::size_t rank, Less& less, std::mt19937_64& rng) {
    for (;;) {
        std::size_t n = static_cast<std::size_t>(hi - lo);
        assert(rank < n);
        if (n <= 10) {
            small_sort(lo, hi, less);
            return;
        }
        auto [eq_lo, eq_hi] = partition3(lo, hi, static_cast<std::size_t>(rng() % n), less);
        if (rank < eq_lo) {
            hi = lo + eq_lo;
        } else if (rank < eq_hi) {
            return;
        } else {
            lo += eq_hi;
            rank -= eq_hi;
        }
    }
}

}  // namespace detail

// Rearranges items so the k largest under `less` occupy items[0..k) in no
// particular order, with the k-th largest itself at items[k-1], and returns
// a reference to it. Worst-case linear time (median-of-medians).
template <typename T, typename Less = std::less<T>>
T& select_kth_largest(std::span<T> items, std::size_t k, Less less = {}) {
    assert(k >= 1 && k <= items.size());
    auto gt = [&less](const T& a, const T& b) { return less(b, a); };
    detail::nth_smallest(items.data(), items.data() + items.size(), k - 1, gt);
    return items[k - 1];
}

// Same contract with randomized pivots (expected linear time).
template <typename T, typename Less = std::less<T>>
T& select_kth_largest_random(std::span<T> items, std::size_t k, Less less, std::mt19937_64& rng) {
    assert(k >= 1 && k <= items.size());
    auto gt = [&less](const T& a, const T& b) { return less(b, a); };
    detail::nth_smallest_random(items.data(), items.data() + items.size(), k - 1, gt, rng);
    return items[k - 1];
}

// Streaming top-k retention in bounded space: the buffer holds at most
// retain+staging records, and each time it fills, a single linear-time
// selection compacts it back down to the `retain` largest seen so far.
// Record keys must be strictly ordered under Less (no ties).
template <typename Record, typename Less = std::less<Record>>
class TopKBuffer {
public:
    TopKBuffer(ResourceMeter& meter, std::size_t retain, std::size_t staging, Less less = {})
        : buf_(meter, retain + staging), retain_(retain), less_(std::move(less)) {
        assert(retain >= 1 && staging >= 1);
    }

    void push(Record rec) {
        buf_.push_back(std::move(rec));  // capacity assert inside = the 2k space bound
        ++pushed_;
        if (buf_.size() == buf_.capacity()) compact();
    }

    // Final compaction; survivors are the retained largest, unordered.
    std::span<Record> finish() {
        if (buf_.size() > retain_) compact();
        return {buf_.data(), buf_.size()};
    }

    std::size_t size() const { return buf_.size(); }
    std::size_t pushed() const { return pushed_; }
    std::size_t compactions() const { return compactions_; }

    // Reuse the buffer for a fresh stream without reallocating.
    void clear() {
        buf_.clear();
        pushed_ = 0;
        compactions_ = 0;
    }

private:
    void compact() {
        assert(buf_.size() > retain_);
        select_kth_largest(std::span<Record>(buf_.data(), buf_.size()), retain_, less_);
        buf_.truncate(retain_);
        ++compactions_;
    }

    Workspace<Record> buf_;
    std::size_t retain_;
    std::size_t pushed_ = 0;
    std::size_t compactions_ = 0;
    Less less_;
};

}  // namespace kmatch
