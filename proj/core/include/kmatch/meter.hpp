#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace kmatch {

// Tracks the resources one algorithm run consumes on top of the read-only
// graph store: working memory in 64-bit words, complete input scans, and
// out-of-order word reads. The store itself is never charged; a meter sees
// only what the run allocates.
class ResourceMeter {
public:
    void charge(std::uint64_t words) {
        current_ += words;
        if (current_ > peak_) peak_ = current_;
    }

    void release(std::uint64_t words) {
        assert(words <= current_);
        current_ -= words;
    }

    void note_full_pass() { ++full_passes_; }
    void note_random_reads(std::uint64_t words) { random_reads_ += words; }

    std::uint64_t peak_workspace_words() const { return peak_; }
    std::uint64_t current_words() const { return current_; }
    std::uint64_t full_passes() const { return full_passes_; }
    std::uint64_t random_reads() const { return random_reads_; }

private:
    std::uint64_t current_ = 0;
    std::uint64_t peak_ = 0;         // monotone within a run
    std::uint64_t full_passes_ = 0;
    std::uint64_t random_reads_ = 0;
};

// RAII handle for a block of charged words.
class MeterCharge {
public:
    MeterCharge() = default;
    MeterCharge(ResourceMeter& meter, std::uint64_t words) : meter_(&meter), words_(words) {
        meter.charge(words);
    }
    MeterCharge(MeterCharge&& other) noexcept
        : meter_(std::exchange(other.meter_, nullptr)), words_(std::exchange(other.words_, 0)) {}
    MeterCharge& operator=(MeterCharge&& other) noexcept {
        if (this != &other) {
            reset();
            meter_ = std::exchange(other.meter_, nullptr);
            words_ = std::exchange(other.words_, 0);
        }
        return *this;
    }
    MeterCharge(const MeterCharge&) = delete;
    MeterCharge& operator=(const MeterCharge&) = delete;
    ~MeterCharge() { reset(); }

    void reset() {
        if (meter_) meter_->release(words_);
        meter_ = nullptr;
        words_ = 0;
    }

    std::uint64_t words() const { return words_; }

private:
    ResourceMeter* meter_ = nullptr;
    std::uint64_t words_ = 0;
};

// Fixed-capacity vector whose capacity is charged to a meter up front, so the
// reported footprint depends on the declared capacity and never on fill state.
// Growth past the declared capacity is a bug.
template <typename T>
class Workspace {
public:
    static std::uint64_t words_for(std::size_t capacity) {
        return (static_cast<std::uint64_t>(capacity) * sizeof(T) + 7) / 8;
    }

    Workspace() = default;
    Workspace(ResourceMeter& meter, std::size_t capacity)
        : charge_(meter, words_for(capacity)), cap_(capacity) {
        data_.reserve(capacity);
    }
    Workspace(Workspace&&) noexcept = default;
    Workspace& operator=(Workspace&&) noexcept = default;

    void push_back(T value) {
        assert(data_.size() < cap_);
        data_.push_back(std::move(value));
    }

    template <typename... Args>
    void emplace_back(Args&&... args) {
        assert(data_.size() < cap_);
        data_.emplace_back(std::forward<Args>(args)...);
    }

    void resize(std::size_t n) {
        assert(n <= cap_);
        data_.resize(n);
    }

    void assign(std::size_t n, const T& value) {
        assert(n <= cap_);
        data_.assign(n, value);
    }

    void clear() { data_.clear(); }
    void truncate(std::size_t n) {
        assert(n <= data_.size());
        data_.resize(n);
    }

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return cap_; }
    bool empty() const { return data_.empty(); }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }
    T& back() { return data_.back(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    std::vector<T>& vec() { return data_; }
    const std::vector<T>& vec() const { return data_; }

private:
    MeterCharge charge_;
    std::size_t cap_ = 0;
    std::vector<T> data_;
};

}  // namespace kmatch
