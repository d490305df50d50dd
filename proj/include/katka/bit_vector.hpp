#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace katka {

// Plain bit sequence with constant-time rank and logarithmic select.
// Call build() after the last set(); rank/select are undefined before that.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n);
    BitVector(std::vector<std::uint64_t> words, std::size_t n);

    std::size_t size() const { return size_; }
    bool operator[](std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool value = true);

    void build();

    // Number of 1-bits in [0, i).
    std::size_t rank1(std::size_t i) const;
    std::size_t rank0(std::size_t i) const { return i - rank1(i); }
    // Position of the (k+1)-th 1-bit; k is 0-based. Throws std::out_of_range.
    std::size_t select1(std::size_t k) const;
    std::size_t ones() const { return ones_; }

    std::span<const std::uint64_t> words() const { return words_; }

    friend bool operator==(const BitVector& a, const BitVector& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

private:
    static constexpr std::size_t kWordsPerBlock = 8;

    std::vector<std::uint64_t> words_;
    std::vector<std::uint64_t> block_rank_;  // 1-bits before each 512-bit block
    std::size_t size_ = 0;
    std::size_t ones_ = 0;
};

}  // namespace katka
