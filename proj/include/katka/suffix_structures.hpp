#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "katka/alphabet.hpp"
#include "katka/bit_vector.hpp"

namespace katka {

using Pos = std::uint64_t;

// Sorted suffix start positions of text+EOF; length |text|+1 and sa[0] == |text|.
// Built with induced sorting (SA-IS), linear time.
std::vector<Pos> build_suffix_array(std::span<const Symbol> text, std::uint64_t sigma);

// Kasai et al. Standard (non-rotational) LCP; lcp[0] == 0.
std::vector<Pos> build_lcp_array(std::span<const Symbol> text, std::span<const Pos> sa);

// bwt[i] = text[sa[i]-1], or EOF where sa[i] == 0.
std::vector<Symbol> derive_bwt(std::span<const Symbol> text, std::span<const Pos> sa);

// Sequence with per-symbol rank/select, one bit vector per occurring symbol.
class IndexedSequence {
public:
    IndexedSequence() = default;
    explicit IndexedSequence(std::vector<Symbol> symbols);

    std::size_t size() const { return symbols_.size(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }
    std::span<const Symbol> symbols() const { return symbols_; }

    // Occurrences of c in [0, i).
    std::size_t rank(Symbol c, std::size_t i) const;
    // Position of the (k+1)-th occurrence of c. Throws std::out_of_range.
    std::size_t select(Symbol c, std::size_t k) const;
    std::size_t count(Symbol c) const;
    bool contains(Symbol c) const { return slot(c) != nullptr; }

    // Distinct symbols in increasing order.
    std::span<const Symbol> distinct() const { return present_; }

private:
    const BitVector* slot(Symbol c) const;

    std::vector<Symbol> symbols_;
    std::vector<Symbol> present_;
    std::vector<BitVector> occurrences_;   // parallel to present_
    std::vector<std::int32_t> direct_;     // symbol -> slot, when the alphabet is small
};

enum class Extreme : std::uint8_t { min, max };

// Position-of-extreme queries over a fixed array. The structure does not own
// the values; every query receives the same span it was built over.
// Sparse table over 32-element blocks plus in-block scans, ties to the left.
class RmqStructure {
public:
    RmqStructure() = default;
    RmqStructure(std::span<const Pos> values, Extreme kind);

    Extreme kind() const { return kind_; }

    // Leftmost position of the extreme in [lo, hi]. Throws on an empty or
    // out-of-bounds range.
    std::size_t query(std::span<const Pos> values, std::size_t lo, std::size_t hi) const;

private:
    static constexpr std::size_t kBlock = 32;

    bool better(std::span<const Pos> values, std::size_t a, std::size_t b) const;
    std::size_t scan(std::span<const Pos> values, std::size_t lo, std::size_t hi) const;

    Extreme kind_ = Extreme::min;
    std::size_t size_ = 0;
    std::vector<std::vector<std::uint64_t>> table_;  // table_[j][b]: best over blocks b..b+2^j-1
};

inline std::size_t range_extreme(const RmqStructure& r, std::span<const Pos> values,
                                 std::size_t lo, std::size_t hi) {
    return r.query(values, lo, hi);
}

// Previous/next strictly smaller value over an array. psv returns -1 and
// nsv returns size() when no such entry exists.
class SmallerValues {
public:
    SmallerValues() = default;
    explicit SmallerValues(std::span<const Pos> values);

    std::int64_t psv(std::size_t i) const { return psv_.at(i); }
    std::int64_t nsv(std::size_t i) const { return nsv_.at(i); }
    std::size_t size() const { return psv_.size(); }

private:
    std::vector<std::int64_t> psv_;
    std::vector<std::int64_t> nsv_;
};

}  // namespace katka
