#include "katka/bit_vector.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace katka {

namespace {

std::size_t select_in_word(std::uint64_t word, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) word &= word - 1;
    return static_cast<std::size_t>(std::countr_zero(word));
}

}  // namespace

BitVector::BitVector(std::size_t n) : words_((n + 63) / 64, 0), size_(n) {}

BitVector::BitVector(std::vector<std::uint64_t> words, std::size_t n)
    : words_(std::move(words)), size_(n) {
    if (words_.size() != (n + 63) / 64) {
        throw std::invalid_argument("bit vector word count does not match its length");
    }
    if (n % 64 != 0 && !words_.empty()) {
        words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
    }
    build();
}

void BitVector::set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

void BitVector::build() {
    block_rank_.assign(words_.size() / kWordsPerBlock + 1, 0);
    std::uint64_t running = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        if (w % kWordsPerBlock == 0) block_rank_[w / kWordsPerBlock] = running;
        running += static_cast<std::uint64_t>(std::popcount(words_[w]));
    }
    if (words_.size() % kWordsPerBlock == 0) block_rank_.back() = running;
    ones_ = running;
}

std::size_t BitVector::rank1(std::size_t i) const {
    if (i > size_) throw std::out_of_range("rank position " + std::to_string(i) + " beyond length");
    const std::size_t word = i >> 6;
    std::size_t r = block_rank_[word / kWordsPerBlock];
    for (std::size_t w = word - word % kWordsPerBlock; w < word; ++w) {
        r += static_cast<std::size_t>(std::popcount(words_[w]));
    }
    if ((i & 63) != 0) {
        r += static_cast<std::size_t>(
            std::popcount(words_[word] & ((std::uint64_t{1} << (i & 63)) - 1)));
    }
    return r;
}

std::size_t BitVector::select1(std::size_t k) const {
    if (k >= ones_) throw std::out_of_range("select of 1-bit " + std::to_string(k) + " beyond count");
    // Last block whose preceding count is <= k.
    auto it = std::upper_bound(block_rank_.begin(), block_rank_.end(), k);
    std::size_t block = static_cast<std::size_t>(it - block_rank_.begin()) - 1;
    std::size_t remaining = k - block_rank_[block];
    for (std::size_t w = block * kWordsPerBlock; w < words_.size(); ++w) {
        const auto count = static_cast<std::size_t>(std::popcount(words_[w]));
        if (remaining < count) return w * 64 + select_in_word(words_[w], remaining);
        remaining -= count;
    }
    throw std::logic_error("bit vector rank directory is inconsistent");
}

}  // namespace katka
