#include "katka/suffix_structures.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "katka/error.hpp"

namespace katka {

namespace {

constexpr std::int64_t kEmpty = -1;

using Buckets = std::vector<std::int64_t>;

Buckets bucket_bounds(std::span<const std::uint64_t> s, std::size_t alphabet, bool ends) {
    Buckets count(alphabet, 0);
    for (auto c : s) ++count[c];
    std::int64_t sum = 0;
    for (std::size_t c = 0; c < alphabet; ++c) {
        sum += count[c];
        count[c] = ends ? sum : sum - count[c];
    }
    return count;
}

void induce(std::span<const std::uint64_t> s, std::vector<std::int64_t>& sa,
            const std::vector<bool>& is_s, std::size_t alphabet) {
    const std::size_t n = s.size();
    Buckets bucket = bucket_bounds(s, alphabet, false);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t j = sa[i] - 1;
        if (sa[i] > 0 && !is_s[static_cast<std::size_t>(j)]) sa[bucket[s[j]]++] = j;
    }
    bucket = bucket_bounds(s, alphabet, true);
    for (std::size_t i = n; i-- > 0;) {
        const std::int64_t j = sa[i] - 1;
        if (sa[i] > 0 && is_s[static_cast<std::size_t>(j)]) sa[--bucket[s[j]]] = j;
    }
}

// Induced sorting. s ends with a unique smallest symbol 0; every symbol < alphabet.
std::vector<std::int64_t> sais(std::span<const std::uint64_t> s, std::size_t alphabet) {
    const std::size_t n = s.size();
    std::vector<std::int64_t> sa(n, kEmpty);
    if (n == 1) {
        sa[0] = 0;
        return sa;
    }

    std::vector<bool> is_s(n, false);
    is_s[n - 1] = true;
    for (std::size_t i = n - 1; i-- > 0;) {
        is_s[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && is_s[i + 1]);
    }
    auto is_lms = [&](std::size_t i) { return i > 0 && is_s[i] && !is_s[i - 1]; };

    // Stage 1: sort LMS substrings.
    Buckets bucket = bucket_bounds(s, alphabet, true);
    for (std::size_t i = 1; i < n; ++i) {
        if (is_lms(i)) sa[--bucket[s[i]]] = static_cast<std::int64_t>(i);
    }
    induce(s, sa, is_s, alphabet);

    std::size_t lms_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_lms(static_cast<std::size_t>(sa[i]))) sa[lms_count++] = sa[i];
    }

    // Name LMS substrings; names land at sa[lms_count + pos/2].
    std::fill(sa.begin() + static_cast<std::ptrdiff_t>(lms_count), sa.end(), kEmpty);
    std::int64_t names = 0;
    std::int64_t prev = kEmpty;
    for (std::size_t i = 0; i < lms_count; ++i) {
        const auto pos = static_cast<std::size_t>(sa[i]);
        bool differs = prev == kEmpty;
        if (!differs) {
            const auto p = static_cast<std::size_t>(prev);
            for (std::size_t d = 0;; ++d) {
                if (s[pos + d] != s[p + d] || is_s[pos + d] != is_s[p + d]) {
                    differs = true;
                    break;
                }
                if (d > 0 && (is_lms(pos + d) || is_lms(p + d))) break;
            }
        }
        if (differs) {
            ++names;
            prev = static_cast<std::int64_t>(pos);
        }
        sa[lms_count + pos / 2] = names - 1;
    }

    std::vector<std::uint64_t> reduced;
    reduced.reserve(lms_count);
    for (std::size_t i = lms_count; i < n; ++i) {
        if (sa[i] != kEmpty) reduced.push_back(static_cast<std::uint64_t>(sa[i]));
    }

    // Stage 2: sort the reduced problem.
    std::vector<std::int64_t> reduced_sa;
    if (static_cast<std::size_t>(names) < lms_count) {
        reduced_sa = sais(reduced, static_cast<std::size_t>(names));
    } else {
        reduced_sa.assign(lms_count, 0);
        for (std::size_t i = 0; i < lms_count; ++i) {
            reduced_sa[reduced[i]] = static_cast<std::int64_t>(i);
        }
    }

    // Stage 3: induce the full order from the sorted LMS suffixes.
    std::vector<std::int64_t> lms_positions;
    lms_positions.reserve(lms_count);
    for (std::size_t i = 1; i < n; ++i) {
        if (is_lms(i)) lms_positions.push_back(static_cast<std::int64_t>(i));
    }
    std::fill(sa.begin(), sa.end(), kEmpty);
    bucket = bucket_bounds(s, alphabet, true);
    for (std::size_t i = lms_count; i-- > 0;) {
        const std::int64_t j = lms_positions[static_cast<std::size_t>(reduced_sa[i])];
        sa[--bucket[s[j]]] = j;
    }
    induce(s, sa, is_s, alphabet);
    return sa;
}

}  // namespace

std::vector<Pos> build_suffix_array(std::span<const Symbol> text, std::uint64_t sigma) {
    std::vector<std::uint64_t> s;
    s.reserve(text.size() + 1);
    for (Symbol c : text) {
        if (c == kEof || c >= sigma) {
            throw ValidationError("symbol " + std::to_string(c) + " outside the index alphabet");
        }
        s.push_back(c);
    }
    s.push_back(kEof);
    const auto sa = sais(s, static_cast<std::size_t>(sigma));
    return {sa.begin(), sa.end()};
}

std::vector<Pos> build_lcp_array(std::span<const Symbol> text, std::span<const Pos> sa) {
    const std::size_t n = sa.size();  // |text| + 1
    if (n != text.size() + 1) throw std::invalid_argument("suffix array length does not match text");
    auto at = [&](std::size_t p) { return p < text.size() ? text[p] : kEof; };

    std::vector<Pos> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[sa[i]] = i;
    std::vector<Pos> lcp(n, 0);
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const std::size_t j = sa[rank[i] - 1];
        // EOF is unique, so matching never runs past it.
        while (i + h < text.size() && j + h < text.size() && at(i + h) == at(j + h)) ++h;
        lcp[rank[i]] = h;
        if (h > 0) --h;
    }
    return lcp;
}

std::vector<Symbol> derive_bwt(std::span<const Symbol> text, std::span<const Pos> sa) {
    std::vector<Symbol> bwt(sa.size());
    for (std::size_t i = 0; i < sa.size(); ++i) bwt[i] = sa[i] == 0 ? kEof : text[sa[i] - 1];
    return bwt;
}

// ---------------------------------------------------------------------------

IndexedSequence::IndexedSequence(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    present_ = symbols_;
    std::sort(present_.begin(), present_.end());
    present_.erase(std::unique(present_.begin(), present_.end()), present_.end());

    occurrences_.assign(present_.size(), BitVector(symbols_.size()));
    constexpr Symbol kDirectLimit = Symbol{1} << 20;
    if (!present_.empty() && present_.back() < kDirectLimit) {
        direct_.assign(present_.back() + 1, -1);
        for (std::size_t k = 0; k < present_.size(); ++k) {
            direct_[present_[k]] = static_cast<std::int32_t>(k);
        }
    }
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        const auto k = static_cast<std::size_t>(
            std::lower_bound(present_.begin(), present_.end(), symbols_[i]) - present_.begin());
        occurrences_[k].set(i);
    }
    for (auto& bv : occurrences_) bv.build();
}

const BitVector* IndexedSequence::slot(Symbol c) const {
    if (!direct_.empty() || present_.empty()) {
        if (c >= direct_.size() || direct_[c] < 0) return nullptr;
        return &occurrences_[static_cast<std::size_t>(direct_[c])];
    }
    auto it = std::lower_bound(present_.begin(), present_.end(), c);
    if (it == present_.end() || *it != c) return nullptr;
    return &occurrences_[static_cast<std::size_t>(it - present_.begin())];
}

std::size_t IndexedSequence::rank(Symbol c, std::size_t i) const {
    const BitVector* bv = slot(c);
    if (bv == nullptr) {
        if (i > symbols_.size()) throw std::out_of_range("rank position beyond sequence length");
        return 0;
    }
    return bv->rank1(i);
}

std::size_t IndexedSequence::select(Symbol c, std::size_t k) const {
    const BitVector* bv = slot(c);
    if (bv == nullptr) throw std::out_of_range("select on a symbol that does not occur");
    return bv->select1(k);
}

std::size_t IndexedSequence::count(Symbol c) const {
    const BitVector* bv = slot(c);
    return bv == nullptr ? 0 : bv->ones();
}

// ---------------------------------------------------------------------------

RmqStructure::RmqStructure(std::span<const Pos> values, Extreme kind)
    : kind_(kind), size_(values.size()) {
    const std::size_t blocks = (size_ + kBlock - 1) / kBlock;
    if (blocks == 0) return;
    table_.emplace_back(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        table_[0][b] = scan(values, b * kBlock, std::min(size_, (b + 1) * kBlock) - 1);
    }
    for (std::size_t j = 1; (std::size_t{1} << j) <= blocks; ++j) {
        const std::size_t half = std::size_t{1} << (j - 1);
        const std::size_t width = blocks - (std::size_t{1} << j) + 1;
        std::vector<std::uint64_t> level(width);
        for (std::size_t b = 0; b < width; ++b) {
            const auto a = table_[j - 1][b];
            const auto c = table_[j - 1][b + half];
            level[b] = better(values, c, a) ? c : a;
        }
        table_.push_back(std::move(level));
    }
}

bool RmqStructure::better(std::span<const Pos> values, std::size_t a, std::size_t b) const {
    if (values[a] != values[b]) {
        return kind_ == Extreme::min ? values[a] < values[b] : values[a] > values[b];
    }
    return a < b;
}

std::size_t RmqStructure::scan(std::span<const Pos> values, std::size_t lo, std::size_t hi) const {
    std::size_t best = lo;
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        if (better(values, i, best)) best = i;
    }
    return best;
}

std::size_t RmqStructure::query(std::span<const Pos> values, std::size_t lo, std::size_t hi) const {
    if (values.size() != size_) throw std::invalid_argument("range query over a different array");
    if (lo > hi || hi >= size_) {
        throw std::out_of_range("empty or out-of-bounds range [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
    }
    const std::size_t first_block = lo / kBlock;
    const std::size_t last_block = hi / kBlock;
    if (last_block - first_block <= 1) return scan(values, lo, hi);

    std::size_t best = scan(values, lo, (first_block + 1) * kBlock - 1);
    const std::size_t inner = last_block - first_block - 1;
    const auto level = static_cast<std::size_t>(std::bit_width(inner) - 1);
    for (std::size_t cand : {table_[level][first_block + 1],
                             table_[level][last_block - (std::size_t{1} << level)]}) {
        if (better(values, cand, best)) best = cand;
    }
    const std::size_t tail = scan(values, last_block * kBlock, hi);
    return better(values, tail, best) ? tail : best;
}

// ---------------------------------------------------------------------------

SmallerValues::SmallerValues(std::span<const Pos> values)
    : psv_(values.size()), nsv_(values.size()) {
    const auto n = static_cast<std::int64_t>(values.size());
    std::vector<std::int64_t> stack;
    for (std::int64_t i = 0; i < n; ++i) {
        while (!stack.empty() && values[stack.back()] >= values[i]) stack.pop_back();
        psv_[i] = stack.empty() ? -1 : stack.back();
        stack.push_back(i);
    }
    stack.clear();
    for (std::int64_t i = n; i-- > 0;) {
        while (!stack.empty() && values[stack.back()] >= values[i]) stack.pop_back();
        nsv_[i] = stack.empty() ? n : stack.back();
        stack.push_back(i);
    }
}

}  // namespace katka
