#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "katka/alphabet.hpp"
#include "katka/bit_vector.hpp"
#include "katka/collection.hpp"
#include "katka/digester.hpp"
#include "katka/kernelizer.hpp"
#include "katka/suffix_structures.hpp"

namespace katka {

enum class ProvenanceKind : std::uint8_t { raw = 0, kernel = 1, digest = 2, digest_kernel = 3 };

// What text the index was built over.
struct Provenance {
    ProvenanceKind kind = ProvenanceKind::raw;
    std::uint32_t k_max = 0;  // kernel and digest_kernel
    DigestParams digest;      // digest and digest_kernel

    bool is_digest() const {
        return kind == ProvenanceKind::digest || kind == ProvenanceKind::digest_kernel;
    }
    bool is_kernel() const {
        return kind == ProvenanceKind::kernel || kind == ProvenanceKind::digest_kernel;
    }
    std::string describe() const;

    static Provenance raw() { return {}; }
    static Provenance kernel(std::size_t k_max);
    static Provenance digest_of(const DigestParams& p);
    static Provenance digest_kernel(const DigestParams& p, std::size_t k_max);

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Inclusive row range of the suffix array; empty when hi < lo.
struct SaInterval {
    std::int64_t lo = 0;
    std::int64_t hi = -1;

    bool empty() const { return hi < lo; }
    std::size_t size() const { return empty() ? 0 : static_cast<std::size_t>(hi - lo + 1); }
    friend bool operator==(const SaInterval&, const SaInterval&) = default;
};

enum class StepStatus : std::uint8_t { ok, empty, not_in_alphabet };

struct StepResult {
    StepStatus status = StepStatus::empty;
    SaInterval interval;
};

enum class ShrinkStatus : std::uint8_t { ok, symbol_absent, not_in_alphabet };

struct ShrinkResult {
    ShrinkStatus status = ShrinkStatus::ok;
    SaInterval interval;
    std::size_t length = 0;
};

struct GenomeRange {
    std::size_t first = 0;
    std::size_t last = 0;
    bool empty = true;

    static GenomeRange none() { return {}; }
    static GenomeRange of(std::size_t f, std::size_t l) { return {f, l, false}; }
    friend bool operator==(const GenomeRange&, const GenomeRange&) = default;
};

// FM-index augmented with SA/LCP range queries and the separator bit vector:
// backward search plus first/last occurrence and genome-range extraction.
// Immutable after construction; concurrent queries are safe.
class AugmentedFmIndex {
public:
    static constexpr std::uint32_t kFormatVersion = 1;

    AugmentedFmIndex() = default;

    static AugmentedFmIndex build(std::span<const Symbol> text, Alphabet alphabet,
                                  Provenance provenance);
    static AugmentedFmIndex build(const SeparatedText& st);
    static AugmentedFmIndex build(const Kernel& kernel, Alphabet alphabet, Provenance provenance);
    static AugmentedFmIndex build(const Digest& digest);

    const Alphabet& alphabet() const { return alphabet_; }
    const Provenance& provenance() const { return provenance_; }

    // Number of suffix-array rows (text length + 1).
    std::size_t size() const { return sa_.size(); }
    std::size_t text_length() const { return separators_.size(); }
    std::size_t genome_count() const { return separators_.ones(); }

    std::span<const Pos> sa() const { return sa_; }
    std::span<const Pos> lcp() const { return lcp_; }
    const IndexedSequence& bwt() const { return bwt_; }
    const BitVector& separators() const { return separators_; }
    // Number of BWT symbols smaller than c.
    std::size_t c_value(Symbol c) const;

    SaInterval full_interval() const { return {0, static_cast<std::int64_t>(sa_.size()) - 1}; }

    StepResult backward_step(SaInterval iv, Symbol c) const;
    // Interval of every suffix prefixed by `pattern`; empty if any symbol is
    // absent or not a query symbol.
    SaInterval find(std::span<const Symbol> pattern) const;

    // (first, last) text positions of the interval's pattern.
    std::pair<Pos, Pos> first_last_positions(SaInterval iv) const;
    GenomeRange genome_range(SaInterval iv) const;
    std::size_t genome_of_position(Pos p) const;

    // Longest prefix of the current match (rows iv, length len) that some
    // occurrence of c precedes, with its interval. Call after backward_step(iv, c)
    // came back empty.
    ShrinkResult shrink_to_extendable(SaInterval iv, std::size_t len, Symbol c) const;

    void serialize(std::ostream& out) const;
    std::vector<std::uint8_t> serialize() const;
    static AugmentedFmIndex deserialize(std::istream& in);
    static AugmentedFmIndex deserialize(std::span<const std::uint8_t> bytes);

    void save(const std::string& path) const;
    static AugmentedFmIndex load(const std::string& path);

private:
    void build_query_structures();
    SaInterval widen(std::size_t row, std::size_t length) const;

    Alphabet alphabet_;
    Provenance provenance_;
    IndexedSequence bwt_;
    std::vector<Pos> sa_;
    std::vector<Pos> lcp_;
    BitVector separators_;

    std::vector<Pos> c_table_;  // parallel to bwt_.distinct()
    RmqStructure sa_min_;
    RmqStructure sa_max_;
    RmqStructure lcp_min_;
    SmallerValues lcp_smaller_;
};

}  // namespace katka
