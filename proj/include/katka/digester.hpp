#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "katka/alphabet.hpp"
#include "katka/collection.hpp"

namespace katka {

// Affine hash (a*x + b) mod m over k-mer values.
struct HashParams {
    std::uint64_t a = 2544;
    std::uint64_t b = 3937;
    std::uint64_t m = 8863;

    friend bool operator==(const HashParams&, const HashParams&) = default;
};

struct DigestParams {
    unsigned k = 3;   // minimizer width in bases
    unsigned w = 10;  // window size in k-mers
    HashParams hash;

    void validate() const;
    friend bool operator==(const DigestParams&, const DigestParams&) = default;
};

// Digest symbols are kFirstData + k-mer value; collection digests put one
// kSeparator after each genome's digest.
struct Digest {
    Text symbols;
    DigestParams params;

    std::size_t non_separator_count() const;
};

// Base-4 value with the FIRST base as the least significant digit (A=0..T=3).
std::uint64_t kmer_value(std::string_view kmer);
std::uint64_t kmer_value(std::span<const Symbol> kmer);

std::uint64_t minimizer_hash(const HashParams& h, std::uint64_t x);

// True when the hash is one-to-one on all 4^k values.
bool hash_is_injective(const DigestParams& p);

// Start positions of the marked k-mers, increasing. k-mers containing the
// wildcard 'N' are never eligible.
std::vector<std::size_t> minimizer_positions(std::string_view s, const DigestParams& p);

Digest digest_sequence(std::string_view s, const DigestParams& p);
Digest digest_collection(const GenomeCollection& c, const DigestParams& p);

// One character per symbol (37 + value), '$' and '#' verbatim. Requires k == 3.
std::string render_ascii(std::span<const Symbol> symbols, unsigned k);
inline std::string render_ascii(const Digest& d) { return render_ascii(d.symbols, d.params.k); }
Text parse_ascii_digest(std::string_view rendered);

// Comma-separated k-mer values ('$'/'#' verbatim) for any k.
std::string render_values(std::span<const Symbol> symbols);

}  // namespace katka
