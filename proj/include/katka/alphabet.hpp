#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace katka {

// Every indexed text (raw genomes, kernels, digests) is a sequence of
// integer symbols sharing one total order:
//
//   EOF < '#' < '$' < data symbols
//
// Nucleotides occupy A=3, C=4, G=5, T=6 and the --allow-n wildcard sits at 7.
// Digest symbols are 3 + k-mer value.
using Symbol = std::uint32_t;
using Text = std::vector<Symbol>;

inline constexpr Symbol kEof = 0;
inline constexpr Symbol kHash = 1;
inline constexpr Symbol kSeparator = 2;
inline constexpr Symbol kFirstData = 3;

inline constexpr Symbol kBaseA = 3;
inline constexpr Symbol kBaseC = 4;
inline constexpr Symbol kBaseG = 5;
inline constexpr Symbol kBaseT = 6;
inline constexpr Symbol kWildcard = 7;

// Largest k for which 3 + 4^k still fits a Symbol.
inline constexpr unsigned kMaxDigestK = 15;

enum class AlphabetKind : std::uint8_t { nucleotide = 0, digest = 1 };

struct Alphabet {
    AlphabetKind kind = AlphabetKind::nucleotide;
    unsigned k = 0;  // digest k-mer width, 0 for nucleotides

    static Alphabet nucleotides() { return {AlphabetKind::nucleotide, 0}; }
    static Alphabet digest_of(unsigned k);

    // Number of distinct symbol codes, EOF included.
    std::uint64_t sigma() const;

    // Symbols a read may contain. Separators, EOF and the wildcard never are.
    bool is_query_symbol(Symbol s) const;

    friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

// Returns kEof..kWildcard for a character, or throws ValidationError.
Symbol base_to_symbol(char c);
int base_digit(Symbol s);  // A=0 .. T=3, -1 otherwise
char symbol_to_char(Symbol s);

// Nucleotide text rendering used for dumps and tests: '$', '#', ACGTN.
std::string render_nucleotides(const Text& text);
Text parse_nucleotide_text(const std::string& s);

}  // namespace katka
