#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "katka/alphabet.hpp"
#include "katka/bit_vector.hpp"

namespace katka {

// automatic: FASTA when the first non-blank line starts with '>', else one genome per line.
enum class InputFormat { automatic, fasta, lines };

struct ParseOptions {
    InputFormat format = InputFormat::automatic;
    // Map non-ACGT letters to the never-matching wildcard instead of rejecting.
    bool allow_n = false;
};

// Genomes in file order, upper-cased; the wildcard is stored as 'N'.
struct GenomeCollection {
    std::vector<std::string> genomes;
    std::vector<std::string> names;

    std::size_t size() const { return genomes.size(); }
    // Length of the separated concatenation (one '$' per genome).
    std::size_t concatenated_length() const;
    std::size_t base_count() const;

    friend bool operator==(const GenomeCollection&, const GenomeCollection&) = default;
};

GenomeCollection parse_collection(std::istream& in, const ParseOptions& options = {});
GenomeCollection parse_collection_string(const std::string& data, const ParseOptions& options = {});
GenomeCollection read_collection_file(const std::string& path, const ParseOptions& options = {});

// Throws ValidationError if any genome is empty or holds a reserved symbol.
void validate(const GenomeCollection& c);

void write_fasta(std::ostream& out, const GenomeCollection& c);

// genome0 $ genome1 $ ... genome{G-1} $, with B marking every '$'.
struct SeparatedText {
    Text text;
    BitVector separators;

    std::size_t genome_count() const { return separators.ones(); }
};

SeparatedText separate(const GenomeCollection& c);

// Builds the separator bit vector for any text that uses kSeparator.
BitVector separator_bits(std::span<const Symbol> text);

// Count of '$' strictly before p. Throws ValidationError if text[p] is '$'.
std::size_t genome_of_position(const SeparatedText& st, std::size_t p);

}  // namespace katka
