#include "katka/alphabet.hpp"

#include "katka/error.hpp"

namespace katka {

Alphabet Alphabet::digest_of(unsigned k) {
    if (k == 0 || k > kMaxDigestK) {
        throw ValidationError("digest k must lie in [1, " + std::to_string(kMaxDigestK) +
                              "], got " + std::to_string(k));
    }
    return {AlphabetKind::digest, k};
}

std::uint64_t Alphabet::sigma() const {
    if (kind == AlphabetKind::nucleotide) return kWildcard + 1;
    return kFirstData + (std::uint64_t{1} << (2 * k));
}

bool Alphabet::is_query_symbol(Symbol s) const {
    if (kind == AlphabetKind::nucleotide) return s >= kBaseA && s <= kBaseT;
    return s >= kFirstData && s < sigma();
}

Symbol base_to_symbol(char c) {
    switch (c) {
        case 'A': case 'a': return kBaseA;
        case 'C': case 'c': return kBaseC;
        case 'G': case 'g': return kBaseG;
        case 'T': case 't': return kBaseT;
        case 'N': case 'n': return kWildcard;
        case '$': return kSeparator;
        case '#': return kHash;
        default:
            throw ValidationError(std::string("unexpected character '") + c + "'");
    }
}

int base_digit(Symbol s) {
    return (s >= kBaseA && s <= kBaseT) ? static_cast<int>(s - kBaseA) : -1;
}

char symbol_to_char(Symbol s) {
    static constexpr char table[] = {'\0', '#', '$', 'A', 'C', 'G', 'T', 'N'};
    return s < sizeof(table) ? table[s] : '?';
}

std::string render_nucleotides(const Text& text) {
    std::string out;
    out.reserve(text.size());
    for (Symbol s : text) out.push_back(symbol_to_char(s));
    return out;
}

Text parse_nucleotide_text(const std::string& s) {
    Text out;
    out.reserve(s.size());
    for (char c : s) out.push_back(base_to_symbol(c));
    return out;
}

}  // namespace katka
