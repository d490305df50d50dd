#include "katka/digester.hpp"

#include <deque>
#include <limits>
#include <numeric>
#include <vector>

#include "katka/error.hpp"

namespace katka {

static_assert(std::gcd(2544, 8863) == 1, "default minimizer hash must be injective on 3-mers");

namespace {

constexpr std::uint64_t kIneligible = std::numeric_limits<std::uint64_t>::max();
constexpr char kAsciiOffset = 37;

int digit_of(char c) {
    switch (c) {
        case 'A': case 'a': return 0;
        case 'C': case 'c': return 1;
        case 'G': case 'g': return 2;
        case 'T': case 't': return 3;
        case 'N': case 'n': return -1;
        default:
            throw ValidationError(std::string("non-base symbol '") + c + "' in digest input");
    }
}

}  // namespace

void DigestParams::validate() const {
    if (k == 0 || k > kMaxDigestK) {
        throw ValidationError("minimizer k must lie in [1, " + std::to_string(kMaxDigestK) + "]");
    }
    if (w == 0) throw ValidationError("window size w must be at least 1");
    if (hash.m == 0) throw ValidationError("hash modulus m must be positive");
}

std::size_t Digest::non_separator_count() const {
    std::size_t n = 0;
    for (Symbol s : symbols) n += (s != kSeparator && s != kHash) ? 1 : 0;
    return n;
}

std::uint64_t kmer_value(std::string_view kmer) {
    std::uint64_t x = 0;
    for (std::size_t j = kmer.size(); j-- > 0;) {
        const int d = digit_of(kmer[j]);
        if (d < 0) throw ValidationError("k-mer contains a wildcard");
        x = x * 4 + static_cast<std::uint64_t>(d);
    }
    return x;
}

std::uint64_t kmer_value(std::span<const Symbol> kmer) {
    std::uint64_t x = 0;
    for (std::size_t j = kmer.size(); j-- > 0;) {
        const int d = base_digit(kmer[j]);
        if (d < 0) throw ValidationError("k-mer contains a non-base symbol");
        x = x * 4 + static_cast<std::uint64_t>(d);
    }
    return x;
}

std::uint64_t minimizer_hash(const HashParams& h, std::uint64_t x) {
    const unsigned __int128 v = static_cast<unsigned __int128>(h.a) * x + h.b;
    return static_cast<std::uint64_t>(v % h.m);
}

bool hash_is_injective(const DigestParams& p) {
    p.validate();
    const std::uint64_t values = std::uint64_t{1} << (2 * p.k);
    if (values > p.hash.m) return false;
    if (std::gcd(p.hash.a % p.hash.m, p.hash.m) == 1) return true;
    std::vector<bool> seen(p.hash.m, false);
    for (std::uint64_t x = 0; x < values; ++x) {
        const auto h = minimizer_hash(p.hash, x);
        if (seen[h]) return false;
        seen[h] = true;
    }
    return true;
}

namespace {

// k-mer values and hashes for every start position; wildcards poison a k-mer.
void kmer_hashes(std::string_view s, const DigestParams& p, std::vector<std::uint64_t>& values,
                 std::vector<std::uint64_t>& hashes) {
    const std::size_t k = p.k;
    values.clear();
    hashes.clear();
    if (s.size() < k) return;
    const std::size_t count = s.size() - k + 1;
    values.resize(count);
    hashes.resize(count);

    const std::uint64_t top = std::uint64_t{1} << (2 * (k - 1));
    std::uint64_t x = 0;
    std::size_t last_wildcard = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const int d = digit_of(s[i]);
        if (d < 0) last_wildcard = i;
        // Shifting right drops the first base, the new base enters as the top digit.
        x = (x >> 2) + static_cast<std::uint64_t>(d < 0 ? 0 : d) * top;
        if (i + 1 >= k) {
            const std::size_t start = i + 1 - k;
            const bool poisoned =
                last_wildcard != std::numeric_limits<std::size_t>::max() && last_wildcard >= start;
            values[start] = x;
            hashes[start] = poisoned ? kIneligible : minimizer_hash(p.hash, x);
        }
    }
}

}  // namespace

std::vector<std::size_t> minimizer_positions(std::string_view s, const DigestParams& p) {
    p.validate();
    std::vector<std::uint64_t> values;
    std::vector<std::uint64_t> hashes;
    kmer_hashes(s, p, values, hashes);

    std::vector<std::size_t> marked;
    if (hashes.size() < p.w) return marked;

    // Monotone deque of candidates; equal hashes keep the earlier position in front.
    std::deque<std::size_t> window;
    for (std::size_t j = 0; j < hashes.size(); ++j) {
        while (!window.empty() && hashes[window.back()] > hashes[j]) window.pop_back();
        window.push_back(j);
        if (j + 1 < p.w) continue;
        const std::size_t start = j + 1 - p.w;
        while (window.front() < start) window.pop_front();
        const std::size_t best = window.front();
        if (hashes[best] == kIneligible) continue;
        if (marked.empty() || marked.back() != best) marked.push_back(best);
    }
    return marked;
}

Digest digest_sequence(std::string_view s, const DigestParams& p) {
    p.validate();
    Digest d{{}, p};
    const auto positions = minimizer_positions(s, p);
    d.symbols.reserve(positions.size());
    for (std::size_t j : positions) {
        d.symbols.push_back(kFirstData + static_cast<Symbol>(kmer_value(s.substr(j, p.k))));
    }
    return d;
}

Digest digest_collection(const GenomeCollection& c, const DigestParams& p) {
    p.validate();
    Digest d{{}, p};
    for (const auto& genome : c.genomes) {
        const Digest part = digest_sequence(genome, p);
        d.symbols.insert(d.symbols.end(), part.symbols.begin(), part.symbols.end());
        d.symbols.push_back(kSeparator);
    }
    return d;
}

std::string render_ascii(std::span<const Symbol> symbols, unsigned k) {
    if (k != 3) throw ValidationError("ASCII rendering is defined for k = 3 only; use integer form");
    std::string out;
    out.reserve(symbols.size());
    for (Symbol s : symbols) {
        if (s == kSeparator) {
            out.push_back('$');
        } else if (s == kHash) {
            out.push_back('#');
        } else if (s >= kFirstData && s < kFirstData + 64) {
            out.push_back(static_cast<char>(kAsciiOffset + static_cast<char>(s - kFirstData)));
        } else {
            throw ValidationError("symbol " + std::to_string(s) + " is not a 3-mer digest symbol");
        }
    }
    return out;
}

Text parse_ascii_digest(std::string_view rendered) {
    Text out;
    out.reserve(rendered.size());
    for (char c : rendered) {
        if (c == '$') {
            out.push_back(kSeparator);
        } else if (c == '#') {
            out.push_back(kHash);
        } else if (c >= kAsciiOffset && c < kAsciiOffset + 64) {
            out.push_back(kFirstData + static_cast<Symbol>(c - kAsciiOffset));
        } else {
            throw ValidationError(std::string("character '") + c + "' is not a rendered 3-mer");
        }
    }
    return out;
}

std::string render_values(std::span<const Symbol> symbols) {
    std::string out;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i > 0) out.push_back(',');
        if (symbols[i] == kSeparator) {
            out.push_back('$');
        } else if (symbols[i] == kHash) {
            out.push_back('#');
        } else {
            out += std::to_string(symbols[i] - kFirstData);
        }
    }
    return out;
}

}  // namespace katka
