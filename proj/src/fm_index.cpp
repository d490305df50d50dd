#include "katka/fm_index.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "katka/error.hpp"

namespace katka {

std::string Provenance::describe() const {
    const auto digest_part = [&] {
        return "k=" + std::to_string(digest.k) + ",w=" + std::to_string(digest.w);
    };
    switch (kind) {
        case ProvenanceKind::raw: return "raw";
        case ProvenanceKind::kernel: return "kernel(kmax=" + std::to_string(k_max) + ")";
        case ProvenanceKind::digest: return "digest(" + digest_part() + ")";
        case ProvenanceKind::digest_kernel:
            return "digest-kernel(" + digest_part() + ",kmax=" + std::to_string(k_max) + ")";
    }
    return "unknown";
}

Provenance Provenance::kernel(std::size_t k_max) {
    return {ProvenanceKind::kernel, static_cast<std::uint32_t>(k_max), {}};
}

Provenance Provenance::digest_of(const DigestParams& p) {
    return {ProvenanceKind::digest, 0, p};
}

Provenance Provenance::digest_kernel(const DigestParams& p, std::size_t k_max) {
    return {ProvenanceKind::digest_kernel, static_cast<std::uint32_t>(k_max), p};
}

// ---------------------------------------------------------------------------

AugmentedFmIndex AugmentedFmIndex::build(std::span<const Symbol> text, Alphabet alphabet,
                                         Provenance provenance) {
    const auto sigma = alphabet.sigma();
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == kEof || text[i] >= sigma) {
            throw ValidationError("symbol " + std::to_string(text[i]) + " at position " +
                                  std::to_string(i) + " overflows the index alphabet");
        }
    }
    AugmentedFmIndex ix;
    ix.alphabet_ = alphabet;
    ix.provenance_ = provenance;
    ix.sa_ = build_suffix_array(text, sigma);
    ix.lcp_ = build_lcp_array(text, ix.sa_);
    ix.bwt_ = IndexedSequence(derive_bwt(text, ix.sa_));
    ix.separators_ = separator_bits(text);
    ix.build_query_structures();
    return ix;
}

AugmentedFmIndex AugmentedFmIndex::build(const SeparatedText& st) {
    return build(st.text, Alphabet::nucleotides(), Provenance::raw());
}

AugmentedFmIndex AugmentedFmIndex::build(const Kernel& kernel, Alphabet alphabet,
                                         Provenance provenance) {
    return build(kernel.text, alphabet, provenance);
}

AugmentedFmIndex AugmentedFmIndex::build(const Digest& digest) {
    return build(digest.symbols, Alphabet::digest_of(digest.params.k),
                 Provenance::digest_of(digest.params));
}

void AugmentedFmIndex::build_query_structures() {
    c_table_.clear();
    std::size_t running = 0;
    for (Symbol c : bwt_.distinct()) {
        c_table_.push_back(running);
        running += bwt_.count(c);
    }
    sa_min_ = RmqStructure(sa_, Extreme::min);
    sa_max_ = RmqStructure(sa_, Extreme::max);
    lcp_min_ = RmqStructure(lcp_, Extreme::min);
    lcp_smaller_ = SmallerValues(lcp_);
}

std::size_t AugmentedFmIndex::c_value(Symbol c) const {
    const auto distinct = bwt_.distinct();
    const auto it = std::lower_bound(distinct.begin(), distinct.end(), c);
    const auto k = static_cast<std::size_t>(it - distinct.begin());
    return k < c_table_.size() ? c_table_[k] : bwt_.size();
}

StepResult AugmentedFmIndex::backward_step(SaInterval iv, Symbol c) const {
    if (!alphabet_.is_query_symbol(c)) return {StepStatus::not_in_alphabet, {}};
    if (iv.empty() || !bwt_.contains(c)) return {StepStatus::empty, {}};
    const auto base = static_cast<std::int64_t>(c_value(c));
    const auto lo = base + static_cast<std::int64_t>(bwt_.rank(c, static_cast<std::size_t>(iv.lo)));
    const auto hi = base + static_cast<std::int64_t>(bwt_.rank(c, static_cast<std::size_t>(iv.hi) + 1)) - 1;
    SaInterval next{lo, hi};
    return {next.empty() ? StepStatus::empty : StepStatus::ok, next};
}

SaInterval AugmentedFmIndex::find(std::span<const Symbol> pattern) const {
    SaInterval iv = full_interval();
    for (std::size_t i = pattern.size(); i-- > 0;) {
        const auto step = backward_step(iv, pattern[i]);
        if (step.status != StepStatus::ok) return {};
        iv = step.interval;
    }
    return iv;
}

std::pair<Pos, Pos> AugmentedFmIndex::first_last_positions(SaInterval iv) const {
    if (iv.empty()) throw ValidationError("first/last positions of an empty interval");
    const auto lo = static_cast<std::size_t>(iv.lo);
    const auto hi = static_cast<std::size_t>(iv.hi);
    return {sa_[sa_min_.query(sa_, lo, hi)], sa_[sa_max_.query(sa_, lo, hi)]};
}

std::size_t AugmentedFmIndex::genome_of_position(Pos p) const {
    if (p >= separators_.size()) throw ValidationError("position " + std::to_string(p) + " beyond text");
    return separators_.rank1(static_cast<std::size_t>(p));
}

GenomeRange AugmentedFmIndex::genome_range(SaInterval iv) const {
    if (iv.empty()) return GenomeRange::none();
    const auto [first, last] = first_last_positions(iv);
    return GenomeRange::of(genome_of_position(first), genome_of_position(last));
}

SaInterval AugmentedFmIndex::widen(std::size_t row, std::size_t length) const {
    std::size_t lo = 0;
    std::size_t hi = row;
    while (lo < hi) {  // smallest x with min(lcp[x+1..row]) >= length
        const std::size_t mid = lo + (hi - lo) / 2;
        if (lcp_[lcp_min_.query(lcp_, mid + 1, row)] >= length) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    const std::size_t left = lo;
    lo = row;
    hi = sa_.size() - 1;
    while (lo < hi) {  // largest y with min(lcp[row+1..y]) >= length
        const std::size_t mid = lo + (hi - lo + 1) / 2;
        if (lcp_[lcp_min_.query(lcp_, row + 1, mid)] >= length) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return {static_cast<std::int64_t>(left), static_cast<std::int64_t>(lo)};
}

ShrinkResult AugmentedFmIndex::shrink_to_extendable(SaInterval iv, std::size_t len, Symbol c) const {
    if (!alphabet_.is_query_symbol(c)) return {ShrinkStatus::not_in_alphabet, {}, 0};
    const std::size_t total = bwt_.count(c);
    if (total == 0) return {ShrinkStatus::symbol_absent, {}, 0};
    if (iv.empty()) throw ValidationError("shrink_to_extendable needs a non-empty interval");

    const auto lo = static_cast<std::size_t>(iv.lo);
    const auto hi = static_cast<std::size_t>(iv.hi);
    const std::size_t before = bwt_.rank(c, lo);
    const std::size_t through = bwt_.rank(c, hi + 1);
    if (through > before) {
        // c already precedes the full match; nothing to shrink.
        return {ShrinkStatus::ok, iv, len};
    }

    // Longest common prefix with the nearest c-preceded suffix on either side.
    std::size_t best = 0;
    std::size_t best_row = 0;
    bool found = false;
    if (before > 0) {
        const std::size_t above = bwt_.select(c, before - 1);
        const std::size_t j = lcp_min_.query(lcp_, above + 1, lo);
        best = lcp_[j];
        best_row = j;
        found = true;
    }
    if (through < total) {
        const std::size_t below = bwt_.select(c, through);
        const std::size_t j = lcp_min_.query(lcp_, hi + 1, below);
        if (!found || lcp_[j] > best) {
            best = lcp_[j];
            best_row = j;
        }
    }

    const std::size_t length = std::min(len, best);
    if (length == 0) return {ShrinkStatus::ok, full_interval(), 0};
    if (length == best) {
        const auto left = lcp_smaller_.psv(best_row);
        const auto right = lcp_smaller_.nsv(best_row);
        return {ShrinkStatus::ok, {std::max<std::int64_t>(left, 0), right - 1}, length};
    }
    return {ShrinkStatus::ok, widen(lo, length), length};
}

// ---------------------------------------------------------------------------
// KTK2 layout, all integers little-endian:
//   "KTK2" | u32 version | provenance | alphabet | BWT | SA | LCP | B | u32 crc32
// Each array is u64 length, u8 bit width, u64 word count, then packed u64 words.

namespace {

constexpr char kMagic[4] = {'K', 'T', 'K', '2'};

class ByteWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    template <class T>
    void packed(std::span<const T> values, unsigned width) {
        u64(values.size());
        u8(static_cast<std::uint8_t>(width));
        const std::size_t words = (values.size() * width + 63) / 64;
        std::vector<std::uint64_t> buffer(words, 0);
        std::size_t bit = 0;
        for (const T v : values) {
            const auto x = static_cast<std::uint64_t>(v);
            if (width > 0) {
                buffer[bit / 64] |= x << (bit % 64);
                if (bit % 64 + width > 64) buffer[bit / 64 + 1] |= x >> (64 - bit % 64);
            }
            bit += width;
        }
        u64(words);
        for (auto w : buffer) u64(w);
    }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8() {
        need(1);
        return bytes_[at_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[at_++]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[at_++]) << (8 * i);
        return v;
    }
    template <class T>
    std::vector<T> packed(std::uint64_t max_length) {
        const std::uint64_t length = u64();
        const unsigned width = u8();
        const std::uint64_t words = u64();
        if (width > 64 || length > max_length || words != (length * width + 63) / 64) {
            throw FormatError("corrupt array header in index");
        }
        need(words * 8);
        std::vector<std::uint64_t> buffer(words);
        for (auto& w : buffer) w = u64();
        std::vector<T> values(length);
        const std::uint64_t mask = width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
        std::size_t bit = 0;
        for (auto& v : values) {
            std::uint64_t x = 0;
            if (width > 0) {
                x = buffer[bit / 64] >> (bit % 64);
                if (bit % 64 + width > 64) x |= buffer[bit / 64 + 1] << (64 - bit % 64);
            }
            v = static_cast<T>(x & mask);
            bit += width;
        }
        return values;
    }
    std::size_t remaining() const { return bytes_.size() - at_; }

private:
    void need(std::uint64_t n) const {
        if (n > bytes_.size() - at_) throw FormatError("index data is truncated");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t at_ = 0;
};

unsigned width_for(std::uint64_t max_value) {
    return std::max(1U, static_cast<unsigned>(std::bit_width(max_value)));
}

std::uint32_t checksum(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    std::size_t done = 0;
    while (done < bytes.size()) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - done, 1U << 30));
        crc = crc32(crc, bytes.data() + done, chunk);
        done += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> AugmentedFmIndex::serialize() const {
    ByteWriter w;
    for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
    w.u32(kFormatVersion);

    w.u8(static_cast<std::uint8_t>(provenance_.kind));
    w.u32(provenance_.k_max);
    w.u32(provenance_.digest.k);
    w.u32(provenance_.digest.w);
    w.u64(provenance_.digest.hash.a);
    w.u64(provenance_.digest.hash.b);
    w.u64(provenance_.digest.hash.m);

    w.u8(static_cast<std::uint8_t>(alphabet_.kind));
    w.u32(alphabet_.k);
    w.u64(alphabet_.sigma());

    const std::uint64_t n = text_length();
    w.packed(bwt_.symbols(), width_for(alphabet_.sigma() - 1));
    w.packed(std::span<const Pos>(sa_), width_for(n));
    w.packed(std::span<const Pos>(lcp_), width_for(n));

    std::vector<std::uint8_t> bits(separators_.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = separators_[i] ? 1 : 0;
    w.packed(std::span<const std::uint8_t>(bits), 1);

    w.u32(checksum(w.bytes()));
    return std::move(w.bytes());
}

void AugmentedFmIndex::serialize(std::ostream& out) const {
    const auto bytes = serialize();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed to write index");
}

AugmentedFmIndex AugmentedFmIndex::deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
        throw FormatError("not a KTK2 index (bad magic)");
    }
    ByteReader r(bytes);
    for (int i = 0; i < 4; ++i) r.u8();
    const auto version = r.u32();
    if (version != kFormatVersion) {
        throw FormatError("unsupported KTK2 version " + std::to_string(version) + " (expected " +
                          std::to_string(kFormatVersion) + ")");
    }
    if (bytes.size() < 12) throw FormatError("index data is truncated");
    const auto body = bytes.first(bytes.size() - 4);
    ByteReader tail(bytes.last(4));
    if (checksum(body) != tail.u32()) throw FormatError("index checksum mismatch");

    AugmentedFmIndex ix;
    const auto kind = r.u8();
    if (kind > static_cast<std::uint8_t>(ProvenanceKind::digest_kernel)) {
        throw FormatError("unknown provenance kind in index");
    }
    ix.provenance_.kind = static_cast<ProvenanceKind>(kind);
    ix.provenance_.k_max = r.u32();
    ix.provenance_.digest.k = r.u32();
    ix.provenance_.digest.w = r.u32();
    ix.provenance_.digest.hash.a = r.u64();
    ix.provenance_.digest.hash.b = r.u64();
    ix.provenance_.digest.hash.m = r.u64();

    const auto alphabet_kind = r.u8();
    const auto alphabet_k = r.u32();
    const auto sigma = r.u64();
    try {
        ix.alphabet_ = alphabet_kind == static_cast<std::uint8_t>(AlphabetKind::nucleotide)
                           ? Alphabet::nucleotides()
                           : Alphabet::digest_of(alphabet_k);
    } catch (const ValidationError& e) {
        throw FormatError(std::string("bad alphabet in index: ") + e.what());
    }
    if (alphabet_kind > 1 || ix.alphabet_.sigma() != sigma) throw FormatError("alphabet table mismatch");

    const std::uint64_t limit = bytes.size() * 8;
    auto bwt = r.packed<Symbol>(limit);
    ix.sa_ = r.packed<Pos>(limit);
    ix.lcp_ = r.packed<Pos>(limit);
    const auto bits = r.packed<std::uint8_t>(limit);
    if (r.remaining() != 4) throw FormatError("trailing data after index arrays");

    const std::size_t rows = ix.sa_.size();
    if (rows == 0 || bwt.size() != rows || ix.lcp_.size() != rows || bits.size() + 1 != rows) {
        throw FormatError("index arrays have inconsistent lengths");
    }
    std::vector<bool> seen(rows, false);
    for (Pos p : ix.sa_) {
        if (p >= rows || seen[p]) throw FormatError("suffix array is not a permutation");
        seen[p] = true;
    }
    for (Symbol s : bwt) {
        if (s >= sigma) throw FormatError("BWT symbol outside the alphabet");
    }
    ix.separators_ = BitVector(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) ix.separators_.set(i);
    }
    ix.separators_.build();
    // Every '$' in the BWT precedes a suffix that starts right after a marked position.
    std::size_t dollars = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (bwt[i] != kSeparator) continue;
        ++dollars;
        if (ix.sa_[i] == 0 || !ix.separators_[static_cast<std::size_t>(ix.sa_[i] - 1)]) {
            throw FormatError("separator bit vector disagrees with the BWT");
        }
    }
    if (dollars != ix.separators_.ones()) throw FormatError("separator count disagrees with the BWT");

    ix.bwt_ = IndexedSequence(std::move(bwt));
    ix.build_query_structures();
    return ix;
}

AugmentedFmIndex AugmentedFmIndex::deserialize(std::istream& in) {
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed to read index");
    return deserialize(std::span<const std::uint8_t>(bytes));
}

void AugmentedFmIndex::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    serialize(out);
}

AugmentedFmIndex AugmentedFmIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open index '" + path + "'");
    return deserialize(in);
}

}  // namespace katka
