#include <doctest.h>

#include <random>

#include "katka/digester.hpp"
#include "katka/error.hpp"
#include "katka/fm_index.hpp"
#include "katka/kernelizer.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace katka;

namespace {

AugmentedFmIndex toy_index() { return AugmentedFmIndex::build(separate(testutil::toy5())); }

SaInterval interval_of(const AugmentedFmIndex& ix, const std::string& s) {
    const Text p = parse_nucleotide_text(s);
    return ix.find(p);
}

}  // namespace

TEST_CASE("toy index backward search") {
    const auto ix = toy_index();
    CHECK(ix.size() == 46);
    CHECK(ix.genome_count() == 5);
    CHECK(ix.sa()[0] == 45);
    CHECK(ix.sa()[1] == 44);  // the final '$' sorts first among the separators
    CHECK(ix.find(Text{}) == ix.full_interval());

    const auto ata = interval_of(ix, "ATA");
    CHECK(ata.size() == 3);
    CHECK(ix.first_last_positions(ata) == std::pair<Pos, Pos>{11, 41});
    CHECK(ix.genome_range(ata) == GenomeRange::of(1, 4));

    const auto step = ix.backward_step(ata, kBaseC);
    CHECK(step.status == StepStatus::empty);
    CHECK(ix.backward_step(ix.full_interval(), kWildcard).status != StepStatus::ok);
    CHECK(ix.backward_step(ix.full_interval(), 99).status == StepStatus::not_in_alphabet);

    const auto acat = interval_of(ix, "ACAT");
    CHECK(ix.first_last_positions(acat) == std::pair<Pos, Pos>{4, 21});
    CHECK(ix.genome_range(acat) == GenomeRange::of(0, 2));
    CHECK(ix.genome_range(interval_of(ix, "AGATAC")) == GenomeRange::of(1, 1));
    CHECK(ix.genome_range(interval_of(ix, "CC")).empty);
    CHECK(ix.genome_of_position(11) == 1);
    CHECK(ix.genome_of_position(41) == 4);

    // Longest prefix of ATA that C precedes is AT, with its 10-row interval.
    const auto shrunk = ix.shrink_to_extendable(ata, 3, kBaseC);
    CHECK(shrunk.status == ShrinkStatus::ok);
    CHECK(shrunk.length == 2);
    CHECK(shrunk.interval == interval_of(ix, "AT"));
    CHECK(shrunk.interval.size() == 10);
    CHECK(ix.shrink_to_extendable(ata, 3, kWildcard).status != ShrinkStatus::ok);
}

TEST_CASE("build input checks") {
    CHECK_THROWS_AS(AugmentedFmIndex::build(Text{kBaseA, 99, kSeparator}, Alphabet::nucleotides(), Provenance::raw()),
                    ValidationError);
}

TEST_CASE("frozen rows of the toy kernel, digest and digest-kernel indexes") {
    const auto c = testutil::toy16();
    struct Row {
        std::size_t i;
        Pos sa, lcp;
        Symbol bwt;
    };
    auto check_rows = [](const AugmentedFmIndex& ix, const std::vector<Row>& rows) {
        for (const auto& r : rows) {
            CAPTURE(r.i);
            CHECK(ix.sa()[r.i] == r.sa);
            CHECK(ix.lcp()[r.i] == r.lcp);
            CHECK(ix.bwt()[r.i] == r.bwt);
        }
    };
    const auto ch = [](char x) { return x == '$' ? kSeparator : parse_ascii_digest(std::string(1, x)).front(); };
    const auto b = [](char x) { return base_to_symbol(x); };

    const auto kernel = build_katka_kernel(separate(c), {4});
    const auto k4 = AugmentedFmIndex::build(kernel, Alphabet::nucleotides(), Provenance::kernel(4));
    REQUIRE(k4.size() == 816);
    check_rows(k4, {{0, 815, 0, b('$')}, {1, 321, 0, b('T')}, {2, 354, 3, b('G')}, {3, 550, 2, b('T')},
                    {4, 209, 5, b('T')}, {5, 167, 3, b('G')}, {810, 477, 3, b('C')}, {811, 23, 4, b('T')},
                    {812, 390, 3, b('T')}, {813, 22, 4, b('T')}, {814, 389, 4, b('G')}, {815, 21, 5, b('G')}});

    const auto digest = digest_collection(c, DigestParams{});
    const auto dg = AugmentedFmIndex::build(digest);
    REQUIRE(dg.size() == 304);
    check_rows(dg, {{0, 303, 0, ch('$')}, {1, 302, 0, ch('5')}, {2, 102, 1, ch('5')}, {3, 210, 1, ch('5')},
                    {4, 156, 2, ch('5')}, {5, 174, 8, ch('5')}, {298, 15, 4, ch('\'')}, {299, 268, 1, ch('X')},
                    {300, 230, 2, ch('X')}, {301, 286, 2, ch('X')}, {302, 249, 2, ch('X')}, {303, 67, 1, ch('=')}});

    const auto dkernel = build_katka_kernel(digest.symbols, {2});
    const auto dk = AugmentedFmIndex::build(dkernel, Alphabet::digest_of(3), Provenance::digest_kernel({}, 2));
    REQUIRE(dk.size() == 237);
    check_rows(dk, {{0, 236, 0, ch('$')}, {1, 38, 0, ch('<')}, {2, 137, 3, ch('2')}, {3, 211, 2, ch('\\')},
                    {4, 185, 1, ch('2')}, {5, 82, 1, ch('N')}, {231, 5, 2, ch('_')}, {232, 29, 1, ch('\'')},
                    {233, 15, 4, ch('\'')}, {234, 175, 1, ch('X')}, {235, 219, 2, ch('X')}, {236, 45, 1, ch('=')}});
}

TEST_CASE("first/last positions, genome ranges and shrinking match brute force") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 300; ++round) {
        const auto c = oracle::random_collection(rng, 5, 40);
        const auto st = separate(c);
        const auto ix = AugmentedFmIndex::build(st);
        for (int q = 0; q < 20; ++q) {
            const Text p = parse_nucleotide_text(oracle::random_bases(rng, 1 + rng() % 5));
            const auto occ = oracle::occurrences(st.text, p);
            const auto iv = ix.find(p);
            REQUIRE(iv.size() == occ.size());
            if (occ.empty()) {
                CHECK(ix.genome_range(iv).empty);
                continue;
            }
            REQUIRE(ix.first_last_positions(iv) == std::pair<Pos, Pos>{occ.front(), occ.back()});
            REQUIRE(ix.genome_range(iv) ==
                    GenomeRange::of(oracle::genome_of(st.text, occ.front()), oracle::genome_of(st.text, occ.back())));

            const Symbol c2 = kBaseA + static_cast<Symbol>(rng() % 4);
            if (ix.backward_step(iv, c2).status == StepStatus::ok) continue;
            const auto shrunk = ix.shrink_to_extendable(iv, p.size(), c2);
            std::size_t want = 0;
            for (std::size_t l = p.size(); l > 0; --l) {
                Text ext{c2};
                ext.insert(ext.end(), p.begin(), p.begin() + l);
                if (!oracle::occurrences(st.text, ext).empty()) {
                    want = l;
                    break;
                }
            }
            if (!ix.bwt().contains(c2)) {
                CHECK(shrunk.status == ShrinkStatus::symbol_absent);
                continue;
            }
            REQUIRE(shrunk.length == want);
            REQUIRE(shrunk.interval == ix.find(Text(p.begin(), p.begin() + want)));
        }
    }
}

TEST_CASE("serialization round trip and corruption") {
    const auto ix = toy_index();
    const auto bytes = ix.serialize();
    const auto back = AugmentedFmIndex::deserialize(bytes);
    CHECK(back.serialize() == bytes);
    CHECK(back.provenance() == ix.provenance());
    std::mt19937_64 rng(29);
    for (int q = 0; q < 1000; ++q) {
        const Text p = parse_nucleotide_text(oracle::random_bases(rng, 1 + rng() % 6));
        const auto a = ix.find(p), b = back.find(p);
        REQUIRE(a == b);
        if (!a.empty()) REQUIRE(ix.genome_range(a) == back.genome_range(b));
    }

    auto corrupt = bytes;
    corrupt[0] = 'X';
    CHECK_THROWS_AS(AugmentedFmIndex::deserialize(corrupt), FormatError);
    corrupt = bytes;
    corrupt[4] = 9;  // version
    CHECK_THROWS_WITH_AS(AugmentedFmIndex::deserialize(corrupt), doctest::Contains("version"), FormatError);
    corrupt = bytes;
    corrupt[bytes.size() / 2] ^= 0x40;
    CHECK_THROWS_AS(AugmentedFmIndex::deserialize(corrupt), FormatError);
    corrupt.assign(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(bytes.size() - 9));
    CHECK_THROWS_AS(AugmentedFmIndex::deserialize(corrupt), FormatError);
    CHECK_THROWS_AS(AugmentedFmIndex::load("/nonexistent/index.ktk"), IoError);

    const auto d = AugmentedFmIndex::build(digest_collection(testutil::toy16(), DigestParams{3, 7, {11, 5, 8863}}));
    const auto d2 = AugmentedFmIndex::deserialize(d.serialize());
    CHECK(d2.provenance().digest == DigestParams{3, 7, {11, 5, 8863}});
    CHECK(d2.alphabet() == Alphabet::digest_of(3));
}
