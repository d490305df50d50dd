#include <doctest.h>

#include <cmath>
#include <random>

#include "katka/digester.hpp"
#include "katka/error.hpp"
#include "katka/kernelizer.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace katka;

namespace {

std::string kernel_string(const std::string& genomes_per_line, std::size_t k_max) {
    return render_nucleotides(build_katka_kernel(separate(parse_collection_string(genomes_per_line)), {k_max}).text);
}

}  // namespace

TEST_CASE("hand-sized kernels") {
    CHECK(kernel_string("AAA\n", 1) == "A#A$");
    CHECK(kernel_string("AC\n", 2) == "AC$");
    CHECK(kernel_string("A\n", 4) == "A$");          // shorter than k_max: verbatim
    CHECK(kernel_string("ACGT\nACGT\n", 4) == "ACGT$ACGT$");
    CHECK(kernel_string("AAAA\nAAAA\n", 2) == "AA$AA$");  // interior gap runs into '$' and vanishes

    const auto r = kernel_size_report(parse_nucleotide_text("A#A$"));
    CHECK(r.kept_base_symbols == 2);
    CHECK(r.hash_symbols == 1);
    CHECK(r.separator_count == 1);
}

TEST_CASE("kernel input checks") {
    const Text ok = parse_nucleotide_text("ACGT$");
    CHECK_THROWS_AS(build_katka_kernel(ok, {0}), ValidationError);
    CHECK_THROWS_AS(build_katka_kernel(parse_nucleotide_text("ACGT"), {2}), ValidationError);
    CHECK_THROWS_AS(build_katka_kernel(parse_nucleotide_text("AC#GT$"), {2}), ValidationError);
}

TEST_CASE("4th-order kernel of the toy collection") {
    const auto k = build_katka_kernel(separate(testutil::toy16()), {4});
    CHECK(render_nucleotides(k.text) == testutil::slurp("toy16_kernel4.txt"));
    const auto r = kernel_size_report(k);
    CHECK(r.kept_base_symbols == 737);
    CHECK(r.hash_symbols == 62);
    CHECK(r.non_separator_symbols() == 799);
    CHECK(r.separator_count == 16);
    CHECK(k.separators.ones() == 16);
}

TEST_CASE("5th-order kernel keeps about 70 percent") {
    const auto r = kernel_size_report(build_katka_kernel(separate(testutil::toy16()), {5}));
    const double ratio = static_cast<double>(r.non_separator_symbols()) / 1600.0;
    CHECK(std::abs(ratio - 0.70) <= 0.02);
}

TEST_CASE("2nd-order kernel of the toy digest") {
    const auto d = digest_collection(testutil::toy16(), DigestParams{});
    const auto k = build_katka_kernel(d.symbols, {2});
    CHECK(render_ascii(k.text, 3) == testutil::slurp("toy16_digest_kernel2.txt"));
    CHECK(kernel_size_report(k).non_separator_symbols() == 220);
}

TEST_CASE("kernels keep every short k-mer and its first and last genomes") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 60; ++round) {
        const auto c = oracle::random_collection(rng, 6, 60);
        const std::size_t k_max = 1 + rng() % 6;
        const auto st = separate(c);
        const auto kernel = build_katka_kernel(st, {k_max});
        for (std::size_t k = 1; k <= k_max; ++k) {
            REQUIRE(oracle::kmer_genomes(kernel.text, k) == oracle::kmer_genomes(st.text, k));
        }
        CHECK(kernel.separators.ones() == c.size());
    }
}
