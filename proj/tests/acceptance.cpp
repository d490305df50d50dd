// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "katka/digester.hpp"
#include "katka/evaluator.hpp"
#include "katka/kernelizer.hpp"
#include "katka/mem_finder.hpp"
#include "katka/taxonomy.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace katka;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Collects failed sub-checks for one criterion.
struct Checks {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    template <class A, class B>
    void equal(const A& got, const B& want, const std::string& what) {
        if (got == want) return;
        std::ostringstream s;
        s << what << ": got " << got << ", want " << want;
        failures.push_back(s.str());
    }
    void note(const std::string& s) { notes.push_back(s); }
};

struct Row {
    std::string mem;
    std::size_t first, last;
};

void check_table(Checks& ck, const std::string& label, const AugmentedFmIndex& ix, const std::vector<Row>& want) {
    const Text q = query_symbols(ix, testutil::kReadP);
    const auto t = compute_mem_table(ix, q);
    ck.equal(t.size(), want.size(), label + " row count");
    for (std::size_t i = 0; i < std::min(t.size(), want.size()); ++i) {
        const auto& r = t.records[i];
        const std::string got = mem_string(ix, q, r);
        ck.expect(got == want[i].mem && !r.empty && r.first_genome == want[i].first && r.last_genome == want[i].last,
                  label + " row " + std::to_string(i) + ": got " + got + " [" + std::to_string(r.first_genome) + "," +
                      std::to_string(r.last_genome) + "]");
    }
}

const std::vector<Row> kRawTable{{"GGATGGGCTAG", 13, 13}, {"TAGACGATCTTCTGT", 9, 9}, {"TGTG", 0, 1}};
const std::vector<Row> kKernelTable{{"GGATGGG", 13, 13}, {"GGGC", 6, 15},    {"GGCT", 12, 14},    {"GCTAG", 15, 15},
                                    {"TAGA", 0, 15},     {"AGACG", 15, 15},  {"GACGATC", 11, 11}, {"ATCTTCT", 0, 15},
                                    {"TCTGT", 8, 8},     {"TGTG", 0, 1}};
const std::vector<Row> kDigestTable{{"Q", 8, 15}, {".", 4, 11}};

MemTable table_for(const AugmentedFmIndex& ix) { return compute_mem_table(ix, query_symbols(ix, testutil::kReadP)); }

// ---------------------------------------------------------------------------

void criterion1(Checks& ck) {
    const auto t0 = Clock::now();
    const auto c = testutil::toy16();
    const auto raw = AugmentedFmIndex::build(separate(c));
    const auto k4 = AugmentedFmIndex::build(build_katka_kernel(separate(c), {4}), Alphabet::nucleotides(),
                                            Provenance::kernel(4));
    const auto dg = AugmentedFmIndex::build(digest_collection(c, DigestParams{}));
    check_table(ck, "raw", raw, kRawTable);
    check_table(ck, "kernel4", k4, kKernelTable);
    check_table(ck, "digest", dg, kDigestTable);
    const double s = seconds_since(t0);
    ck.expect(s < 1.0, "took " + std::to_string(s) + " s");
    ck.note(std::to_string(s) + " s");
}

void criterion2(Checks& ck) {
    const auto ix = AugmentedFmIndex::build(separate(testutil::toy5()));
    const auto t = compute_mem_table(ix, parse_nucleotide_text("ACATA"));
    ck.equal(t.size(), std::size_t{2}, "MEM count");
    if (t.size() != 2) return;
    const auto& acat = t.records[0];
    const auto& ata = t.records[1];
    ck.expect(acat == MemRecord{0, 4, 4, 21, 0, 2, false}, "ACAT record");
    ck.expect(ata == MemRecord{2, 3, 11, 41, 1, 4, false}, "ATA record");
}

void criterion3(Checks& ck) {
    const auto c = testutil::toy16();
    const auto st = separate(c);
    ck.equal(kernel_size_report(st.text).non_separator_symbols(), std::size_t{1600}, "raw non-separator symbols");
    const auto digest = digest_collection(c, DigestParams{});
    ck.equal(digest.non_separator_count(), std::size_t{287}, "digest symbols");

    const auto k4 = kernel_size_report(build_katka_kernel(st, {4}));
    ck.note("4th-order kernel: " + std::to_string(k4.kept_base_symbols) + " bases + " +
            std::to_string(k4.hash_symbols) + " '#' = " + std::to_string(k4.non_separator_symbols()));
    ck.equal(k4.non_separator_symbols(), std::size_t{798}, "4th-order kernel kept symbols ('#' counted)");

    const auto dk = kernel_size_report(build_katka_kernel(digest.symbols, {2}));
    ck.equal(dk.non_separator_symbols(), std::size_t{220}, "2nd-order digest kernel symbols ('#' counted)");
    ck.note("2nd-order digest kernel: " + std::to_string(dk.kept_base_symbols) + " + " +
            std::to_string(dk.hash_symbols) + " '#' = 220 under '#'-inclusive counting");

    const auto k5 = kernel_size_report(build_katka_kernel(st, {5}));
    const double ratio = static_cast<double>(k5.non_separator_symbols()) / 1600.0;
    ck.expect(std::abs(ratio - 0.70) <= 0.02, "5th-order kernel ratio " + std::to_string(ratio));
    ck.note("5th-order ratio " + std::to_string(ratio));
}

void criterion4(Checks& ck) {
    const auto c = testutil::toy16();
    const DigestParams p;
    const auto d = digest_collection(c, p);
    ck.expect(render_ascii(d) == testutil::slurp("toy16_digest_k3w10.txt"), "full digest rendering");
    ck.equal(digest_sequence(c.genomes[0], p).symbols.size(), std::size_t{21}, "first genome digest length");
    ck.equal(render_ascii(digest_sequence(testutil::kReadP, p)), std::string("Q."), "digest of the read");

    // window soundness: every window's leftmost minimum is marked, and nothing else is
    for (const auto& g : c.genomes) {
        const auto marked = minimizer_positions(g, p);
        std::vector<std::size_t> want;
        const std::size_t count = g.size() - p.k + 1;
        for (std::size_t i = 0; i + p.w <= count; ++i) {
            std::size_t best = i;
            for (std::size_t j = i; j < i + p.w; ++j) {
                if (minimizer_hash(p.hash, kmer_value(g.substr(j, 3))) <
                    minimizer_hash(p.hash, kmer_value(g.substr(best, 3)))) {
                    best = j;
                }
            }
            if (want.empty() || want.back() != best) want.push_back(best);
        }
        ck.expect(marked == want, "window soundness");
    }
}

void criterion5(Checks& ck) {
    std::mt19937_64 rng(501);
    std::size_t cases = 0;
    for (int round = 0; round < 250; ++round) {
        const auto c = oracle::random_collection(rng, 8, 200, round % 4 != 0);
        const std::size_t k_max = 1 + rng() % 6;
        const auto st = separate(c);
        const auto kernel = build_katka_kernel(st, {k_max});
        for (std::size_t k = 1; k <= k_max; ++k) {
            if (oracle::kmer_genomes(kernel.text, k) != oracle::kmer_genomes(st.text, k)) {
                ck.expect(false, "round " + std::to_string(round) + " k=" + std::to_string(k));
            }
        }
        ++cases;
    }
    ck.note(std::to_string(cases) + " collections");
}

void criterion6(Checks& ck) {
    std::mt19937_64 rng(601);
    std::size_t cases = 0, mismatches = 0;
    for (int round = 0; round < 12000; ++round) {
        const bool digest = round % 5 == 0;
        Text text;
        Text read;
        AugmentedFmIndex ix;
        if (!digest) {
            auto c = oracle::random_collection(rng, 6, 60);
            while (c.concatenated_length() > 256) {
                c.genomes.pop_back();
                c.names.pop_back();
            }
            if (c.genomes.empty()) c = GenomeCollection{{"ACGT"}, {"g0"}};
            const auto st = separate(c);
            text = st.text;
            ix = AugmentedFmIndex::build(st);
            read = parse_nucleotide_text(oracle::random_bases(rng, rng() % 65, round % 7 == 0 ? "ACGTN" : "ACGT"));
        } else {
            // Digest alphabet (k = 2): 16 symbol values, some absent from the text.
            const std::size_t n = 1 + rng() % 200;
            for (std::size_t i = 0; i < n; ++i) {
                text.push_back(rng() % 6 == 0 ? kSeparator : kFirstData + static_cast<Symbol>(rng() % 12));
            }
            if (text.back() != kSeparator) text.push_back(kSeparator);
            ix = AugmentedFmIndex::build(text, Alphabet::digest_of(2), Provenance::digest_of({2, 4, {}}));
            const std::size_t m = rng() % 65;
            for (std::size_t i = 0; i < m; ++i) read.push_back(kFirstData + static_cast<Symbol>(rng() % 16));
        }
        const std::size_t min_mem = round % 9 == 0 ? 1 + rng() % 3 : 1;
        const auto got = compute_mem_table(ix, read, {min_mem});
        if (got.records != oracle::mem_table(text, read, digest, min_mem)) ++mismatches;
        ++cases;
    }
    ck.equal(mismatches, std::size_t{0}, "mismatching tables");
    ck.note(std::to_string(cases) + " cases");
}

void criterion7(Checks& ck) {
    std::mt19937_64 rng(701);
    std::size_t table_cases = 0;
    for (int round = 0; round < 80; ++round) {
        const auto c = oracle::random_collection(rng, 8, 120);
        const std::size_t read_len = 1 + rng() % 30;
        const std::size_t k_max = read_len + rng() % 5;
        const auto raw = AugmentedFmIndex::build(separate(c));
        const auto ker = AugmentedFmIndex::build(build_katka_kernel(separate(c), {k_max}), Alphabet::nucleotides(),
                                                 Provenance::kernel(k_max));
        for (int q = 0; q < 10; ++q) {
            // reads: mutated substrings of a genome, or random
            const auto& g = c.genomes[rng() % c.size()];
            std::string read = oracle::random_bases(rng, read_len);
            if (q % 2 == 0 && g.size() >= read_len) {
                read = g.substr(rng() % (g.size() - read_len + 1), read_len);
                if (rng() % 2 == 0) read[rng() % read_len] = "ACGT"[rng() % 4];
            }
            const Text sym = parse_nucleotide_text(read);
            const auto a = compute_mem_table(raw, sym), b = compute_mem_table(ker, sym);
            bool same = a.size() == b.size();
            for (std::size_t i = 0; same && i < a.size(); ++i) {
                same = a.records[i].read_start == b.records[i].read_start && a.records[i].length == b.records[i].length &&
                       a.records[i].range() == b.records[i].range();
            }
            ck.expect(same, "table mismatch in round " + std::to_string(round));
            ++table_cases;
        }
    }

    std::size_t eval_cases = 0;
    for (int round = 0; round < 50; ++round) {
        const auto c = synthesize_collection({3 + rng() % 5, 300 + rng() % 400, 0.05 + 0.01 * (rng() % 10),
                                              rng() % 40, rng()});
        const std::size_t read_len = 20 + rng() % 60;
        const std::size_t k_max = read_len + rng() % 20;
        const auto report = run_experiment(
            c, nullptr, {VariantConfig::parse("raw"), VariantConfig::parse("kernel:" + std::to_string(k_max))},
            {read_len, 0.02, 10, rng()}, {1, false, 1});
        ck.expect(report.variants[0].tp_rate == report.variants[1].tp_rate,
                  "eval TP mismatch in round " + std::to_string(round));
        ++eval_cases;
    }
    ck.note(std::to_string(table_cases) + " tables, " + std::to_string(eval_cases) + " evaluations");
}

void criterion8(Checks& ck) {
    struct Case {
        std::size_t first, last;
        RangeClass want;
    };
    const std::vector<Case> cases{
        {9, 9, RangeClass::true_positive},   {0, 1, RangeClass::false_positive},  {8, 8, RangeClass::false_positive},
        {11, 11, RangeClass::false_positive}, {12, 14, RangeClass::false_positive}, {13, 13, RangeClass::false_positive},
        {15, 15, RangeClass::false_positive}, {0, 15, RangeClass::vague_positive},  {4, 11, RangeClass::vague_positive},
        {6, 15, RangeClass::vague_positive},  {8, 15, RangeClass::vague_positive},
    };
    for (const auto& c : cases) {
        ck.expect(classify_range(GenomeRange::of(c.first, c.last), 9) == c.want,
                  "[" + std::to_string(c.first) + "," + std::to_string(c.last) + "]");
    }
    ck.expect(classify_range(GenomeRange::none(), 9) == RangeClass::false_negative, "empty range");

    const auto c = testutil::toy16();
    const auto raw = AugmentedFmIndex::build(separate(c));
    const auto k4 = AugmentedFmIndex::build(build_katka_kernel(separate(c), {4}), Alphabet::nucleotides(),
                                            Provenance::kernel(4));
    const auto dg = AugmentedFmIndex::build(digest_collection(c, DigestParams{}));
    ck.expect(classify_read(table_for(raw), 9), "raw table classifies as true positive");
    ck.expect(!classify_read(table_for(k4), 9), "kernel table classifies as not true positive");
    ck.expect(!classify_read(table_for(dg), 9), "digest table classifies as not true positive");
}

void criterion9(Checks& ck) {
    const auto t0 = Clock::now();
    const auto c = synthesize_collection({50, 10000, 0.10, 300, 7});
    const std::vector<VariantConfig> variants{VariantConfig::parse("raw"), VariantConfig::parse("kernel:100"),
                                              VariantConfig::parse("kernel:50"), VariantConfig::parse("kernel:20")};
    const ReadSimConfig sim{200, 0.01, 100, 11};
    const auto a = run_experiment(c, nullptr, variants, sim);
    const auto b = run_experiment(c, nullptr, variants, sim);
    for (const auto& v : a.variants) ck.expect(v.error.empty(), v.variant.name() + " failed: " + v.error);
    if (!ck.failures.empty()) return;
    const auto& raw = a.variants[0];
    ck.expect(raw.tp_rate >= 0.95, "raw TP rate " + std::to_string(raw.tp_rate));
    ck.expect(a.variants[1].size_bytes < raw.size_bytes, "kernel:100 not smaller than raw");
    ck.expect(a.variants[2].size_bytes <= a.variants[1].size_bytes, "kernel:50 larger than kernel:100");
    ck.expect(a.variants[3].size_bytes <= a.variants[2].size_bytes, "kernel:20 larger than kernel:50");
    ck.expect(a.to_json(false) == b.to_json(false), "non-timing report differs between runs");
    const double s = seconds_since(t0);
    ck.expect(s < 600.0, "took " + std::to_string(s) + " s");
    std::ostringstream note;
    for (const auto& v : a.variants) {
        note << v.variant.name() << " " << v.size_bytes << " B tp=" << v.tp_rate << "; ";
    }
    note << s << " s";
    ck.note(note.str());
}

void criterion10(Checks& ck) {
    std::mt19937_64 rng(1001);
    // suffix array, LCP, BWT
    for (int round = 0; round < 3000; ++round) {
        const std::size_t n = rng() % 257;
        const std::uint64_t sigma = 3 + rng() % 8;
        Text t(n);
        for (auto& s : t) s = 1 + static_cast<Symbol>(rng() % (sigma - 1));
        const auto sa = build_suffix_array(t, sigma);
        const auto ref = oracle::suffix_array(t);
        if (sa != ref || build_lcp_array(t, sa) != oracle::lcp(t, ref) || derive_bwt(t, sa) != oracle::bwt(t, ref)) {
            ck.expect(false, "suffix structures, round " + std::to_string(round));
        }
    }
    // rank/select inverse laws
    for (int round = 0; round < 30; ++round) {
        std::vector<Symbol> s(rng() % 4000);
        for (auto& x : s) x = static_cast<Symbol>(rng() % 9);
        const IndexedSequence seq(s);
        for (Symbol c : seq.distinct()) {
            for (std::size_t k = 0; k < seq.count(c); ++k) {
                const auto pos = seq.select(c, k);
                if (seq.rank(c, pos) != k || s[pos] != c) ck.expect(false, "rank(select) law");
            }
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (seq.select(s[i], seq.rank(s[i], i)) != i) ck.expect(false, "select(rank) law");
        }
    }
    // RMQ vs scan
    for (int round = 0; round < 30; ++round) {
        std::vector<Pos> v(1 + rng() % 1000);
        for (auto& x : v) x = rng() % 50;
        const RmqStructure mn(v, Extreme::min), mx(v, Extreme::max);
        for (int q = 0; q < 500; ++q) {
            std::size_t lo = rng() % v.size(), hi = rng() % v.size();
            if (lo > hi) std::swap(lo, hi);
            const auto bmin = static_cast<std::size_t>(std::min_element(v.begin() + lo, v.begin() + hi + 1) - v.begin());
            const auto bmax = static_cast<std::size_t>(std::max_element(v.begin() + lo, v.begin() + hi + 1) - v.begin());
            if (mn.query(v, lo, hi) != bmin || mx.query(v, lo, hi) != bmax) ck.expect(false, "RMQ");
        }
    }
    // LCA vs naive
    for (int round = 0; round < 40; ++round) {
        const auto tree = PhyloTree::parse_newick(oracle::random_newick(rng, 1 + rng() % 64));
        const LcaStructure lca(tree);
        std::vector<std::int64_t> parent(tree.node_count());
        for (std::size_t i = 0; i < tree.node_count(); ++i) parent[i] = tree.node(i).parent;
        for (std::size_t a = 0; a < tree.node_count(); ++a) {
            for (std::size_t b = 0; b < tree.node_count(); ++b) {
                if (lca.lca(a, b) != oracle::naive_lca(parent, a, b)) ck.expect(false, "LCA");
            }
        }
    }
    // serialization round trip
    const auto c = testutil::toy16();
    for (const auto& spec : {"raw", "kernel:4", "digest:3:10", "digest-kernel:3:10:2"}) {
        const auto ix = build_variant_index(c, VariantConfig::parse(spec));
        const auto back = AugmentedFmIndex::deserialize(ix.serialize());
        for (int q = 0; q < 1000; ++q) {
            const std::string read = oracle::random_bases(rng, 5 + rng() % 40);
            const Text sym = query_symbols(ix, read);
            if (compute_mem_table(ix, sym).records != compute_mem_table(back, sym).records) {
                ck.expect(false, std::string("round trip of ") + spec);
                break;
            }
        }
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Checks&)>>> criteria{
        {"MEM tables of the toy read against raw, kernel and digest indexes", criterion1},
        {"worked example ACATA on the five-genome toy", criterion2},
        {"size ledger of the toy collection", criterion3},
        {"digest rendering, first digest length, digest of the read", criterion4},
        {"kernel k-mer and genome-range preservation on random collections", criterion5},
        {"MEM tables equal the definitional oracle", criterion6},
        {"kernel fidelity for k_max at least the read length", criterion7},
        {"range and read classification", criterion8},
        {"synthetic evaluation at desk scale", criterion9},
        {"structure property suites and serialization round trip", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checks ck;
        try {
            criteria[i].second(ck);
        } catch (const std::exception& e) {
            ck.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = ck.failures.empty();
        failed += ok ? 0 : 1;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first;
        if (!ck.notes.empty()) {
            std::cout << " (";
            for (std::size_t n = 0; n < ck.notes.size(); ++n) std::cout << (n ? "; " : "") << ck.notes[n];
            std::cout << ")";
        }
        std::cout << '\n';
        for (std::size_t f = 0; f < ck.failures.size() && f < 10; ++f) std::cout << "    " << ck.failures[f] << '\n';
        std::cout.flush();
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
