#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "katka/collection.hpp"
#include "katka/digester.hpp"
#include "katka/fm_index.hpp"
#include "katka/mem_finder.hpp"
#include "katka/taxonomy.hpp"

namespace katka {

// ----- index variants ------------------------------------------------------

struct VariantConfig {
    ProvenanceKind kind = ProvenanceKind::raw;
    std::size_t k_max = 0;
    DigestParams digest;

    // "raw", "kernel:KMAX", "digest:K:W", "digest-kernel:K:W:KMAX".
    static VariantConfig parse(const std::string& spec, const HashParams& hash = {});
    std::string name() const;
    Provenance provenance() const;
};

AugmentedFmIndex build_variant_index(const GenomeCollection& c, const VariantConfig& v);
// The text the variant indexes (kernel, digest, ...), for inspection.
Text variant_text(const GenomeCollection& c, const VariantConfig& v);

// ----- read simulation -----------------------------------------------------

struct ReadSimConfig {
    std::size_t read_length = 200;
    double mutation_rate = 0.01;
    std::size_t reads_per_genome = 500;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SimulatedRead {
    std::string id;
    std::string bases;
    std::size_t genome = 0;
    std::size_t start = 0;
};

// Reads drawn from uniform start positions, each base substituted with
// probability mutation_rate by one of the three other bases. Deterministic
// for a seed: mt19937_64 with rejection-sampled bounded integers.
std::vector<SimulatedRead> simulate_reads(const GenomeCollection& c, const ReadSimConfig& cfg,
                                          std::vector<std::string>* warnings = nullptr);

// Seeded test collection: a random ancestor copied with per-base divergence,
// except for one conserved island shared verbatim by every genome.
struct SyntheticConfig {
    std::size_t genomes = 50;
    std::size_t genome_length = 10000;
    double divergence = 0.10;
    std::size_t island_length = 300;
    std::uint64_t seed = 7;
};

GenomeCollection synthesize_collection(const SyntheticConfig& cfg);

// ----- classification ------------------------------------------------------

enum class RangeClass : std::uint8_t { true_positive, false_positive, vague_positive, false_negative };

const char* to_string(RangeClass c);
RangeClass classify_range(const GenomeRange& range, std::size_t genome);
// True iff every longest MEM of the table is exactly [genome, genome].
bool classify_read(const MemTable& table, std::size_t genome);

struct ClassCounts {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t vague_positive = 0;
    std::size_t false_negative = 0;

    void add(RangeClass c);
    std::size_t total() const { return true_positive + false_positive + vague_positive + false_negative; }
    ClassCounts& operator+=(const ClassCounts& o);
};

// ----- experiment ----------------------------------------------------------

struct ReadOutcome {
    std::size_t read = 0;
    std::size_t mems = 0;
    std::size_t longest = 0;
    bool true_positive = false;
    std::optional<std::size_t> assigned_node;
};

struct VariantResult {
    VariantConfig variant;
    std::string error;  // non-empty when the variant failed
    std::size_t size_bytes = 0;
    std::size_t text_symbols = 0;
    std::size_t reads = 0;
    std::size_t true_positive_reads = 0;
    std::size_t empty_tables = 0;
    double tp_rate = 0.0;
    double mean_query_us = 0.0;
    ClassCounts class_counts;
    std::vector<ReadOutcome> outcomes;  // filled when per-read output is requested
};

struct EvalOptions {
    unsigned threads = 0;  // 0: hardware concurrency
    bool keep_outcomes = false;
    std::size_t min_mem = 1;
};

struct EvalReport {
    std::size_t genomes = 0;
    ReadSimConfig sim;
    std::size_t reads = 0;
    std::vector<std::string> warnings;
    std::vector<VariantResult> variants;
    std::vector<SimulatedRead> read_set;  // kept with per-read outcomes

    // JSON document; timing fields are left out when include_timing is false.
    std::string to_json(bool include_timing = true) const;
};

EvalReport run_experiment(const GenomeCollection& c, const LcaStructure* tree,
                          const std::vector<VariantConfig>& variants, const ReadSimConfig& cfg,
                          const EvalOptions& options = {});

void write_outcomes_tsv(std::ostream& out, const EvalReport& report, const LcaStructure* tree);

}  // namespace katka
