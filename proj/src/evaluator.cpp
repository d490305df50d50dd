#include "katka/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <json.hpp>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "katka/error.hpp"
#include "katka/kernelizer.hpp"

namespace katka {

namespace {

std::size_t parse_count(const std::string& field, const std::string& spec) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != field.size()) {
        throw ValidationError("bad number '" + field + "' in variant '" + spec + "'");
    }
    return static_cast<std::size_t>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, sep)) out.push_back(part);
    return out;
}

// Uniform integer in [0, n) by rejection, independent of the standard library's distributions.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

constexpr char kBases[] = {'A', 'C', 'G', 'T'};

int base_index(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
        default: return -1;
    }
}

}  // namespace

// ---------------------------------------------------------------------------

VariantConfig VariantConfig::parse(const std::string& spec, const HashParams& hash) {
    const auto parts = split(spec, ':');
    if (parts.empty()) throw ValidationError("empty variant specification");
    VariantConfig v;
    v.digest.hash = hash;
    const auto& kind = parts[0];
    if (kind == "raw" && parts.size() == 1) {
        v.kind = ProvenanceKind::raw;
    } else if (kind == "kernel" && parts.size() == 2) {
        v.kind = ProvenanceKind::kernel;
        v.k_max = parse_count(parts[1], spec);
    } else if (kind == "digest" && parts.size() == 3) {
        v.kind = ProvenanceKind::digest;
        v.digest.k = static_cast<unsigned>(parse_count(parts[1], spec));
        v.digest.w = static_cast<unsigned>(parse_count(parts[2], spec));
    } else if (kind == "digest-kernel" && parts.size() == 4) {
        v.kind = ProvenanceKind::digest_kernel;
        v.digest.k = static_cast<unsigned>(parse_count(parts[1], spec));
        v.digest.w = static_cast<unsigned>(parse_count(parts[2], spec));
        v.k_max = parse_count(parts[3], spec);
    } else {
        throw ValidationError("unrecognised variant '" + spec +
                              "' (expected raw, kernel:KMAX, digest:K:W or digest-kernel:K:W:KMAX)");
    }
    if (v.kind != ProvenanceKind::raw && v.kind != ProvenanceKind::kernel) v.digest.validate();
    if ((v.kind == ProvenanceKind::kernel || v.kind == ProvenanceKind::digest_kernel) && v.k_max == 0) {
        throw ValidationError("kernel order must be at least 1 in '" + spec + "'");
    }
    return v;
}

std::string VariantConfig::name() const {
    switch (kind) {
        case ProvenanceKind::raw: return "raw";
        case ProvenanceKind::kernel: return "kernel:" + std::to_string(k_max);
        case ProvenanceKind::digest:
            return "digest:" + std::to_string(digest.k) + ":" + std::to_string(digest.w);
        case ProvenanceKind::digest_kernel:
            return "digest-kernel:" + std::to_string(digest.k) + ":" + std::to_string(digest.w) + ":" +
                   std::to_string(k_max);
    }
    return "unknown";
}

Provenance VariantConfig::provenance() const {
    switch (kind) {
        case ProvenanceKind::raw: return Provenance::raw();
        case ProvenanceKind::kernel: return Provenance::kernel(k_max);
        case ProvenanceKind::digest: return Provenance::digest_of(digest);
        case ProvenanceKind::digest_kernel: return Provenance::digest_kernel(digest, k_max);
    }
    return Provenance::raw();
}

Text variant_text(const GenomeCollection& c, const VariantConfig& v) {
    switch (v.kind) {
        case ProvenanceKind::raw: return separate(c).text;
        case ProvenanceKind::kernel: return build_katka_kernel(separate(c), {v.k_max}).text;
        case ProvenanceKind::digest: return digest_collection(c, v.digest).symbols;
        case ProvenanceKind::digest_kernel:
            return build_katka_kernel(digest_collection(c, v.digest).symbols, {v.k_max}).text;
    }
    return {};
}

AugmentedFmIndex build_variant_index(const GenomeCollection& c, const VariantConfig& v) {
    const Alphabet alphabet = v.provenance().is_digest() ? Alphabet::digest_of(v.digest.k)
                                                         : Alphabet::nucleotides();
    return AugmentedFmIndex::build(variant_text(c, v), alphabet, v.provenance());
}

// ---------------------------------------------------------------------------

void ReadSimConfig::validate() const {
    if (read_length == 0) throw ValidationError("read length must be at least 1");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        throw ValidationError("mutation rate must lie in [0, 1]");
    }
}

std::vector<SimulatedRead> simulate_reads(const GenomeCollection& c, const ReadSimConfig& cfg,
                                          std::vector<std::string>* warnings) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::vector<SimulatedRead> reads;
    bool any_usable = false;
    for (std::size_t g = 0; g < c.size(); ++g) {
        const auto& genome = c.genomes[g];
        if (genome.size() < cfg.read_length) {
            if (warnings != nullptr) {
                warnings->push_back("genome " + std::to_string(g) + " (" + c.names[g] + ") is shorter than " +
                                    std::to_string(cfg.read_length) + " bases; no reads drawn");
            }
            continue;
        }
        any_usable = true;
        for (std::size_t r = 0; r < cfg.reads_per_genome; ++r) {
            const std::size_t start = bounded(rng, genome.size() - cfg.read_length + 1);
            std::string bases = genome.substr(start, cfg.read_length);
            for (char& b : bases) {
                if (unit(rng) >= cfg.mutation_rate) continue;
                const int current = base_index(b);
                b = current < 0 ? kBases[bounded(rng, 4)]
                                : kBases[(current + 1 + static_cast<int>(bounded(rng, 3))) % 4];
            }
            reads.push_back({c.names[g] + "_r" + std::to_string(r), std::move(bases), g, start});
        }
    }
    if (!any_usable) throw ValidationError("every genome is shorter than the read length");
    return reads;
}

GenomeCollection synthesize_collection(const SyntheticConfig& cfg) {
    if (cfg.genomes == 0 || cfg.genome_length == 0) throw ValidationError("synthetic collection must be non-empty");
    if (cfg.island_length > cfg.genome_length) throw ValidationError("island longer than the genome");
    std::mt19937_64 rng(cfg.seed);
    std::string ancestor(cfg.genome_length, 'A');
    for (char& b : ancestor) b = kBases[bounded(rng, 4)];
    const std::size_t island_start = (cfg.genome_length - cfg.island_length) / 2;

    GenomeCollection c;
    for (std::size_t g = 0; g < cfg.genomes; ++g) {
        std::string genome = ancestor;
        for (std::size_t i = 0; i < genome.size(); ++i) {
            const bool conserved = i >= island_start && i < island_start + cfg.island_length;
            if (conserved || unit(rng) >= cfg.divergence) continue;
            genome[i] = kBases[(base_index(genome[i]) + 1 + static_cast<int>(bounded(rng, 3))) % 4];
        }
        c.names.push_back("g" + std::to_string(g));
        c.genomes.push_back(std::move(genome));
    }
    return c;
}

// ---------------------------------------------------------------------------

const char* to_string(RangeClass c) {
    switch (c) {
        case RangeClass::true_positive: return "true_positive";
        case RangeClass::false_positive: return "false_positive";
        case RangeClass::vague_positive: return "vague_positive";
        case RangeClass::false_negative: return "false_negative";
    }
    return "unknown";
}

RangeClass classify_range(const GenomeRange& range, std::size_t genome) {
    if (range.empty) return RangeClass::false_negative;
    if (genome < range.first || genome > range.last) return RangeClass::false_positive;
    return range.first == range.last ? RangeClass::true_positive : RangeClass::vague_positive;
}

bool classify_read(const MemTable& table, std::size_t genome) {
    if (table.empty()) return false;
    for (const auto& r : longest_mems(table)) {
        if (classify_range(r.range(), genome) != RangeClass::true_positive) return false;
    }
    return true;
}

void ClassCounts::add(RangeClass c) {
    switch (c) {
        case RangeClass::true_positive: ++true_positive; break;
        case RangeClass::false_positive: ++false_positive; break;
        case RangeClass::vague_positive: ++vague_positive; break;
        case RangeClass::false_negative: ++false_negative; break;
    }
}

ClassCounts& ClassCounts::operator+=(const ClassCounts& o) {
    true_positive += o.true_positive;
    false_positive += o.false_positive;
    vague_positive += o.vague_positive;
    false_negative += o.false_negative;
    return *this;
}

// ---------------------------------------------------------------------------

namespace {

struct Partial {
    std::size_t true_positive_reads = 0;
    std::size_t empty_tables = 0;
    double micros = 0.0;
    ClassCounts counts;
};

void evaluate_variant(const AugmentedFmIndex& ix, const std::vector<SimulatedRead>& reads,
                      const LcaStructure* tree, const EvalOptions& options, unsigned threads,
                      VariantResult& result) {
    if (options.keep_outcomes) result.outcomes.assign(reads.size(), {});
    std::vector<Partial> partials(threads);
    const MemOptions mem_options{options.min_mem};

    auto work = [&](unsigned t) {
        Partial& local = partials[t];
        for (std::size_t i = t; i < reads.size(); i += threads) {
            const auto begin = std::chrono::steady_clock::now();
            const Text symbols = query_symbols(ix, reads[i].bases);
            const MemTable table = compute_mem_table(ix, symbols, mem_options);
            const auto end = std::chrono::steady_clock::now();
            local.micros += std::chrono::duration<double, std::micro>(end - begin).count();

            const bool tp = classify_read(table, reads[i].genome);
            local.true_positive_reads += tp ? 1 : 0;
            local.empty_tables += table.empty() ? 1 : 0;
            for (const auto& r : table.records) local.counts.add(classify_range(r.range(), reads[i].genome));

            if (options.keep_outcomes) {
                ReadOutcome& o = result.outcomes[i];
                o.read = i;
                o.mems = table.size();
                o.true_positive = tp;
                if (!table.empty()) {
                    const auto longest = longest_mems(table);
                    o.longest = longest.size();
                    if (tree != nullptr) {
                        std::size_t first = longest.front().first_genome;
                        std::size_t last = longest.front().last_genome;
                        bool any = false;
                        for (const auto& r : longest) {
                            if (r.empty) continue;
                            first = any ? std::min(first, r.first_genome) : r.first_genome;
                            last = any ? std::max(last, r.last_genome) : r.last_genome;
                            any = true;
                        }
                        if (any) o.assigned_node = tree->subtree_for_range(first, last);
                    }
                }
            }
        }
    };

    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    double micros = 0.0;
    for (const auto& p : partials) {
        result.true_positive_reads += p.true_positive_reads;
        result.empty_tables += p.empty_tables;
        result.class_counts += p.counts;
        micros += p.micros;
    }
    result.reads = reads.size();
    result.tp_rate = reads.empty() ? 0.0 : static_cast<double>(result.true_positive_reads) / reads.size();
    result.mean_query_us = reads.empty() ? 0.0 : micros / static_cast<double>(reads.size());
}

}  // namespace

EvalReport run_experiment(const GenomeCollection& c, const LcaStructure* tree,
                          const std::vector<VariantConfig>& variants, const ReadSimConfig& cfg,
                          const EvalOptions& options) {
    validate(c);
    if (tree != nullptr) tree->tree().bind_to_collection(c.names);

    EvalReport report;
    report.genomes = c.size();
    report.sim = cfg;
    const auto reads = simulate_reads(c, cfg, &report.warnings);
    report.reads = reads.size();

    unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(reads.size(), 1))));

    for (const auto& v : variants) {
        VariantResult result;
        result.variant = v;
        try {
            const AugmentedFmIndex ix = build_variant_index(c, v);
            result.size_bytes = ix.serialize().size();
            result.text_symbols = ix.text_length();
            evaluate_variant(ix, reads, tree, options, threads, result);
        } catch (const std::exception& e) {
            result.error = e.what();
        }
        report.variants.push_back(std::move(result));
    }
    if (options.keep_outcomes) report.read_set = reads;
    return report;
}

std::string EvalReport::to_json(bool include_timing) const {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["genomes"] = genomes;
    doc["reads"] = reads;
    doc["read_length"] = sim.read_length;
    doc["mutation_rate"] = sim.mutation_rate;
    doc["reads_per_genome"] = sim.reads_per_genome;
    doc["seed"] = sim.seed;
    doc["note"] = "reads whose MEM table is empty count in the denominator as non-true-positives";
    doc["warnings"] = warnings;
    ordered_json list = ordered_json::array();
    for (const auto& v : variants) {
        ordered_json entry;
        entry["variant"] = v.variant.name();
        ordered_json params;
        params["mode"] = v.variant.name().substr(0, v.variant.name().find(':'));
        if (v.variant.kind == ProvenanceKind::kernel || v.variant.kind == ProvenanceKind::digest_kernel) {
            params["k_max"] = v.variant.k_max;
        }
        if (v.variant.provenance().is_digest()) {
            params["k"] = v.variant.digest.k;
            params["w"] = v.variant.digest.w;
            params["hash"] = {v.variant.digest.hash.a, v.variant.digest.hash.b, v.variant.digest.hash.m};
        }
        entry["params"] = params;
        if (!v.error.empty()) {
            entry["error"] = v.error;
            list.push_back(entry);
            continue;
        }
        entry["size_bytes"] = v.size_bytes;
        entry["text_symbols"] = v.text_symbols;
        entry["tp_rate"] = v.tp_rate;
        entry["true_positive_reads"] = v.true_positive_reads;
        entry["empty_tables"] = v.empty_tables;
        if (include_timing) entry["mean_query_us"] = v.mean_query_us;
        entry["class_counts"] = {{"true_positive", v.class_counts.true_positive},
                                 {"false_positive", v.class_counts.false_positive},
                                 {"vague_positive", v.class_counts.vague_positive},
                                 {"false_negative", v.class_counts.false_negative}};
        entry["mems"] = v.class_counts.total();
        list.push_back(entry);
    }
    doc["variants"] = list;
    return doc.dump(2);
}

void write_outcomes_tsv(std::ostream& out, const EvalReport& report, const LcaStructure* tree) {
    out << "variant\tread_id\ttrue_genome\tmems\tlongest_mems\ttrue_positive";
    if (tree != nullptr) out << "\tassigned_node";
    out << '\n';
    for (const auto& v : report.variants) {
        for (const auto& o : v.outcomes) {
            const auto& read = report.read_set.at(o.read);
            out << v.variant.name() << '\t' << read.id << '\t' << read.genome << '\t' << o.mems << '\t'
                << o.longest << '\t' << (o.true_positive ? 1 : 0);
            if (tree != nullptr) {
                out << '\t' << (o.assigned_node ? tree->tree().label(*o.assigned_node) : "-");
            }
            out << '\n';
        }
    }
}

}  // namespace katka
