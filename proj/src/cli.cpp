#include "katka/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "katka/collection.hpp"
#include "katka/digester.hpp"
#include "katka/error.hpp"
#include "katka/evaluator.hpp"
#include "katka/fm_index.hpp"
#include "katka/kernelizer.hpp"
#include "katka/mem_finder.hpp"
#include "katka/taxonomy.hpp"

namespace katka {

namespace {

struct Read {
    std::string id;
    std::string bases;
};

// FASTA, FASTQ, or one read per line ("id<TAB>bases" or bare bases).
std::vector<Read> read_reads(std::istream& in) {
    std::vector<Read> reads;
    std::string line;
    std::size_t line_no = 0;
    char format = 0;
    auto clean = [](std::string s) {
        if (!s.empty() && s.back() == '\r') s.pop_back();
        return s;
    };
    auto upper = [](std::string s) {
        std::erase_if(s, [](unsigned char c) { return std::isspace(c) != 0; });
        for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return s;
    };
    while (std::getline(in, line)) {
        ++line_no;
        line = clean(line);
        if (line.empty()) continue;
        if (format == 0) format = line.front() == '>' ? '>' : line.front() == '@' ? '@' : 'l';
        if (format == '>') {
            if (line.front() == '>') {
                std::string id = line.substr(1, line.find_first_of(" \t") - 1);
                if (id.empty()) throw FormatError("reads line " + std::to_string(line_no) + ": empty read name");
                reads.push_back({id, {}});
            } else {
                reads.back().bases += upper(line);
            }
        } else if (format == '@') {
            if (line.front() != '@') throw FormatError("reads line " + std::to_string(line_no) + ": expected '@' record");
            std::string seq, plus, qual;
            if (!std::getline(in, seq) || !std::getline(in, plus) || !std::getline(in, qual)) {
                throw FormatError("reads line " + std::to_string(line_no) + ": truncated FASTQ record");
            }
            line_no += 3;
            if (clean(plus).empty() || clean(plus).front() != '+') {
                throw FormatError("reads line " + std::to_string(line_no - 1) + ": expected '+' separator");
            }
            reads.push_back({line.substr(1, line.find_first_of(" \t") - 1), upper(clean(seq))});
        } else {
            const auto tab = line.find('\t');
            if (tab == std::string::npos) {
                reads.push_back({"r" + std::to_string(reads.size()), upper(line)});
            } else {
                reads.push_back({line.substr(0, tab), upper(line.substr(tab + 1))});
            }
        }
    }
    if (in.bad()) throw IoError("failed while reading reads");
    return reads;
}

std::vector<Read> read_reads_file(const std::string& path) {
    if (path == "-") return read_reads(std::cin);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open reads file '" + path + "'");
    return read_reads(in);
}

PhyloTree read_tree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tree file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return PhyloTree::parse_newick(buf.str());
}

// Output stream: the given file, or `fallback` when the path is empty or "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw IoError("cannot open '" + path + "' for writing");
        out_ = file_.get();
    }
    std::ostream& stream() { return *out_; }
    void finish() {
        out_->flush();
        if (!*out_) throw IoError("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* out_;
};

std::string symbol_label(const Alphabet& a, Symbol s) {
    if (s == kEof) return "EOF";
    if (s == kHash) return "#";
    if (s == kSeparator) return "$";
    if (a.kind == AlphabetKind::nucleotide) return std::string(1, symbol_to_char(s));
    const Symbol one[] = {s};
    return a.k == 3 ? render_ascii(one, 3) : std::to_string(s - kFirstData);
}

struct IndexOptions {
    std::string mode = "raw";
    std::size_t k_max = 0;
    unsigned k = 3;
    unsigned w = 10;
    HashParams hash;
};

void add_index_flags(CLI::App* cmd, IndexOptions& o) {
    cmd->add_option("--mode", o.mode, "Index variant: raw, kernel, digest or digest-kernel")
        ->check(CLI::IsMember({"raw", "kernel", "digest", "digest-kernel"}))
        ->capture_default_str();
    cmd->add_option("--kmax", o.k_max, "Kernel order (kernel and digest-kernel modes)");
    cmd->add_option("--k", o.k, "Minimizer length in bases (1-15)")->capture_default_str();
    cmd->add_option("--w", o.w, "Window length in k-mers")->capture_default_str();
    cmd->add_option("--hash-a", o.hash.a, "Minimizer hash multiplier")->capture_default_str();
    cmd->add_option("--hash-b", o.hash.b, "Minimizer hash offset")->capture_default_str();
    cmd->add_option("--hash-m", o.hash.m, "Minimizer hash modulus")->capture_default_str();
}

VariantConfig variant_from(const IndexOptions& o) {
    std::string spec = o.mode;
    if (o.mode == "kernel" || o.mode == "digest-kernel") {
        if (o.k_max == 0) throw ValidationError("--mode " + o.mode + " needs --kmax >= 1");
    }
    if (o.mode == "kernel") spec += ":" + std::to_string(o.k_max);
    if (o.mode == "digest") spec += ":" + std::to_string(o.k) + ":" + std::to_string(o.w);
    if (o.mode == "digest-kernel") {
        spec += ":" + std::to_string(o.k) + ":" + std::to_string(o.w) + ":" + std::to_string(o.k_max);
    }
    return VariantConfig::parse(spec, o.hash);
}

std::vector<VariantConfig> default_grid(const HashParams& hash) {
    std::vector<VariantConfig> out;
    for (const char* spec : {"raw", "kernel:100", "kernel:50", "kernel:20", "digest:3:10", "digest-kernel:3:10:20"}) {
        out.push_back(VariantConfig::parse(spec, hash));
    }
    return out;
}

// k_max in {5, 10, ..., 50, 100}, w in {5, 10, ..., 50}, 3-mer minimizers.
std::vector<VariantConfig> full_grid(const HashParams& hash) {
    std::vector<std::size_t> kmaxes;
    for (std::size_t k = 5; k <= 50; k += 5) kmaxes.push_back(k);
    kmaxes.push_back(100);
    std::vector<VariantConfig> out{VariantConfig::parse("raw", hash)};
    for (auto k : kmaxes) out.push_back(VariantConfig::parse("kernel:" + std::to_string(k), hash));
    for (unsigned w = 5; w <= 50; w += 5) {
        out.push_back(VariantConfig::parse("digest:3:" + std::to_string(w), hash));
        for (auto k : kmaxes) {
            out.push_back(VariantConfig::parse("digest-kernel:3:" + std::to_string(w) + ":" + std::to_string(k), hash));
        }
    }
    return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lossy augmented FM-indexes over genome collections: build, query, classify, evaluate."};
    app.require_subcommand(1);
    app.set_version_flag("--version", "katka 1.0");

    // build
    auto* build = app.add_subcommand("build", "Build an index file (KTK2 format) from a genome collection");
    std::string build_in, build_out, format = "auto";
    bool allow_n = false;
    IndexOptions build_opts;
    build->add_option("-i,--input", build_in, "Collection: FASTA, or one genome per line")->required();
    build->add_option("-o,--output", build_out, "Index file to write")->required();
    build->add_option("--format", format, "Collection format: auto, fasta or lines")
        ->check(CLI::IsMember({"auto", "fasta", "lines"}))
        ->capture_default_str();
    build->add_flag("--allow-n", allow_n, "Map non-ACGT letters to a wildcard that never matches");
    add_index_flags(build, build_opts);
    bool build_print_text = false;
    build->add_flag("--print-text", build_print_text, "Also print the indexed text");

    // query
    auto* query = app.add_subcommand("query", "MEM tables of reads against an index, as TSV");
    std::string query_index, query_reads = "-", query_out;
    std::size_t min_mem = 1;
    query->add_option("-x,--index", query_index, "Index file")->required();
    query->add_option("-r,--reads", query_reads, "Reads: FASTA, FASTQ, or one per line ('-' for stdin)");
    query->add_option("-o,--output", query_out, "TSV output (default stdout)");
    query->add_option("--min-mem", min_mem, "Drop MEMs shorter than this")->capture_default_str();

    // classify
    auto* classify = app.add_subcommand("classify", "Assign reads by their longest MEMs");
    std::string cls_index, cls_reads = "-", cls_out, cls_tree, cls_collection;
    classify->add_option("-x,--index", cls_index, "Index file")->required();
    classify->add_option("-r,--reads", cls_reads, "Reads file ('-' for stdin)");
    classify->add_option("-o,--output", cls_out, "TSV output (default stdout)");
    classify->add_option("--tree", cls_tree, "Newick tree whose leaves, left to right, are the genomes");
    classify->add_option("--collection", cls_collection, "Collection file, to match tree leaf labels to genome names");
    classify->add_option("--min-mem", min_mem, "Drop MEMs shorter than this")->capture_default_str();

    // eval
    auto* eval = app.add_subcommand("eval", "Simulate reads and report size, TP rate and query time per variant");
    std::string eval_in, eval_out, eval_tree, per_read;
    std::vector<std::string> variant_specs;
    std::string grid = "default";
    ReadSimConfig sim;
    EvalOptions eval_opts;
    HashParams eval_hash;
    bool no_timing = false;
    eval->add_option("-i,--input", eval_in, "Collection file")->required();
    eval->add_option("-o,--output", eval_out, "JSON report (default stdout)");
    eval->add_option("--variant", variant_specs,
                     "raw | kernel:KMAX | digest:K:W | digest-kernel:K:W:KMAX (repeatable; overrides --grid)");
    eval->add_option("--grid", grid, "Variant grid when no --variant is given: default or full")
        ->check(CLI::IsMember({"default", "full"}))
        ->capture_default_str();
    eval->add_option("--read-len", sim.read_length, "Read length")->capture_default_str();
    eval->add_option("--mut-rate", sim.mutation_rate, "Per-base substitution probability")->capture_default_str();
    eval->add_option("--reads-per-genome", sim.reads_per_genome, "Reads drawn per genome")->capture_default_str();
    eval->add_option("--seed", sim.seed, "Simulation seed")->capture_default_str();
    eval->add_option("--threads", eval_opts.threads, "Worker threads (0: all cores)")->capture_default_str();
    eval->add_option("--min-mem", eval_opts.min_mem, "Drop MEMs shorter than this")->capture_default_str();
    eval->add_option("--tree", eval_tree, "Newick tree for per-read node assignment");
    eval->add_option("--per-read", per_read, "Write per-read outcomes as TSV to this file");
    eval->add_option("--hash-a", eval_hash.a, "Minimizer hash multiplier")->capture_default_str();
    eval->add_option("--hash-b", eval_hash.b, "Minimizer hash offset")->capture_default_str();
    eval->add_option("--hash-m", eval_hash.m, "Minimizer hash modulus")->capture_default_str();
    eval->add_flag("--no-timing", no_timing, "Leave timing out of the report");
    eval->add_option("--format", format, "Collection format: auto, fasta or lines")
        ->check(CLI::IsMember({"auto", "fasta", "lines"}));
    eval->add_flag("--allow-n", allow_n, "Map non-ACGT letters to a wildcard that never matches");

    // dump
    auto* dump = app.add_subcommand("dump", "Print an index's parameters and its SA/LCP/BWT rows");
    std::string dump_index;
    std::size_t row_from = 0, row_count = 0;
    dump->add_option("-x,--index", dump_index, "Index file")->required();
    dump->add_option("--from", row_from, "First row to print")->capture_default_str();
    dump->add_option("--rows", row_count, "Rows to print (0: none)")->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "Write a seeded synthetic collection as FASTA");
    SyntheticConfig synth_cfg;
    std::string synth_out;
    synth->add_option("-o,--output", synth_out, "FASTA output (default stdout)");
    synth->add_option("--genomes", synth_cfg.genomes, "Number of genomes")->capture_default_str();
    synth->add_option("--length", synth_cfg.genome_length, "Bases per genome")->capture_default_str();
    synth->add_option("--divergence", synth_cfg.divergence, "Per-base substitution rate from the ancestor")
        ->capture_default_str();
    synth->add_option("--island", synth_cfg.island_length, "Length of the region shared by all genomes")
        ->capture_default_str();
    synth->add_option("--seed", synth_cfg.seed, "Seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    auto parse_options = [&] {
        ParseOptions p;
        p.allow_n = allow_n;
        p.format = format == "fasta" ? InputFormat::fasta : format == "lines" ? InputFormat::lines
                                                                            : InputFormat::automatic;
        return p;
    };

    try {
        if (*build) {
            const auto variant = variant_from(build_opts);
            const auto collection = read_collection_file(build_in, parse_options());
            const Text text = variant_text(collection, variant);
            const Alphabet alphabet = variant.provenance().is_digest() ? Alphabet::digest_of(variant.digest.k)
                                                                       : Alphabet::nucleotides();
            const auto ix = AugmentedFmIndex::build(text, alphabet, variant.provenance());
            ix.save(build_out);
            const auto sizes = kernel_size_report(text);
            std::ifstream written(build_out, std::ios::binary | std::ios::ate);
            out << "variant\t" << variant.name() << '\n'
                << "genomes\t" << collection.size() << '\n'
                << "bases\t" << collection.base_count() << '\n'
                << "text_symbols\t" << text.size() << '\n'
                << "non_separator_symbols\t" << sizes.non_separator_symbols() << '\n'
                << "kept_symbols\t" << sizes.kept_base_symbols << '\n'
                << "hash_symbols\t" << sizes.hash_symbols << '\n'
                << "size_bytes\t" << static_cast<long long>(written.tellg()) << '\n';
            if (build_print_text) {
                out << "text\t"
                    << (alphabet.kind == AlphabetKind::nucleotide ? render_nucleotides(text)
                        : alphabet.k == 3                         ? render_ascii(text, 3)
                                                                  : render_values(text))
                    << '\n';
            }
            return kExitOk;
        }

        if (*query) {
            const auto ix = AugmentedFmIndex::load(query_index);
            const auto reads = read_reads_file(query_reads);
            Sink sink(query_out, out);
            if (!reads.empty()) write_mem_tsv_header(sink.stream());
            for (const auto& r : reads) {
                const Text symbols = query_symbols(ix, r.bases);
                write_mem_tsv(sink.stream(), ix, r.id, symbols, compute_mem_table(ix, symbols, {min_mem}));
            }
            sink.finish();
            return kExitOk;
        }

        if (*classify) {
            const auto ix = AugmentedFmIndex::load(cls_index);
            std::unique_ptr<PhyloTree> tree;
            std::unique_ptr<LcaStructure> lca;
            if (!cls_tree.empty()) {
                tree = std::make_unique<PhyloTree>(read_tree_file(cls_tree));
                std::vector<std::string> names;
                if (!cls_collection.empty()) {
                    names = read_collection_file(cls_collection, parse_options()).names;
                    if (names.size() != ix.genome_count()) {
                        throw ValidationError("collection and index disagree on the genome count");
                    }
                } else {
                    for (std::size_t g = 0; g < ix.genome_count(); ++g) names.push_back("g" + std::to_string(g));
                }
                tree->bind_to_collection(names);
                lca = std::make_unique<LcaStructure>(*tree);
            }
            const auto reads = read_reads_file(cls_reads);
            Sink sink(cls_out, out);
            auto& o = sink.stream();
            if (!reads.empty()) {
                o << "read_id\tmem_length\tread_start\tfirst_genome\tlast_genome";
                if (lca) o << "\tnode";
                o << '\n';
            }
            for (const auto& r : reads) {
                const Text symbols = query_symbols(ix, r.bases);
                const auto table = compute_mem_table(ix, symbols, {min_mem});
                if (table.empty()) {
                    o << r.id << "\t0\t-\t-\t-" << (lca ? "\t-" : "") << '\n';
                    continue;
                }
                for (const auto& m : longest_mems(table)) {
                    o << r.id << '\t' << m.length << '\t' << m.read_start << '\t';
                    if (m.empty) {
                        o << "-\t-" << (lca ? "\t-" : "") << '\n';
                        continue;
                    }
                    o << m.first_genome << '\t' << m.last_genome;
                    if (lca) o << '\t' << tree->label(lca->subtree_for_range(m.first_genome, m.last_genome));
                    o << '\n';
                }
            }
            sink.finish();
            return kExitOk;
        }

        if (*eval) {
            std::vector<VariantConfig> variants;
            for (const auto& s : variant_specs) variants.push_back(VariantConfig::parse(s, eval_hash));
            if (variants.empty()) variants = grid == "full" ? full_grid(eval_hash) : default_grid(eval_hash);
            sim.validate();
            const auto collection = read_collection_file(eval_in, parse_options());
            std::unique_ptr<PhyloTree> tree;
            std::unique_ptr<LcaStructure> lca;
            if (!eval_tree.empty()) {
                tree = std::make_unique<PhyloTree>(read_tree_file(eval_tree));
                tree->bind_to_collection(collection.names);
                lca = std::make_unique<LcaStructure>(*tree);
            }
            eval_opts.keep_outcomes = !per_read.empty();
            const auto report = run_experiment(collection, lca.get(), variants, sim, eval_opts);
            for (const auto& w : report.warnings) err << "warning: " << w << '\n';
            for (const auto& v : report.variants) {
                if (!v.error.empty()) err << "variant " << v.variant.name() << " failed: " << v.error << '\n';
            }
            Sink sink(eval_out, out);
            sink.stream() << report.to_json(!no_timing) << '\n';
            sink.finish();
            if (!per_read.empty()) {
                Sink tsv(per_read, out);
                write_outcomes_tsv(tsv.stream(), report, lca.get());
                tsv.finish();
            }
            if (!eval_out.empty() && eval_out != "-") {
                for (const auto& v : report.variants) {
                    if (!v.error.empty()) continue;
                    out << v.variant.name() << "\tsize_bytes=" << v.size_bytes << "\ttp_rate=" << std::fixed
                        << std::setprecision(4) << v.tp_rate << "\tmean_query_us=" << std::setprecision(2)
                        << v.mean_query_us << '\n';
                }
            }
            return kExitOk;
        }

        if (*dump) {
            const auto ix = AugmentedFmIndex::load(dump_index);
            out << "provenance\t" << ix.provenance().describe() << '\n'
                << "rows\t" << ix.size() << '\n'
                << "genomes\t" << ix.genome_count() << '\n';
            const std::size_t end = std::min(ix.size(), row_from + row_count);
            if (row_from < end) out << "row\tsa\tlcp\tbwt\n";
            for (std::size_t r = row_from; r < end; ++r) {
                out << r << '\t' << ix.sa()[r] << '\t' << ix.lcp()[r] << '\t'
                    << symbol_label(ix.alphabet(), ix.bwt()[r]) << '\n';
            }
            return kExitOk;
        }

        if (*synth) {
            const auto c = synthesize_collection(synth_cfg);
            Sink sink(synth_out, out);
            write_fasta(sink.stream(), c);
            sink.finish();
            return kExitOk;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const std::exception& e) {
        err << "unexpected error: " << e.what() << '\n';
        return kExitUnexpected;
    }
    return kExitUnexpected;
}

}  // namespace katka
