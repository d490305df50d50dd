#include "katka/collection.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "katka/error.hpp"

namespace katka {

namespace {

void append_sequence(std::string& genome, const std::string& line, std::size_t line_no,
                     const ParseOptions& options) {
    for (char c : line) {
        switch (c) {
            case 'A': case 'C': case 'G': case 'T':
                genome.push_back(c);
                break;
            case 'a': case 'c': case 'g': case 't':
                genome.push_back(static_cast<char>(c - 'a' + 'A'));
                break;
            case ' ': case '\t': case '\r':
                break;
            case '$': case '#':
                throw ValidationError("line " + std::to_string(line_no) + ": reserved symbol '" +
                                      c + "' in sequence");
            default:
                if (options.allow_n && std::isalpha(static_cast<unsigned char>(c))) {
                    genome.push_back('N');
                    break;
                }
                throw ValidationError("line " + std::to_string(line_no) + ": invalid symbol '" +
                                      std::string(1, c) + "' (use --allow-n to admit ambiguity codes)");
        }
    }
}

}  // namespace

std::size_t GenomeCollection::concatenated_length() const {
    return base_count() + genomes.size();
}

std::size_t GenomeCollection::base_count() const {
    std::size_t n = 0;
    for (const auto& g : genomes) n += g.size();
    return n;
}

GenomeCollection parse_collection(std::istream& in, const ParseOptions& options) {
    GenomeCollection c;
    std::string line;
    std::size_t line_no = 0;
    bool in_record = false;
    InputFormat format = options.format;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (format == InputFormat::automatic) format = line.front() == '>' ? InputFormat::fasta : InputFormat::lines;
        if (format == InputFormat::lines) {
            std::string genome;
            append_sequence(genome, line, line_no, options);
            if (genome.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty genome");
            c.names.push_back("g" + std::to_string(c.genomes.size()));
            c.genomes.push_back(std::move(genome));
            continue;
        }

        if (line.front() == '>') {
            if (in_record && c.genomes.back().empty()) {
                throw ValidationError("record '" + c.names.back() + "' has an empty sequence");
            }
            std::string name = line.substr(1);
            const auto end = name.find_first_of(" \t");
            if (end != std::string::npos) name.resize(end);
            if (name.empty()) throw FormatError("line " + std::to_string(line_no) + ": malformed FASTA header");
            c.names.push_back(std::move(name));
            c.genomes.emplace_back();
            in_record = true;
            continue;
        }
        if (!in_record) {
            throw FormatError("line " + std::to_string(line_no) + ": sequence data before the first '>' header");
        }
        append_sequence(c.genomes.back(), line, line_no, options);
    }
    if (in.bad()) throw IoError("failed while reading collection input");
    if (c.genomes.empty()) throw ValidationError("collection input holds no genomes");
    validate(c);
    return c;
}

GenomeCollection parse_collection_string(const std::string& data, const ParseOptions& options) {
    std::istringstream in(data);
    return parse_collection(in, options);
}

GenomeCollection read_collection_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open collection file '" + path + "'");
    return parse_collection(in, options);
}

void validate(const GenomeCollection& c) {
    if (c.genomes.empty()) throw ValidationError("collection holds no genomes");
    if (c.names.size() != c.genomes.size()) throw ValidationError("collection names and genomes differ in count");
    for (std::size_t g = 0; g < c.genomes.size(); ++g) {
        if (c.genomes[g].empty()) throw ValidationError("genome " + std::to_string(g) + " is empty");
        for (char ch : c.genomes[g]) {
            if (ch != 'A' && ch != 'C' && ch != 'G' && ch != 'T' && ch != 'N') {
                throw ValidationError("genome " + std::to_string(g) + " holds reserved or invalid symbol '" +
                                      std::string(1, ch) + "'");
            }
        }
    }
}

void write_fasta(std::ostream& out, const GenomeCollection& c) {
    constexpr std::size_t kWidth = 80;
    for (std::size_t g = 0; g < c.size(); ++g) {
        out << '>' << c.names[g] << '\n';
        for (std::size_t i = 0; i < c.genomes[g].size(); i += kWidth) {
            out << c.genomes[g].substr(i, kWidth) << '\n';
        }
    }
}

BitVector separator_bits(std::span<const Symbol> text) {
    BitVector b(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == kSeparator) b.set(i);
    }
    b.build();
    return b;
}

SeparatedText separate(const GenomeCollection& c) {
    SeparatedText st;
    st.text.reserve(c.concatenated_length());
    for (const auto& g : c.genomes) {
        for (char ch : g) st.text.push_back(base_to_symbol(ch));
        st.text.push_back(kSeparator);
    }
    st.separators = separator_bits(st.text);
    return st;
}

std::size_t genome_of_position(const SeparatedText& st, std::size_t p) {
    if (p >= st.text.size()) throw ValidationError("position " + std::to_string(p) + " beyond text");
    if (st.separators[p]) throw ValidationError("position " + std::to_string(p) + " is a separator");
    return st.separators.rank1(p);
}

}  // namespace katka
