#include "katka/mem_finder.hpp"

#include <algorithm>
#include <ostream>

#include "katka/error.hpp"

namespace katka {

Text query_symbols(const AugmentedFmIndex& ix, std::string_view read) {
    const auto& prov = ix.provenance();
    if (prov.is_digest()) return digest_sequence(read, prov.digest).symbols;
    Text out;
    out.reserve(read.size());
    for (char c : read) out.push_back(base_to_symbol(c));
    return out;
}

MemTable compute_mem_table(const AugmentedFmIndex& ix, std::span<const Symbol> read,
                           const MemOptions& options) {
    for (std::size_t i = 0; i < read.size(); ++i) {
        if (read[i] == kSeparator || read[i] == kHash || read[i] == kEof) {
            throw ValidationError("read holds a separator symbol at offset " + std::to_string(i));
        }
    }
    const bool digest_semantics = ix.provenance().is_digest();

    std::vector<MemRecord> found;  // filled right to left
    auto emit = [&](std::size_t start, std::size_t length, SaInterval iv) {
        if (length == 0) return;
        for (auto it = found.rbegin(); it != found.rend(); ++it) {
            if (it->empty) continue;
            if (it->read_start <= start && start + length <= it->read_start + it->length) return;
            break;
        }
        const auto [first, last] = ix.first_last_positions(iv);
        found.push_back({start, length, first, last, ix.genome_of_position(first),
                         ix.genome_of_position(last), false});
    };

    std::size_t start = read.size();
    std::size_t length = 0;
    SaInterval iv = ix.full_interval();
    while (start > 0) {
        const Symbol c = read[start - 1];
        const auto step = ix.backward_step(iv, c);
        if (step.status == StepStatus::ok) {
            iv = step.interval;
            --start;
            ++length;
            continue;
        }
        emit(start, length, iv);
        if (step.status == StepStatus::not_in_alphabet || !ix.bwt().contains(c)) {
            if (digest_semantics) found.push_back({start - 1, 1, 0, 0, 0, 0, true});
            --start;
            length = 0;
            iv = ix.full_interval();
            continue;
        }
        const auto shrunk = ix.shrink_to_extendable(iv, length, c);
        iv = shrunk.interval;
        length = shrunk.length;
    }
    emit(0, length, iv);

    MemTable table;
    table.records.reserve(found.size());
    for (auto it = found.rbegin(); it != found.rend(); ++it) {
        if (!it->empty && it->length < options.min_mem) continue;
        table.records.push_back(*it);
    }
    return table;
}

std::vector<MemRecord> longest_mems(const MemTable& table) {
    if (table.empty()) throw ValidationError("longest MEMs of an empty table");
    std::size_t best = 0;
    for (const auto& r : table.records) best = std::max(best, r.length);
    std::vector<MemRecord> out;
    for (const auto& r : table.records) {
        if (r.length == best) out.push_back(r);
    }
    return out;
}

std::string mem_string(const AugmentedFmIndex& ix, std::span<const Symbol> read, const MemRecord& r) {
    const auto part = read.subspan(r.read_start, r.length);
    if (ix.alphabet().kind == AlphabetKind::nucleotide) {
        std::string s;
        for (Symbol x : part) s.push_back(symbol_to_char(x));
        return s;
    }
    if (ix.alphabet().k == 3) return render_ascii(part, 3);
    return render_values(part);
}

void write_mem_tsv_header(std::ostream& out) {
    out << "read_id\tread_start\tlength\tmem_string\tfirst_pos\tlast_pos\tfirst_genome\tlast_genome\tempty_flag\n";
}

void write_mem_tsv(std::ostream& out, const AugmentedFmIndex& ix, const std::string& read_id,
                   std::span<const Symbol> read, const MemTable& table) {
    for (const auto& r : table.records) {
        out << read_id << '\t' << r.read_start << '\t' << r.length << '\t' << mem_string(ix, read, r) << '\t';
        if (r.empty) {
            out << "-\t-\t-\t-\t1\n";
        } else {
            out << r.first_pos << '\t' << r.last_pos << '\t' << r.first_genome << '\t' << r.last_genome
                << "\t0\n";
        }
    }
}

}  // namespace katka
