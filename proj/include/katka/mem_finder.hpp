#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "katka/fm_index.hpp"

namespace katka {

// One maximal exact match. Positions and genomes refer to the indexed text.
// `empty` marks a digest symbol that occurs nowhere in the index.
struct MemRecord {
    std::size_t read_start = 0;
    std::size_t length = 0;
    Pos first_pos = 0;
    Pos last_pos = 0;
    std::size_t first_genome = 0;
    std::size_t last_genome = 0;
    bool empty = false;

    GenomeRange range() const {
        return empty ? GenomeRange::none() : GenomeRange::of(first_genome, last_genome);
    }
    friend bool operator==(const MemRecord&, const MemRecord&) = default;
};

// Records ordered by read_start.
struct MemTable {
    std::vector<MemRecord> records;

    bool empty() const { return records.empty(); }
    std::size_t size() const { return records.size(); }
};

struct MemOptions {
    std::size_t min_mem = 1;
};

// Read symbols as the index expects them: bases for raw/kernel indexes, the
// read's minimizer digest (with the index's stored parameters) otherwise.
Text query_symbols(const AugmentedFmIndex& ix, std::string_view read);

// Every maximal exact match of `read`. Right-to-left backward search; on a
// failed left extension the current match is emitted and shrunk to its
// longest prefix that the failing symbol precedes somewhere in the text.
MemTable compute_mem_table(const AugmentedFmIndex& ix, std::span<const Symbol> read,
                           const MemOptions& options = {});

// Records of maximum length, in read order. Throws on an empty table.
std::vector<MemRecord> longest_mems(const MemTable& table);

// The matched read symbols as text: bases, ASCII digest (k=3) or values.
std::string mem_string(const AugmentedFmIndex& ix, std::span<const Symbol> read, const MemRecord& r);

void write_mem_tsv_header(std::ostream& out);
void write_mem_tsv(std::ostream& out, const AugmentedFmIndex& ix, const std::string& read_id,
                   std::span<const Symbol> read, const MemTable& table);

}  // namespace katka
