#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "katka/alphabet.hpp"
#include "katka/collection.hpp"
#include "katka/digester.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) { return std::string(KATKA_TEST_DATA) + "/" + name; }

inline std::string slurp(const std::string& name) {
    std::ifstream in(data_path(name), std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string s = buf.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

inline katka::GenomeCollection toy16() { return katka::read_collection_file(data_path("toy16_genomes.fa")); }
inline katka::GenomeCollection toy5() { return katka::read_collection_file(data_path("toy5_genomes.txt")); }

// Query read from the toy examples.
inline constexpr const char* kReadP = "GGATGGGCTAGACGATCTTCTGTG";

}  // namespace testutil
