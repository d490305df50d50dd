#pragma once

#include <cstddef>
#include <span>

#include "katka/alphabet.hpp"
#include "katka/bit_vector.hpp"
#include "katka/collection.hpp"

namespace katka {

struct KernelParams {
    std::size_t k_max = 0;
};

// Order-k_max KATKA kernel: the symbols of the first and last occurrence of
// every distinct k_max-mer plus every '$'. Omitted runs between kept
// symbols become one '#'; omitted runs touching '$' or the text ends vanish.
struct Kernel {
    Text text;
    BitVector separators;
    KernelParams params;
};

// `text` is any '$'-terminated concatenation (raw genomes or digests).
Kernel build_katka_kernel(std::span<const Symbol> text, KernelParams params);
inline Kernel build_katka_kernel(const SeparatedText& st, KernelParams params) {
    return build_katka_kernel(st.text, params);
}

struct KernelSizeReport {
    std::size_t kept_base_symbols = 0;  // neither '#' nor '$'
    std::size_t hash_symbols = 0;
    std::size_t separator_count = 0;

    std::size_t non_separator_symbols() const { return kept_base_symbols + hash_symbols; }
};

KernelSizeReport kernel_size_report(std::span<const Symbol> text);
inline KernelSizeReport kernel_size_report(const Kernel& k) { return kernel_size_report(k.text); }

}  // namespace katka
