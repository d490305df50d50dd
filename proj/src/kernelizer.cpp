#include "katka/kernelizer.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "katka/error.hpp"

namespace katka {

namespace {

struct Occurrences {
    std::size_t first;
    std::size_t last;
};

// Windows are keyed by their start position; hashing uses precomputed
// polynomial fingerprints and equality compares the symbols themselves.
class WindowTable {
public:
    WindowTable(std::span<const Symbol> text, std::size_t k)
        : text_(text), k_(k), fingerprints_(text.size(), 0) {
        constexpr std::uint64_t kBase = 0x100000001b3ULL;
        std::uint64_t power = 1;
        for (std::size_t i = 0; i + 1 < k; ++i) power *= kBase;
        std::uint64_t h = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (i >= k) h -= power * (text[i - k] + 1);
            h = h * kBase + (text[i] + 1);
            if (i + 1 >= k) fingerprints_[i + 1 - k] = h;
        }
    }

    struct Hash {
        const WindowTable* table;
        std::size_t operator()(std::size_t start) const { return table->fingerprints_[start]; }
    };
    struct Equal {
        const WindowTable* table;
        bool operator()(std::size_t a, std::size_t b) const {
            const auto& t = table->text_;
            return std::equal(t.begin() + static_cast<std::ptrdiff_t>(a),
                              t.begin() + static_cast<std::ptrdiff_t>(a + table->k_),
                              t.begin() + static_cast<std::ptrdiff_t>(b));
        }
    };

    std::unordered_map<std::size_t, Occurrences, Hash, Equal> make_map() const {
        return std::unordered_map<std::size_t, Occurrences, Hash, Equal>(
            16, Hash{this}, Equal{this});
    }

private:
    std::span<const Symbol> text_;
    std::size_t k_;
    std::vector<std::uint64_t> fingerprints_;
};

}  // namespace

Kernel build_katka_kernel(std::span<const Symbol> text, KernelParams params) {
    if (params.k_max == 0) throw ValidationError("kernel order k_max must be at least 1");
    if (!text.empty() && text.back() != kSeparator) {
        throw ValidationError("kernel input must end with a '$' separator");
    }
    const std::size_t n = text.size();
    const std::size_t k = params.k_max;

    // Pass 1: first and last start of every in-genome k-mer.
    WindowTable table(text, k);
    auto windows = table.make_map();
    std::vector<std::int64_t> cover(n + 1, 0);  // difference array of kept windows
    std::size_t genome_start = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (text[i] == kEof || text[i] == kHash) {
            throw ValidationError("kernel input holds a reserved symbol at position " + std::to_string(i));
        }
        if (text[i] != kSeparator) continue;
        const std::size_t length = i - genome_start;
        if (length < k) {
            // No k-mer fits; keep the genome verbatim.
            cover[genome_start] += 1;
            cover[i] -= 1;
        } else {
            for (std::size_t s = genome_start; s + k <= i; ++s) {
                auto [it, inserted] = windows.try_emplace(s, Occurrences{s, s});
                if (!inserted) it->second.last = s;
            }
        }
        genome_start = i + 1;
    }
    for (const auto& [key, occ] : windows) {
        cover[occ.first] += 1;
        cover[occ.first + k] -= 1;
        if (occ.last != occ.first) {
            cover[occ.last] += 1;
            cover[occ.last + k] -= 1;
        }
    }

    // Pass 2: emit kept symbols, collapsing interior gaps to '#'.
    Kernel kernel{{}, {}, params};
    std::int64_t depth = 0;
    bool gap = false;
    for (std::size_t i = 0; i < n; ++i) {
        depth += cover[i];
        if (text[i] == kSeparator) {
            kernel.text.push_back(kSeparator);
            gap = false;
            continue;
        }
        if (depth <= 0) {
            gap = true;
            continue;
        }
        if (gap && !kernel.text.empty() && kernel.text.back() != kSeparator) {
            kernel.text.push_back(kHash);
        }
        gap = false;
        kernel.text.push_back(text[i]);
    }
    kernel.separators = separator_bits(kernel.text);
    return kernel;
}

KernelSizeReport kernel_size_report(std::span<const Symbol> text) {
    KernelSizeReport r;
    for (Symbol s : text) {
        if (s == kSeparator) {
            ++r.separator_count;
        } else if (s == kHash) {
            ++r.hash_symbols;
        } else {
            ++r.kept_base_symbols;
        }
    }
    return r;
}

}  // namespace katka
