#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "katka/suffix_structures.hpp"

namespace katka {

struct PhyloNode {
    std::string label;
    std::int64_t parent = -1;
    std::vector<std::size_t> children;
    std::int64_t genome = -1;  // leaf's genome index, -1 for internal nodes
};

// Rooted ordered tree whose leaves, left to right, are genomes 0..G-1.
class PhyloTree {
public:
    static PhyloTree parse_newick(std::string_view text);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t leaf_count() const { return leaves_.size(); }
    std::size_t root() const { return 0; }
    const PhyloNode& node(std::size_t id) const { return nodes_.at(id); }
    std::size_t leaf(std::size_t genome) const;

    // Display label; unlabeled internal nodes get "node<id>".
    std::string label(std::size_t id) const;

    // Checks leaf count against the collection. If leaf labels name the
    // genomes, their left-to-right order must equal the collection order;
    // otherwise leaves map to genomes by position.
    void bind_to_collection(const std::vector<std::string>& genome_names) const;

    // Genome indices [first, last] of the leaves under `id`.
    std::pair<std::size_t, std::size_t> leaf_span(std::size_t id) const;

private:
    std::vector<PhyloNode> nodes_;
    std::vector<std::size_t> leaves_;  // genome index -> node id
    std::vector<std::pair<std::size_t, std::size_t>> spans_;
};

// LCA by Euler tour and range-minimum over depths.
class LcaStructure {
public:
    explicit LcaStructure(const PhyloTree& tree);

    std::size_t lca(std::size_t a, std::size_t b) const;
    // Root of the smallest subtree holding every genome in [first, last].
    std::size_t subtree_for_range(std::size_t first, std::size_t last) const;

    const PhyloTree& tree() const { return *tree_; }

private:
    const PhyloTree* tree_;
    std::vector<std::size_t> euler_;
    std::vector<Pos> depth_;
    std::vector<std::size_t> first_visit_;
    RmqStructure rmq_;
};

}  // namespace katka
