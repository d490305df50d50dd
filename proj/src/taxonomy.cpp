#include "katka/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include "katka/error.hpp"

namespace katka {

namespace {

class NewickParser {
public:
    explicit NewickParser(std::string_view text) : text_(text) {}

    std::vector<PhyloNode> parse() {
        skip_space();
        node(-1);
        skip_space();
        expect(';');
        skip_space();
        if (at_ != text_.size()) fail("unexpected text after ';'");
        return std::move(nodes_);
    }

private:
    void node(std::int64_t parent) {
        const std::size_t id = nodes_.size();
        nodes_.push_back({});
        nodes_[id].parent = parent;
        if (parent >= 0) nodes_[static_cast<std::size_t>(parent)].children.push_back(id);

        skip_space();
        if (peek() == '(') {
            ++at_;
            do {
                node(static_cast<std::int64_t>(id));
                skip_space();
            } while (consume(','));
            expect(')');
        }
        skip_space();
        nodes_[id].label = label();
        skip_space();
        if (consume(':')) {
            skip_space();
            const std::size_t start = at_;
            while (at_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[at_])) ||
                                          std::string_view("+-.eE").find(text_[at_]) != std::string_view::npos)) {
                ++at_;
            }
            if (start == at_) fail("missing branch length after ':'");
        }
    }

    std::string label() {
        if (peek() == '\'') {
            ++at_;
            std::string out;
            while (true) {
                if (at_ >= text_.size()) fail("unterminated quoted label");
                if (text_[at_] == '\'') {
                    if (at_ + 1 < text_.size() && text_[at_ + 1] == '\'') {
                        out.push_back('\'');
                        at_ += 2;
                        continue;
                    }
                    ++at_;
                    return out;
                }
                out.push_back(text_[at_++]);
            }
        }
        std::string out;
        while (at_ < text_.size() && std::string_view("(),:;[]'").find(text_[at_]) == std::string_view::npos &&
               !std::isspace(static_cast<unsigned char>(text_[at_]))) {
            out.push_back(text_[at_]);
            ++at_;
        }
        return out;
    }

    void skip_space() {
        while (at_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[at_]))) {
                ++at_;
            } else if (text_[at_] == '[') {
                const auto close = text_.find(']', at_);
                if (close == std::string_view::npos) fail("unterminated comment");
                at_ = close + 1;
            } else {
                break;
            }
        }
    }

    char peek() const { return at_ < text_.size() ? text_[at_] : '\0'; }
    bool consume(char c) {
        if (peek() != c) return false;
        ++at_;
        return true;
    }
    void expect(char c) {
        if (!consume(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("newick parse error at offset " + std::to_string(at_) + ": " + what);
    }

    std::string_view text_;
    std::size_t at_ = 0;
    std::vector<PhyloNode> nodes_;
};

}  // namespace

PhyloTree PhyloTree::parse_newick(std::string_view text) {
    PhyloTree tree;
    tree.nodes_ = NewickParser(text).parse();

    // Leaves in left-to-right order; spans bottom-up (children have larger ids).
    tree.spans_.assign(tree.nodes_.size(), {0, 0});
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const std::size_t id = stack.back();
        stack.pop_back();
        auto& n = tree.nodes_[id];
        if (n.children.empty()) {
            n.genome = static_cast<std::int64_t>(tree.leaves_.size());
            tree.leaves_.push_back(id);
            continue;
        }
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
    }
    for (std::size_t id = tree.nodes_.size(); id-- > 0;) {
        const auto& n = tree.nodes_[id];
        if (n.children.empty()) {
            const auto g = static_cast<std::size_t>(n.genome);
            tree.spans_[id] = {g, g};
        } else {
            tree.spans_[id] = {tree.spans_[n.children.front()].first, tree.spans_[n.children.back()].second};
        }
    }

    std::unordered_set<std::string> seen;
    for (std::size_t id : tree.leaves_) {
        const auto& name = tree.nodes_[id].label;
        if (name.empty()) continue;
        if (!seen.insert(name).second) throw ValidationError("duplicate leaf label '" + name + "' in tree");
    }
    return tree;
}

std::size_t PhyloTree::leaf(std::size_t genome) const {
    if (genome >= leaves_.size()) {
        throw ValidationError("genome " + std::to_string(genome) + " outside the tree's " +
                              std::to_string(leaves_.size()) + " leaves");
    }
    return leaves_[genome];
}

std::string PhyloTree::label(std::size_t id) const {
    const auto& n = nodes_.at(id);
    return n.label.empty() ? "node" + std::to_string(id) : n.label;
}

void PhyloTree::bind_to_collection(const std::vector<std::string>& genome_names) const {
    if (genome_names.size() != leaves_.size()) {
        throw ValidationError("tree has " + std::to_string(leaves_.size()) + " leaves but the collection has " +
                              std::to_string(genome_names.size()) + " genomes");
    }
    const std::set<std::string> names(genome_names.begin(), genome_names.end());
    bool any_named = false;
    for (std::size_t id : leaves_) any_named = any_named || names.count(nodes_[id].label) > 0;
    if (!any_named) return;  // positional mapping
    for (std::size_t g = 0; g < leaves_.size(); ++g) {
        if (nodes_[leaves_[g]].label != genome_names[g]) {
            throw ValidationError("tree leaf " + std::to_string(g) + " is '" + nodes_[leaves_[g]].label +
                                  "' but genome " + std::to_string(g) + " is '" + genome_names[g] +
                                  "'; leaves must follow collection order");
        }
    }
}

std::pair<std::size_t, std::size_t> PhyloTree::leaf_span(std::size_t id) const {
    return spans_.at(id);
}

// ---------------------------------------------------------------------------

LcaStructure::LcaStructure(const PhyloTree& tree) : tree_(&tree) {
    const std::size_t n = tree.node_count();
    first_visit_.assign(n, 0);
    euler_.reserve(2 * n);
    depth_.reserve(2 * n);

    struct Frame {
        std::size_t node;
        std::size_t next_child;
        Pos depth;
    };
    std::vector<Frame> stack{{tree.root(), 0, 0}};
    first_visit_[tree.root()] = 0;
    euler_.push_back(tree.root());
    depth_.push_back(0);
    while (!stack.empty()) {
        auto& top = stack.back();
        const auto& children = tree.node(top.node).children;
        if (top.next_child == children.size()) {
            stack.pop_back();
            if (!stack.empty()) {
                euler_.push_back(stack.back().node);
                depth_.push_back(stack.back().depth);
            }
            continue;
        }
        const std::size_t child = children[top.next_child++];
        const Pos d = top.depth + 1;
        first_visit_[child] = euler_.size();
        euler_.push_back(child);
        depth_.push_back(d);
        stack.push_back({child, 0, d});
    }
    rmq_ = RmqStructure(depth_, Extreme::min);
}

std::size_t LcaStructure::lca(std::size_t a, std::size_t b) const {
    if (a >= first_visit_.size() || b >= first_visit_.size()) throw ValidationError("LCA of a node outside the tree");
    std::size_t lo = first_visit_[a];
    std::size_t hi = first_visit_[b];
    if (lo > hi) std::swap(lo, hi);
    return euler_[rmq_.query(depth_, lo, hi)];
}

std::size_t LcaStructure::subtree_for_range(std::size_t first, std::size_t last) const {
    if (first > last) throw ValidationError("genome range first > last");
    return lca(tree_->leaf(first), tree_->leaf(last));
}

}  // namespace katka
