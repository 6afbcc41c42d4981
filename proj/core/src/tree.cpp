#include "uict/tree.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "uict/error.hpp"

namespace uict {

PlanarTree PlanarTree::from_level_order(std::vector<std::uint32_t> child_counts,
                                        std::optional<std::uint32_t> truncation_height) {
    if (child_counts.empty() || child_counts[0] != 1)
        throw FormatError("tree root must have exactly one child");
    PlanarTree t;
    const std::uint64_t n = child_counts.size();
    t.child_count_ = std::move(child_counts);
    t.first_child_.resize(n);
    t.parent_.resize(n);
    t.parent_[0] = std::numeric_limits<std::uint64_t>::max();
    t.level_offsets_ = {0, 1};

    std::uint64_t next = 1;
    std::uint64_t level_end = 1;
    for (std::uint64_t v = 0; v < n; ++v) {
        if (v == level_end) {
            level_end = next;
            t.level_offsets_.push_back(level_end);
        }
        t.first_child_[v] = next;
        const std::uint32_t c = t.child_count_[v];
        if (next + c > n) throw FormatError("child counts exceed the vertex count");
        for (std::uint32_t j = 0; j < c; ++j) t.parent_[next + j] = v;
        next += c;
    }
    if (next != n) throw FormatError("child counts do not account for every vertex");
    // The last level opened by the loop may be empty; close it properly.
    if (t.level_offsets_.back() != n) t.level_offsets_.push_back(n);

    if (truncation_height) {
        if (*truncation_height != t.height())
            throw FormatError("truncation height must equal the deepest level");
        for (std::uint64_t v = t.level_offsets_[*truncation_height]; v < n; ++v)
            if (t.child_count_[v] != 0) throw FormatError("vertices at the truncation height carry no children");
        t.truncation_ = truncation_height;
    }
    return t;
}

PlanarTree PlanarTree::from_preorder_counts(std::span<const std::uint32_t> counts,
                                            std::optional<std::uint32_t> truncation_height) {
    const std::uint64_t n = counts.size();
    if (n == 0) throw FormatError("tree needs at least one edge");
    // Lukasiewicz check: open slots stay positive until the final vertex.
    std::int64_t open = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (open <= 0) throw FormatError("preorder counts close the tree early");
        open += static_cast<std::int64_t>(counts[i]) - 1;
    }
    if (open != 0) throw FormatError("preorder child counts must sum to N - 1");

    // Preorder ids: 0 is the root, i + 1 is counts[i].
    std::vector<std::uint64_t> next_sibling(n + 1, 0), last_child(n + 1, 0), first(n + 1, 0);
    std::vector<std::pair<std::uint64_t, std::uint32_t>> stack;  // vertex, children still to attach
    stack.reserve(64);
    stack.emplace_back(0, 1);
    for (std::uint64_t i = 1; i <= n; ++i) {
        while (stack.back().second == 0) stack.pop_back();
        auto& [p, remaining] = stack.back();
        --remaining;
        if (last_child[p] == 0) first[p] = i;
        else next_sibling[last_child[p]] = i;
        last_child[p] = i;
        if (counts[i - 1] > 0) stack.emplace_back(i, counts[i - 1]);
    }

    std::vector<std::uint32_t> level_counts;
    level_counts.reserve(n + 1);
    std::vector<std::uint64_t> queue;
    queue.reserve(n + 1);
    queue.push_back(0);
    for (std::uint64_t head = 0; head < queue.size(); ++head) {
        const std::uint64_t v = queue[head];
        level_counts.push_back(v == 0 ? 1u : counts[v - 1]);
        for (std::uint64_t c = first[v]; c != 0; c = next_sibling[c]) queue.push_back(c);
    }
    return from_level_order(std::move(level_counts), truncation_height);
}

std::uint32_t PlanarTree::depth(std::uint64_t v) const {
    if (v >= vertex_count()) throw DomainError("vertex id out of range");
    const auto it = std::upper_bound(level_offsets_.begin(), level_offsets_.end(), v);
    return static_cast<std::uint32_t>(it - level_offsets_.begin() - 1);
}

std::vector<std::uint32_t> PlanarTree::preorder_counts() const {
    std::vector<std::uint32_t> out;
    out.reserve(edge_count());
    std::vector<std::uint64_t> stack{first_child_[0]};
    while (!stack.empty()) {
        const std::uint64_t v = stack.back();
        stack.pop_back();
        out.push_back(child_count_[v]);
        for (std::uint32_t j = child_count_[v]; j-- > 0;) stack.push_back(first_child_[v] + j);
    }
    return out;
}

TreeStats tree_stats(const PlanarTree& tree) {
    TreeStats s;
    s.height = tree.height();
    s.level_sizes.resize(s.height + 1);
    for (std::uint32_t k = 0; k <= s.height; ++k) s.level_sizes[k] = tree.level_size(k);
    s.ball_sizes.resize(s.height + 1);
    for (std::uint32_t r = 0; r <= s.height; ++r) s.ball_sizes[r] = ball_edges_from_levels(s.level_sizes, r);
    return s;
}

std::uint64_t ball_edges_from_levels(std::span<const std::uint64_t> level_sizes, std::uint32_t radius) {
    std::uint64_t total = 0;
    for (std::uint32_t k = 1; k <= radius && k < level_sizes.size(); ++k) total += level_sizes[k];
    return total;
}

void write_tree(std::ostream& out, const PlanarTree& tree) {
    out << "PTREE 1\n" << tree.edge_count();
    if (tree.truncated()) out << " truncated " << *tree.truncation_height();
    out << '\n';
    const auto counts = tree.preorder_counts();
    for (std::size_t i = 0; i < counts.size(); ++i) out << (i ? " " : "") << counts[i];
    out << '\n';
}

namespace {

// Next line that is neither blank nor a '#' comment.
bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        return true;
    }
    return false;
}

}  // namespace

PlanarTree read_tree(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) throw FormatError("empty tree stream");
    {
        std::istringstream head(line);
        std::string magic;
        int version = 0;
        if (!(head >> magic >> version) || magic != "PTREE" || version != 1)
            throw FormatError("expected 'PTREE 1' header");
    }
    if (!next_content_line(in, line)) throw FormatError("missing edge count");
    std::uint64_t n = 0;
    std::optional<std::uint32_t> trunc;
    {
        std::istringstream head(line);
        if (!(head >> n) || n == 0) throw FormatError("bad edge count");
        std::string word;
        if (head >> word) {
            std::uint32_t h = 0;
            if (word != "truncated" || !(head >> h)) throw FormatError("bad edge-count line");
            trunc = h;
        }
    }
    std::vector<std::uint32_t> counts;
    counts.reserve(n);
    while (counts.size() < n && next_content_line(in, line)) {
        std::istringstream body(line);
        long long c = 0;
        while (body >> c) {
            if (c < 0) throw FormatError("negative child count");
            counts.push_back(static_cast<std::uint32_t>(c));
        }
        if (!body.eof()) throw FormatError("non-numeric token in child counts");
    }
    if (counts.size() != n) throw FormatError("child count list length differs from N");
    return PlanarTree::from_preorder_counts(counts, trunc);
}

std::string serialize_tree(const PlanarTree& tree) {
    std::ostringstream os;
    write_tree(os, tree);
    return os.str();
}

PlanarTree deserialize_tree(const std::string& text) {
    std::istringstream is(text);
    return read_tree(is);
}

}  // namespace uict
