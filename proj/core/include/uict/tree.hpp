#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uict {

// Rooted ordered tree whose root has exactly one child.
//
// Vertices are stored in breadth-first canonical order: vertex 0 is the
// root, each level is contiguous and listed left to right, and the children
// of a vertex form a contiguous block. A tree may be a height window of an
// infinite tree; then the vertices at depth truncation_height() exist but
// their children were never generated.
class PlanarTree {
public:
    PlanarTree() = default;

    // child_counts lists the number of children of every vertex in BFS order,
    // starting with the root (which must have exactly one child).
    static PlanarTree from_level_order(std::vector<std::uint32_t> child_counts,
                                       std::optional<std::uint32_t> truncation_height = std::nullopt);

    // Child counts of the non-root vertices in depth-first preorder, starting
    // from the root's unique child.
    static PlanarTree from_preorder_counts(std::span<const std::uint32_t> counts,
                                           std::optional<std::uint32_t> truncation_height = std::nullopt);

    std::uint64_t vertex_count() const noexcept { return child_count_.size(); }
    std::uint64_t edge_count() const noexcept { return child_count_.empty() ? 0 : child_count_.size() - 1; }
    std::uint32_t height() const noexcept {
        return level_offsets_.size() < 2 ? 0 : static_cast<std::uint32_t>(level_offsets_.size() - 2);
    }
    std::optional<std::uint32_t> truncation_height() const noexcept { return truncation_; }
    bool truncated() const noexcept { return truncation_.has_value(); }

    std::uint32_t child_count(std::uint64_t v) const { return child_count_[v]; }
    std::uint64_t first_child(std::uint64_t v) const { return first_child_[v]; }
    std::uint64_t parent(std::uint64_t v) const { return parent_[v]; }
    // Vertex degree: children plus the edge to the parent.
    std::uint32_t degree(std::uint64_t v) const { return child_count_[v] + (v == 0 ? 0u : 1u); }

    // First vertex of level k; level k is [level_begin(k), level_begin(k+1)).
    std::uint64_t level_begin(std::uint32_t k) const { return level_offsets_[k]; }
    std::uint64_t level_size(std::uint32_t k) const {
        return k > height() ? 0 : level_offsets_[k + 1] - level_offsets_[k];
    }
    std::uint32_t depth(std::uint64_t v) const;

    const std::vector<std::uint32_t>& level_order_counts() const noexcept { return child_count_; }
    std::vector<std::uint32_t> preorder_counts() const;

    bool operator==(const PlanarTree& other) const {
        return child_count_ == other.child_count_ && truncation_ == other.truncation_;
    }

private:
    std::vector<std::uint32_t> child_count_;
    std::vector<std::uint64_t> first_child_;
    std::vector<std::uint64_t> parent_;
    std::vector<std::uint64_t> level_offsets_;
    std::optional<std::uint32_t> truncation_;
};

// A height-H window of a single-spine tree. spine[k] is the spine vertex at
// depth k (k = 0..H); spine_slot[k] is the position of spine[k+1] among the
// children of spine[k].
struct SpineTree {
    PlanarTree tree;
    std::vector<std::uint64_t> spine;
    std::vector<std::uint32_t> spine_slot;
    std::uint32_t height_cap = 0;

    // Number of finite branches hanging off spine vertex k >= 1.
    std::uint32_t branch_count(std::uint32_t k) const { return tree.child_count(spine[k]) - 1; }
};

struct TreeStats {
    std::uint32_t height = 0;
    std::vector<std::uint64_t> level_sizes;  // |D_k|, k = 0..height
    std::vector<std::uint64_t> ball_sizes;   // edges of B_R, R = 0..height
};

TreeStats tree_stats(const PlanarTree& tree);

// Edges spanned by the vertices within distance R of the root, from level sizes.
std::uint64_t ball_edges_from_levels(std::span<const std::uint64_t> level_sizes, std::uint32_t radius);

void write_tree(std::ostream& out, const PlanarTree& tree);
PlanarTree read_tree(std::istream& in);
std::string serialize_tree(const PlanarTree& tree);
PlanarTree deserialize_tree(const std::string& text);

}  // namespace uict
