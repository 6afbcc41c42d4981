#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace uict {

// Undirected multigraph in compressed adjacency form. A loop at v appears
// twice in v's neighbor list, so it contributes 2 to the degree and a walk
// step along it stays put.
class AdjacencyGraph {
public:
    using Edge = std::pair<std::uint32_t, std::uint32_t>;

    AdjacencyGraph() = default;

    // `levels` gives each vertex's distance class from the root (used for
    // censoring and ball statistics); vertices on `boundary_level` are the
    // edge of a truncated window.
    static AdjacencyGraph from_edges(std::uint32_t vertex_count, std::span<const Edge> edges,
                                     std::vector<std::uint32_t> levels = {},
                                     std::optional<std::uint32_t> boundary_level = std::nullopt,
                                     std::uint32_t root = 0);

    std::uint32_t vertex_count() const noexcept { return static_cast<std::uint32_t>(offsets_.size() - 1); }
    std::uint64_t edge_count() const noexcept { return neighbors_.size() / 2; }
    std::uint32_t degree(std::uint32_t v) const { return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]); }
    std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::uint32_t root() const noexcept { return root_; }
    std::uint32_t level(std::uint32_t v) const { return levels_.empty() ? 0 : levels_[v]; }
    std::optional<std::uint32_t> boundary_level() const noexcept { return boundary_; }
    bool on_boundary(std::uint32_t v) const { return boundary_ && level(v) >= *boundary_; }

private:
    std::vector<std::uint64_t> offsets_{0};
    std::vector<std::uint32_t> neighbors_;
    std::vector<std::uint32_t> levels_;
    std::optional<std::uint32_t> boundary_;
    std::uint32_t root_ = 0;
};

// Handy fixtures: a path on n vertices rooted at one end, and an n-cycle.
AdjacencyGraph make_path_graph(std::uint32_t n);
AdjacencyGraph make_cycle_graph(std::uint32_t n);

}  // namespace uict
