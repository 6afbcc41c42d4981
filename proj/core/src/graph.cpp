#include "uict/graph.hpp"

#include "uict/error.hpp"

namespace uict {

AdjacencyGraph AdjacencyGraph::from_edges(std::uint32_t vertex_count, std::span<const Edge> edges,
                                          std::vector<std::uint32_t> levels,
                                          std::optional<std::uint32_t> boundary_level, std::uint32_t root) {
    if (vertex_count == 0) throw DomainError("graph needs at least one vertex");
    if (root >= vertex_count) throw DomainError("root out of range");
    if (!levels.empty() && levels.size() != vertex_count) throw DomainError("level list has the wrong length");
    AdjacencyGraph g;
    g.offsets_.assign(static_cast<std::size_t>(vertex_count) + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u >= vertex_count || v >= vertex_count) throw DomainError("edge endpoint out of range");
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (std::uint32_t v = 0; v < vertex_count; ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.neighbors_.resize(g.offsets_.back());
    std::vector<std::uint64_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        g.neighbors_[fill[u]++] = v;
        g.neighbors_[fill[v]++] = u;
    }
    g.levels_ = std::move(levels);
    g.boundary_ = boundary_level;
    g.root_ = root;
    return g;
}

AdjacencyGraph make_path_graph(std::uint32_t n) {
    std::vector<AdjacencyGraph::Edge> edges;
    std::vector<std::uint32_t> levels(n);
    for (std::uint32_t i = 0; i < n; ++i) levels[i] = i;
    for (std::uint32_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return AdjacencyGraph::from_edges(n, edges, std::move(levels));
}

AdjacencyGraph make_cycle_graph(std::uint32_t n) {
    std::vector<AdjacencyGraph::Edge> edges;
    for (std::uint32_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return AdjacencyGraph::from_edges(n, edges);
}

}  // namespace uict
