#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uict/graph.hpp"
#include "uict/tree.hpp"

namespace uict {

// Causal triangulation stored level by level.
//
// Level k (k = 0..top()) is the cycle S_k; S_0 is the root vertex. Vertices
// get global ids level by level in cyclic order, position 0 of S_1 being the
// endpoint of the marked root edge. Every vertex below the top carries a
// forward degree f: vertex i of S_k (k >= 1) reaches the f_i consecutive
// positions starting at sum_{j<i}(f_j - 1) on S_{k+1}, cyclically. The root
// reaches each vertex of S_1 once. A finite triangulation is `decorated`:
// its top cycle is capped by a fan of triangles to one extra apex.
class CausalTriangulation {
public:
    CausalTriangulation() = default;

    // level_sizes = |S_0| = 1, |S_1|, ..., |S_K|; forward[k] lists the
    // forward degrees of S_k for k = 0..K-1.
    static CausalTriangulation from_levels(std::vector<std::uint64_t> level_sizes,
                                           const std::vector<std::vector<std::uint32_t>>& forward, bool decorated);

    std::uint32_t top() const noexcept { return static_cast<std::uint32_t>(level_sizes_.size() - 1); }
    bool decorated() const noexcept { return decorated_; }
    std::uint64_t level_size(std::uint32_t k) const { return level_sizes_.at(k); }
    const std::vector<std::uint64_t>& level_sizes() const noexcept { return level_sizes_; }
    std::uint64_t level_begin(std::uint32_t k) const { return level_offsets_[k]; }
    std::uint64_t vertex_count() const noexcept { return level_offsets_.back(); }

    std::span<const std::uint32_t> forward_degrees(std::uint32_t k) const;

    // Number of triangles of the slice between S_k and S_{k+1}.
    std::uint64_t slice_size(std::uint32_t k) const;

    // Position on S_{k+1} of the first forward edge of vertex i of S_k.
    std::uint64_t forward_start(std::uint32_t k, std::uint64_t i) const;

    // The marked root edge: root to position 0 of S_1.
    std::uint64_t marked_edge_target() const noexcept { return level_offsets_.size() > 1 ? level_offsets_[1] : 0; }

    bool operator==(const CausalTriangulation& o) const {
        return level_sizes_ == o.level_sizes_ && forward_ == o.forward_ && decorated_ == o.decorated_;
    }

private:
    std::vector<std::uint64_t> level_sizes_{1};
    std::vector<std::uint64_t> level_offsets_{0, 1};
    std::vector<std::uint32_t> forward_;        // vertices of levels 0..K-1, by global id
    std::vector<std::uint64_t> forward_start_;  // cyclic start position of each fan
    bool decorated_ = false;
};

// Tree image: each vertex keeps all forward edges except its clockwise-last
// one; a new root is attached below S_0.
PlanarTree beta(const CausalTriangulation& ct);

// Inverse map. Finite trees of height h give a triangulation with top h - 1,
// decorated when requested; a truncated tree of height H gives an
// undecorated window with top H - 1.
CausalTriangulation beta_inv(const PlanarTree& tree, bool decorate = true);

// Area 2 * sum_{k>=1} |S_k| of a finite (decorated) triangulation.
std::uint64_t ct_area(const CausalTriangulation& ct);

// Triangles actually present, including the decoration fan if any.
std::uint64_t triangle_count(const CausalTriangulation& ct);

// Triangles of the slice between S_k and S_{k+1} (k = top() means the
// decoration fan) as global vertex-id triples.
std::vector<std::array<std::uint64_t, 3>> slice_triangles(const CausalTriangulation& ct, std::uint32_t k);

// Edges spanned by the vertices within distance R of the root.
std::uint64_t ct_ball_edges(const CausalTriangulation& ct, std::uint32_t radius);
std::uint64_t ct_ball_edges_from_levels(std::span<const std::uint64_t> level_sizes, std::uint32_t radius);

// Walk substrate. Undecorated windows mark S_top as the boundary.
AdjacencyGraph ct_to_adjacency(const CausalTriangulation& ct, bool include_decoration = false);
AdjacencyGraph tree_to_adjacency(const PlanarTree& tree);

// All triangulations of area 2N via the tree bijection (N <= 12).
std::vector<CausalTriangulation> enumerate_cts(std::uint32_t n);

// Same set built slice by slice from level compositions, without trees.
std::vector<CausalTriangulation> enumerate_cts_by_slices(std::uint32_t n);

void write_ct(std::ostream& out, const CausalTriangulation& ct);
CausalTriangulation read_ct(std::istream& in);
std::string serialize_ct(const CausalTriangulation& ct);
CausalTriangulation deserialize_ct(const std::string& text);

}  // namespace uict
