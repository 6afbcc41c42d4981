#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uict/offspring.hpp"
#include "uict/rng.hpp"
#include "uict/tree.hpp"

namespace uict {

inline constexpr std::uint64_t default_node_cap = 100'000'000;

// Finite Galton-Watson tree: the root's child first, then children depth-first.
// Throws NumericalGuardError when more than node_cap vertices are generated.
PlanarTree sample_gw_tree(const OffspringSampler& sampler, Rng& rng, std::uint64_t node_cap = default_node_cap);

// Same as sample_gw_tree but reports a cap overflow as nullopt.
std::optional<PlanarTree> try_sample_gw_tree(const OffspringSampler& sampler, Rng& rng,
                                             std::uint64_t node_cap = default_node_cap);

// Level sizes |D_0|..|D_depth| of a GW tree without building it.
std::vector<std::uint64_t> sample_gw_levels(const OffspringSampler& sampler, std::uint32_t depth, Rng& rng);

// Tree with exactly N edges drawn from the size-conditioned measure.
PlanarTree sample_gw_tree_conditioned(const OffspringDistribution& dist, std::uint64_t n_edges, Rng& rng);

// Plain rejection sampler for the same law; slow, meant as a reference.
PlanarTree sample_gw_tree_conditioned_rejection(const OffspringSampler& sampler, std::uint64_t n_edges, Rng& rng,
                                                std::uint64_t max_attempts = 100'000'000);

// Height-H window of the single-spine (Kesten) tree.
SpineTree sample_kesten_tree(const OffspringSampler& sampler, std::uint32_t height, Rng& rng);

// Level sizes |D_0|..|D_height| of the Kesten tree, grown lazily.
std::vector<std::uint64_t> sample_kesten_levels(const OffspringSampler& sampler, std::uint32_t height, Rng& rng);

// Every rooted planar tree with N edges, in lexicographic preorder.
std::vector<PlanarTree> enumerate_trees(std::uint32_t n_edges);

}  // namespace uict
