#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "uict/offspring.hpp"
#include "uict/rng.hpp"
#include "uict/tree.hpp"
#include "uict/triangulation.hpp"

namespace uict {

// Half-line multigraph: L_k parallel edges join vertex k to vertex k + 1.
struct ReducedGraph {
    std::vector<std::uint64_t> multiplicities;

    std::size_t length() const noexcept { return multiplicities.size(); }
    std::uint64_t operator[](std::size_t k) const { return multiplicities[k]; }
    // Degree of vertex k (L_0 at the root).
    std::uint64_t degree(std::size_t k) const {
        return (k > 0 ? multiplicities[k - 1] : 0) + (k < multiplicities.size() ? multiplicities[k] : 0);
    }
    bool operator==(const ReducedGraph&) const = default;
};

enum class Ensemble { gw, kesten, uict, fixed_area, R, Rprime };

Ensemble parse_ensemble(std::string_view name);
std::string_view ensemble_name(Ensemble e);

// Height-H window of the uniform infinite causal triangulation (top level H).
CausalTriangulation sample_uict(std::uint32_t height, const OffspringSampler& sampler, Rng& rng);

// |S_0|..|S_H| of the same window, grown lazily without building the graph.
std::vector<std::uint64_t> sample_uict_level_sizes(std::uint32_t height, const OffspringSampler& sampler, Rng& rng);

// Triangulation of area 2N from the size-conditioned tree law.
CausalTriangulation sample_ct_fixed_area(std::uint64_t n, const OffspringDistribution& dist, Rng& rng);

// Collapse every cycle S_k to a point: L_0 = |S_1|, L_k = |S_k| + |S_{k+1}|.
ReducedGraph gamma_R(const CausalTriangulation& ct);
ReducedGraph gamma_R_from_levels(const std::vector<std::uint64_t>& level_sizes);

// Keep only tree edges: L_k = |D_{k+2}|.
ReducedGraph gamma_Rprime(const PlanarTree& tree);
ReducedGraph gamma_Rprime_from_levels(const std::vector<std::uint64_t>& tree_levels);

// Length-H samples of the two reduced ensembles.
ReducedGraph sample_reduced_R(std::uint32_t length, const OffspringSampler& sampler, Rng& rng);
ReducedGraph sample_reduced_Rprime(std::uint32_t length, const OffspringSampler& sampler, Rng& rng);

// Exact tail probabilities of slice sizes at level n >= 2 for the uniform
// ensembles. For R and uict this is P(|S_{n-1}| + |S_n| > K); for Rprime it
// is P(|D_n| > K).
double slice_tail_prob(Ensemble ensemble, std::uint32_t n, std::uint64_t k);

void write_reduced(std::ostream& out, const ReducedGraph& rg);
ReducedGraph read_reduced(std::istream& in);

}  // namespace uict
