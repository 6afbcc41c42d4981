#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uict/ensembles.hpp"
#include "uict/triangulation.hpp"

namespace uict {

// sum_{k<K} 1/L_k: the resistance from the root to vertex K.
double resistance_reduced(const ReducedGraph& rg, std::size_t k);

// sum_{k<K} 1/|Sigma_k| over the level-separating cutsets.
double nash_williams_lower(const CausalTriangulation& ct, std::uint32_t k);

enum class BoundaryMode {
    added_top,  // join every vertex of S_K to one new vertex by a unit edge
    collapsed,  // short all of S_K to a single vertex
};

struct ResistanceResult {
    double resistance = 0;
    double current = 0;          // current out of the root at unit potential difference
    double energy = 0;           // sum over edges of conductance * (potential drop)^2
    double energy_residual = 0;  // |energy - current| / current
    std::size_t unknowns = 0;
    bool direct = true;          // sparse LDLT (true) or conjugate gradients
};

inline constexpr std::size_t default_direct_limit = 100'000;

// Unit-resistor network on the ball of radius K (loops dropped). Solved
// directly up to direct_limit unknowns, iteratively above with relative
// residual tol.
ResistanceResult effective_resistance(const CausalTriangulation& ct, std::uint32_t k, double tol = 1e-10,
                                      BoundaryMode mode = BoundaryMode::added_top,
                                      std::size_t direct_limit = default_direct_limit);

struct ResistanceRow {
    std::uint32_t k = 0;
    double nw_lower = 0;
    double exact = 0;
    double ratio = 0;  // exact / nw_lower
    double energy_residual = 0;
};

std::vector<ResistanceRow> resistance_profile(const CausalTriangulation& ct, std::span<const std::uint32_t> ks,
                                              double tol = 1e-10, BoundaryMode mode = BoundaryMode::added_top);

}  // namespace uict
