#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uict/ensembles.hpp"
#include "uict/walk.hpp"

namespace uict {

enum class FitMode { mean, median, per_graph };

struct HausdorffFit {
    double d_h = 0;
    double std_err = 0;
    std::vector<double> per_graph;  // individual slopes (per_graph mode)
    std::size_t n_samples = 0;
};

// Growth exponent of |B_R|. volumes[i][j] is the ball size of graph i at
// radii[j]. The radius grid must span at least 1.5 decades.
HausdorffFit hausdorff_fit(const std::vector<std::vector<double>>& volumes, std::span<const double> radii,
                           FitMode mode);

struct EnvelopeRow {
    double lambda = 0;
    double p_below = 0;  // P(|B_R| < lambda R^2)
    double p_above = 0;  // P(|B_R| > lambda R^2 log R)
    double p_above_plain = 0;  // P(|B_R| > lambda R^2)
};

std::vector<EnvelopeRow> envelope_check(std::span<const double> volumes, double radius, std::span<const double> lambdas);

// The x grid 2^{-j}, j = j_min..j_max.
std::vector<double> dyadic_grid(int j_min, int j_max);

struct GraphSpectral {
    SpectralFit fit;
    std::vector<double> xs;
    std::vector<double> qs;       // bracket midpoints at the accepted grid points
    std::vector<double> widths;   // relative bracket widths
};

// Per-graph d_s on a reduced graph from the exact birth-death recursion,
// keeping the grid points whose bracket is narrower than max_rel_width.
GraphSpectral reduced_spectral(const ReducedGraph& rg, std::span<const double> xs, double max_rel_width = 0.02);

struct SpectralSummary {
    double median_d_s = 0;
    double median_se = 0;
    double mean_d_s = 0;
    double mean_log_q_slope = 0;  // slope of log <Q> against |log x|
    double mean_log_q_slope_se = 0;
    std::size_t graphs = 0;
};

SpectralSummary summarize_spectral(const std::vector<GraphSpectral>& per_graph);

}  // namespace uict
