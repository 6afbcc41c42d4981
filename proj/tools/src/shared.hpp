#pragma once

#include <functional>
#include <string>
#include <vector>

#include "context.hpp"
#include "uict/ensembles.hpp"
#include "uict/graph.hpp"
#include "uict/walk.hpp"

namespace uict::cli {

// Named small graphs: path2, path7, cycle3, cycle8, ct_small, tree_small.
AdjacencyGraph make_fixture(const std::string& name);
std::vector<std::string> fixture_names();

// Walk graph read from a CTRI, PTREE or RGRAPH file (by its header).
AdjacencyGraph load_walk_graph(const std::string& path);
ReducedGraph load_reduced(const std::string& path);

// One sampled walk graph of the ensemble (gw, kesten or uict).
AdjacencyGraph sample_walk_graph(Ensemble ensemble, std::uint32_t height, const OffspringSampler& sampler, Rng& rng);

// Ensemble-averaged return statistics over graphs with an equal number of
// walkers each. Counts are integers, so the totals do not depend on how the
// graphs were spread over threads.
struct PooledReturns {
    ReturnStats pooled;
    std::vector<double> p_se;   // across-graph standard error of p(t)
    std::vector<double> p0_se;
    std::uint64_t graphs = 0;
};

PooledReturns pooled_returns(std::uint64_t graphs, std::uint64_t t_max, std::uint64_t walkers, Context& ctx,
                             const std::function<AdjacencyGraph(Rng&)>& make_graph);

// Adds "returns" and "fit" tables and checks the censored fraction.
SpectralFit report_returns(const PooledReturns& r, std::uint64_t fit_min, double censor_threshold, Context& ctx,
                           const std::string& prefix);

}  // namespace uict::cli
