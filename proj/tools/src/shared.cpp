#include "shared.hpp"

#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "uict/error.hpp"
#include "uict/tree.hpp"
#include "uict/tree_sampling.hpp"
#include "uict/triangulation.hpp"

namespace uict::cli {

std::vector<std::string> fixture_names() { return {"path2", "path7", "cycle3", "cycle8", "ct_small", "tree_small"}; }

AdjacencyGraph make_fixture(const std::string& name) {
    if (name == "path2") return make_path_graph(2);
    if (name == "path7") return make_path_graph(7);
    if (name == "cycle3") return make_cycle_graph(3);
    if (name == "cycle8") return make_cycle_graph(8);
    const auto ct = CausalTriangulation::from_levels({1, 3, 4, 2}, {{3}, {3, 1, 3}, {2, 1, 1, 2}}, true);
    if (name == "ct_small") return ct_to_adjacency(ct, true);
    if (name == "tree_small") return tree_to_adjacency(beta(ct));
    throw DomainError("unknown fixture '" + name + "'");
}

namespace {

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string magic(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        return line.substr(pos, line.find_first_of(" \t\r", pos) - pos);
    }
    return {};
}

}  // namespace

AdjacencyGraph load_walk_graph(const std::string& path) {
    const auto text = read_all(path);
    const auto kind = magic(text);
    std::istringstream is(text);
    if (kind == "CTRI") {
        const auto ct = read_ct(is);
        return ct_to_adjacency(ct, ct.decorated());
    }
    if (kind == "PTREE") return tree_to_adjacency(read_tree(is));
    if (kind == "RGRAPH") return reduced_to_adjacency(read_reduced(is));
    throw FormatError("unrecognised graph file " + path);
}

ReducedGraph load_reduced(const std::string& path) {
    std::istringstream is(read_all(path));
    return read_reduced(is);
}

AdjacencyGraph sample_walk_graph(Ensemble ensemble, std::uint32_t height, const OffspringSampler& sampler, Rng& rng) {
    switch (ensemble) {
        case Ensemble::gw: return tree_to_adjacency(sample_gw_tree(sampler, rng));
        case Ensemble::kesten: return tree_to_adjacency(sample_kesten_tree(sampler, height, rng).tree);
        case Ensemble::uict: return ct_to_adjacency(sample_uict(height, sampler, rng), false);
        default: throw DomainError("walks on sampled graphs support gw, kesten and uict");
    }
}

PooledReturns pooled_returns(std::uint64_t graphs, std::uint64_t t_max, std::uint64_t walkers, Context& ctx,
                             const std::function<AdjacencyGraph(Rng&)>& make_graph) {
    if (graphs == 0 || walkers == 0) throw DomainError("need at least one graph and one walker");
    if (t_max == 0) throw DomainError("t-max must be positive");
    PooledReturns out;
    out.graphs = graphs;
    out.pooled.t_max = t_max;
    out.pooled.counts.assign(t_max + 1, 0);
    out.pooled.first_return_counts.assign(t_max + 1, 0);
    std::vector<double> sq(t_max + 1, 0.0), sq0(t_max + 1, 0.0);
    std::mutex lock;
    parallel_for(graphs, ctx.common.threads, [&](std::size_t g) {
        Rng rng = ctx.stream(g);
        const auto graph = make_graph(rng);
        const auto s = simulate_walks(graph, t_max, walkers, rng.split(1));
        std::lock_guard guard(lock);
        out.pooled.merge(s);
        // Squared counts are integers below 2^53, so these sums are exact
        // and independent of the merge order.
        for (std::uint64_t t = 0; t <= t_max; ++t) {
            sq[t] += static_cast<double>(s.counts[t]) * static_cast<double>(s.counts[t]);
            sq0[t] += static_cast<double>(s.first_return_counts[t]) * static_cast<double>(s.first_return_counts[t]);
        }
    });
    out.pooled.counts[0] = graphs * walkers;
    const double w = static_cast<double>(walkers), gcount = static_cast<double>(graphs);
    out.p_se.assign(t_max + 1, 0.0);
    out.p0_se.assign(t_max + 1, 0.0);
    for (std::uint64_t t = 1; t <= t_max; ++t) {
        if (graphs > 1) {
            const double m = out.pooled.p(t), m0 = out.pooled.p0(t);
            const double v = std::max(0.0, sq[t] / (w * w) / gcount - m * m) * gcount / (gcount - 1);
            const double v0 = std::max(0.0, sq0[t] / (w * w) / gcount - m0 * m0) * gcount / (gcount - 1);
            out.p_se[t] = std::sqrt(v / gcount);
            out.p0_se[t] = std::sqrt(v0 / gcount);
        } else {
            out.p_se[t] = out.pooled.p_se(t);
            out.p0_se[t] = out.pooled.p0_se(t);
        }
    }
    return out;
}

SpectralFit report_returns(const PooledReturns& r, std::uint64_t fit_min, double censor_threshold, Context& ctx,
                           const std::string& prefix) {
    const auto& s = r.pooled;
    auto& returns = ctx.add_table(prefix + "returns", {"t", "p", "p_se", "p0", "p0_se"});
    std::vector<double> p(s.t_max + 1);
    for (std::uint64_t t = 0; t <= s.t_max; ++t) {
        p[t] = s.p(t);
        returns.add_row({static_cast<std::int64_t>(t), p[t], r.p_se[t], s.p0(t), r.p0_se[t]});
    }
    auto& fit_table = ctx.add_table(prefix + "fit", {"t_min", "t_max", "d_s", "std_err", "points", "graphs",
                                                     "walkers", "censored_fraction"});
    check_censoring(s, censor_threshold);
    const auto fit = spectral_from_returns(p, fit_min, s.t_max);
    fit_table.add_row({static_cast<std::int64_t>(fit_min), static_cast<std::int64_t>(s.t_max), fit.d_s, fit.std_err,
                       static_cast<std::int64_t>(fit.points), static_cast<std::int64_t>(r.graphs),
                       static_cast<std::int64_t>(s.n_walkers), s.censored_fraction()});
    return fit;
}

}  // namespace uict::cli
