#include <algorithm>
#include <cmath>
#include <limits>

#include "context.hpp"
#include "shared.hpp"
#include "uict/error.hpp"

namespace uict::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

AdjacencyGraph single_graph(const WalkOptions& o) {
    if (!o.fixture.empty()) return make_fixture(o.fixture);
    if (!o.graph.empty()) return load_walk_graph(o.graph);
    throw DomainError("give --fixture or --graph");
}

// Horizon at which the weights (1-x)^{t/2} drop below 1e-14.
std::uint64_t series_horizon(double x) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("x must lie in (0, 1)");
    const double t = 2.0 * std::log(1e-14) / std::log1p(-x) + 2.0;
    if (t > 5e6) throw DomainError("x too small for an exact series");
    return static_cast<std::uint64_t>(t);
}

void exact_mode(const WalkOptions& o, Context& ctx) {
    const auto g = single_graph(o);
    const auto xs = parse_real_list(o.x.empty() ? "0.05,0.1,0.2,0.5" : o.x);
    std::uint64_t horizon = o.t_max;
    for (const double x : xs) horizon = std::max(horizon, series_horizon(x));
    const auto ex = exact_return_probs(g, horizon);
    auto& returns = ctx.add_table("returns", {"t", "p", "p0"});
    for (std::uint64_t t = 0; t <= o.t_max; ++t) returns.add_row({static_cast<std::int64_t>(t), ex.p[t], ex.p0[t]});
    auto& series = ctx.add_table("series", {"x", "q", "p", "identity_defect", "q_resolvent"});
    for (const double x : xs) {
        const auto s = q_eval(ex, x);
        series.add_row({x, s.q, s.p, std::abs(s.q * (1.0 - s.p) - 1.0), q_resolvent(g, x)});
    }
}

void mc_mode(const WalkOptions& o, Context& ctx) {
    PooledReturns r;
    if (!o.ensemble.empty()) {
        const auto ensemble = parse_ensemble(o.ensemble);
        const OffspringSampler sampler(ctx.distribution());
        r = pooled_returns(o.graphs, o.t_max, o.walkers, ctx,
                           [&](Rng& rng) { return sample_walk_graph(ensemble, o.height, sampler, rng); });
    } else {
        const auto g = single_graph(o);
        r = pooled_returns(1, o.t_max, o.walkers, ctx, [&](Rng&) { return g; });
    }
    if (!o.x.empty()) {
        auto& series = ctx.add_table("series", {"x", "q", "q_se", "p", "p_se"});
        for (const double x : parse_real_list(o.x)) {
            const auto s = q_eval(r.pooled, x);
            series.add_row({x, s.q, s.q_se, s.p, s.p_se});
        }
    }
    report_returns(r, o.fit_min, o.censor_threshold, ctx, "");
}

// Conductance sequences for the bracket and chain modes, one per graph.
std::vector<ReducedGraph> conductances(const WalkOptions& o, Context& ctx, bool& halfline) {
    halfline = false;
    if (o.fixture == "halfline") {
        halfline = true;
        return {ReducedGraph{std::vector<std::uint64_t>(o.length, 1)}};
    }
    if (!o.fixture.empty()) throw DomainError("bracket modes accept only the halfline fixture");
    if (!o.graph.empty()) return {load_reduced(o.graph)};
    const auto ensemble = parse_ensemble(o.ensemble.empty() ? "R" : o.ensemble);
    if (ensemble != Ensemble::R && ensemble != Ensemble::Rprime)
        throw DomainError("bracket modes need a reduced ensemble (R or Rprime)");
    if (o.length > std::numeric_limits<std::uint32_t>::max()) throw DomainError("length too large");
    const OffspringSampler sampler(ctx.distribution());
    std::vector<ReducedGraph> out(o.graphs);
    parallel_for(o.graphs, ctx.common.threads, [&](std::size_t i) {
        Rng rng = ctx.stream(i);
        const auto len = static_cast<std::uint32_t>(o.length);
        out[i] = ensemble == Ensemble::R ? sample_reduced_R(len, sampler, rng) : sample_reduced_Rprime(len, sampler, rng);
    });
    return out;
}

void bracket_mode(const WalkOptions& o, Context& ctx) {
    bool halfline = false;
    const auto graphs = conductances(o, ctx, halfline);
    const auto upper = o.upper == "certain"   ? UpperBoundary::certain_return
                       : o.upper == "trivial" ? UpperBoundary::trivial_bound
                                              : throw DomainError("upper must be certain or trivial");
    const auto xs = parse_real_list(o.x.empty() ? "0.1,0.01,0.001,0.0001" : o.x);
    auto& t = ctx.add_table("bracket", {"graph", "x", "N", "q_lo", "q_hi", "rel_width", "reference"});
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        const auto& rg = graphs[g];
        if (rg.length() < 2) throw DomainError("reduced graph too short");
        const std::size_t n = o.depth ? o.depth : rg.length() - 1;
        for (const double x : xs) {
            const auto b = bd_q_bracket(rg, x, n, upper);
            t.add_row({static_cast<std::int64_t>(g), x, static_cast<std::int64_t>(n), b.q_lo, b.q_hi,
                       b.relative_width(), halfline ? 1.0 / std::sqrt(x) : nan});
        }
    }
}

void chain_mode(const WalkOptions& o, Context& ctx) {
    bool halfline = false;
    const auto graphs = conductances(o, ctx, halfline);
    const auto xs = parse_real_list(o.x.empty() ? "0.1" : o.x);
    auto& t = ctx.add_table("chain", {"graph", "vertices", "x", "q_engine", "q_resolvent", "q_series", "max_abs_err",
                                      "q_lo", "q_hi", "bracket_contains"});
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        const auto& rg = graphs[g];
        if (rg.length() < 2) throw DomainError("chain needs at least two edges");
        if (rg.length() > 9999) throw DomainError("chain mode is limited to 10^4 vertices");
        const auto adj = reduced_to_adjacency(rg);
        const std::vector<double> L(rg.multiplicities.begin(), rg.multiplicities.end());
        const std::size_t n = rg.length() - 1;
        for (const double x : xs) {
            // Above vertex n sits only the dead-end top vertex, so 1 - P(x; n) = x
            // exactly; the bracket replaces that value by its two extremes.
            const auto eta = eta_recursion_terms(L, x, n, 1.0 - x);
            const double q_bd = 1.0 / (1.0 - eta.p[0]);
            const auto b = bd_q_bracket(L, x, n);
            const double q_lu = q_resolvent(adj, x);
            const double q_ser = q_eval(exact_return_probs(adj, series_horizon(x)), x).q;
            const double err = std::max(std::abs(q_bd - q_lu), std::abs(q_ser - q_lu));
            const bool inside = b.q_lo <= q_lu * (1 + 1e-12) && q_lu <= b.q_hi * (1 + 1e-12);
            t.add_row({static_cast<std::int64_t>(g), static_cast<std::int64_t>(adj.vertex_count()), x, q_bd, q_lu, q_ser,
                       err, b.q_lo, b.q_hi, static_cast<std::int64_t>(inside)});
        }
    }
}

}  // namespace

void run_walk(const WalkOptions& o, Context& ctx) {
    if (o.mode == "exact") exact_mode(o, ctx);
    else if (o.mode == "mc") mc_mode(o, ctx);
    else if (o.mode == "bracket") bracket_mode(o, ctx);
    else if (o.mode == "chain") chain_mode(o, ctx);
    else throw DomainError("unknown walk mode '" + o.mode + "'");
}

}  // namespace uict::cli
