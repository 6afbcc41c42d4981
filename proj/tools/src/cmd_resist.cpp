#include <algorithm>
#include <cmath>
#include <fstream>

#include "context.hpp"
#include "shared.hpp"
#include "uict/error.hpp"
#include "uict/resistance.hpp"
#include "uict/stats.hpp"
#include "uict/triangulation.hpp"

namespace uict::cli {

namespace {

BoundaryMode parse_boundary(const std::string& s) {
    if (s == "added_top") return BoundaryMode::added_top;
    if (s == "collapsed") return BoundaryMode::collapsed;
    throw DomainError("boundary must be added_top or collapsed");
}

void symmetric(const ResistOptions& o, Context& ctx) {
    const auto mode = parse_boundary(o.boundary);
    auto& t = ctx.add_table("symmetric", {"m", "exact", "expected", "abs_err", "energy_residual"});
    for (const auto m : parse_int_list(o.m)) {
        if (m < 1 || m > 1'000'000) throw DomainError("m out of range");
        const auto ct = CausalTriangulation::from_levels({1, static_cast<std::uint64_t>(m)},
                                                         {{static_cast<std::uint32_t>(m)}}, false);
        const auto r = effective_resistance(ct, 1, o.tol, mode, o.direct_limit);
        // m parallel spokes, then m parallel unit edges to the terminal (if added).
        const double expected = (mode == BoundaryMode::added_top ? 2.0 : 1.0) / static_cast<double>(m);
        t.add_row({m, r.resistance, expected, std::abs(r.resistance - expected), r.energy_residual});
    }
}

}  // namespace

void run_resist(const ResistOptions& o, Context& ctx) {
    if (o.fixture == "symmetric") return symmetric(o, ctx);
    if (!o.fixture.empty()) throw DomainError("the only resistance fixture is 'symmetric'");
    const auto mode = parse_boundary(o.boundary);

    std::vector<std::uint32_t> ks;
    for (const auto k : parse_int_list(o.k)) {
        if (k < 1 || k > 100'000) throw DomainError("K out of range");
        ks.push_back(static_cast<std::uint32_t>(k));
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<CausalTriangulation> cts;
    if (!o.graph.empty()) {
        std::ifstream in(o.graph);
        if (!in) throw FormatError("cannot read " + o.graph);
        cts.push_back(read_ct(in));
    } else {
        if (parse_ensemble(o.ensemble) != Ensemble::uict) throw DomainError("resistance samples come from uict");
        if (o.height < ks.back()) throw DomainError("height must be at least the largest K");
        const OffspringSampler sampler(ctx.distribution());
        cts.resize(o.graphs);
        parallel_for(o.graphs, ctx.common.threads, [&](std::size_t i) {
            Rng rng = ctx.stream(i);
            cts[i] = sample_uict(o.height, sampler, rng);
        });
    }

    std::vector<std::vector<ResistanceRow>> rows(cts.size());
    parallel_for(cts.size(), ctx.common.threads, [&](std::size_t i) {
        if (cts[i].top() < ks.back()) throw DomainError("K exceeds the triangulation window");
        for (const auto k : ks) {
            const auto r = effective_resistance(cts[i], k, o.tol, mode, o.direct_limit);
            const double nw = nash_williams_lower(cts[i], k);
            rows[i].push_back({k, nw, r.resistance, r.resistance / nw, r.energy_residual});
        }
    });

    auto& profile = ctx.add_table("profile", {"K", "nw_lower", "exact", "ratio", "graph", "energy_residual"});
    std::int64_t violations = 0;
    double max_residual = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& r : rows[i]) {
            profile.add_row({static_cast<std::int64_t>(r.k), r.nw_lower, r.exact, r.ratio, static_cast<std::int64_t>(i),
                             r.energy_residual});
            // Tiny slack for solver round-off on equal values.
            if (r.nw_lower > r.exact * (1.0 + 1e-12)) ++violations;
            max_residual = std::max(max_residual, r.energy_residual);
        }

    // Median resistance against log K: finite slope means logarithmic growth.
    std::vector<double> log_k, med;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        std::vector<double> v;
        for (const auto& g : rows) v.push_back(g[j].exact);
        log_k.push_back(std::log(static_cast<double>(ks[j])));
        med.push_back(median(v));
    }
    double slope = std::nan(""), slope_se = std::nan("");
    if (ks.size() >= 3) {
        const auto fit = linear_fit(log_k, med);
        slope = fit.slope;
        slope_se = fit.slope_se;
    }
    auto& summary = ctx.add_table("summary", {"graphs", "rows", "sandwich_violations", "max_energy_residual",
                                              "median_r_per_log_k", "median_r_per_log_k_se"});
    summary.add_row({static_cast<std::int64_t>(rows.size()), static_cast<std::int64_t>(profile.size()), violations,
                     max_residual, slope, slope_se});
}

}  // namespace uict::cli
