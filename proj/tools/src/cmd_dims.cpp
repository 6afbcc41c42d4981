#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "context.hpp"
#include "shared.hpp"
#include "uict/dimensions.hpp"
#include "uict/error.hpp"
#include "uict/exact.hpp"
#include "uict/stats.hpp"
#include "uict/tree.hpp"
#include "uict/tree_sampling.hpp"
#include "uict/triangulation.hpp"

namespace uict::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

Table& report_table(Context& ctx) {
    return ctx.add_table("report", {"ensemble", "quantity", "estimate", "stderr", "window", "n_samples", "seed"});
}

void report_row(Table& t, const DimsOptions& o, const Context& ctx, const std::string& quantity, double est,
                double se, const std::string& window, std::uint64_t n) {
    t.add_row({o.ensemble, quantity, est, se, window, static_cast<std::int64_t>(n),
               static_cast<std::int64_t>(ctx.common.seed)});
}

void reduced_ds(const DimsOptions& o, Ensemble ensemble, Context& ctx) {
    if (o.length < 2 || o.length > std::numeric_limits<std::uint32_t>::max()) throw DomainError("bad length");
    if (o.graphs == 0) throw DomainError("graphs must be positive");
    const OffspringSampler sampler(ctx.distribution());
    const auto xs = dyadic_grid(o.j_min, o.j_max);
    std::vector<GraphSpectral> per(o.graphs);
    parallel_for(o.graphs, ctx.common.threads, [&](std::size_t i) {
        Rng rng = ctx.stream(i);
        const auto len = static_cast<std::uint32_t>(o.length);
        const auto rg = ensemble == Ensemble::R ? sample_reduced_R(len, sampler, rng)
                                                : sample_reduced_Rprime(len, sampler, rng);
        per[i] = reduced_spectral(rg, xs, o.max_width);
    });
    auto& pg = ctx.add_table("per_graph", {"graph", "d_s", "std_err", "alpha", "points", "max_rel_width"});
    for (std::size_t i = 0; i < per.size(); ++i) {
        const auto& g = per[i];
        pg.add_row({static_cast<std::int64_t>(i), g.fit.d_s, g.fit.std_err, g.fit.alpha,
                    static_cast<std::int64_t>(g.fit.points), *std::max_element(g.widths.begin(), g.widths.end())});
    }
    // Ensemble-mean Q on the full grid, for graphs that kept every point.
    auto& mq = ctx.add_table("mean_q", {"x", "abs_log_x", "mean_q", "se_q", "graphs"});
    std::vector<double> lx, q_means;
    for (const double x : xs) {
        std::vector<double> qs;
        for (const auto& g : per)
            for (std::size_t j = 0; j < g.xs.size(); ++j)
                if (g.xs[j] == x) qs.push_back(g.qs[j]);
        if (qs.size() != per.size()) continue;
        const double m = mean(qs);
        mq.add_row({x, -std::log(x), m, qs.size() > 1 ? std_error(qs) : 0.0, static_cast<std::int64_t>(qs.size())});
        lx.push_back(-std::log(x));
        q_means.push_back(m);
    }
    const auto s = summarize_spectral(per);
    std::ostringstream window;
    window << "x=2^-" << o.j_max << "..2^-" << o.j_min;
    auto& rep = report_table(ctx);
    report_row(rep, o, ctx, "ds_median", s.median_d_s, s.median_se, window.str(), s.graphs);
    report_row(rep, o, ctx, "ds_mean", s.mean_d_s, nan, window.str(), s.graphs);
    report_row(rep, o, ctx, "mean_log_q_slope", s.mean_log_q_slope, s.mean_log_q_slope_se, window.str(), s.graphs);
    if (lx.size() >= 3) {
        // <Q> against |log x| directly: a finite slope means logarithmic growth.
        const auto lin = linear_fit(lx, q_means);
        report_row(rep, o, ctx, "mean_q_per_abs_log_x", lin.slope, lin.slope_se, window.str(), s.graphs);
    }
}

void walk_ds(const DimsOptions& o, Ensemble ensemble, Context& ctx) {
    const OffspringSampler sampler(ctx.distribution());
    const auto r = pooled_returns(o.graphs, o.t_max, o.walkers, ctx,
                                  [&](Rng& rng) { return sample_walk_graph(ensemble, o.height, sampler, rng); });
    const auto fit = report_returns(r, o.fit_min, o.censor_threshold, ctx, "");
    std::ostringstream window;
    window << "t=" << o.fit_min << ".." << o.t_max;
    auto& rep = report_table(ctx);
    report_row(rep, o, ctx, "ds_returns", fit.d_s, fit.std_err, window.str(), o.graphs);
}

void hausdorff(const DimsOptions& o, Ensemble ensemble, Context& ctx) {
    if (ensemble != Ensemble::uict && ensemble != Ensemble::kesten)
        throw DomainError("dh is measured on uict or kesten samples");
    if (o.graphs < 2) throw DomainError("dh needs at least two graphs");
    const auto dist = ctx.distribution();
    const OffspringSampler sampler(dist);
    std::vector<double> radii;
    std::uint32_t r_max = 0;
    for (const auto r : parse_int_list(o.radii)) {
        if (r < 1 || r > 1'000'000) throw DomainError("radius out of range");
        radii.push_back(static_cast<double>(r));
        r_max = std::max(r_max, static_cast<std::uint32_t>(r));
    }
    const bool ct = ensemble == Ensemble::uict;
    std::vector<std::vector<double>> ct_vol(o.graphs), tree_vol(o.graphs);
    parallel_for(o.graphs, ctx.common.threads, [&](std::size_t i) {
        Rng rng = ctx.stream(i);
        if (ct) {
            const auto lv = sample_uict_level_sizes(r_max, sampler, rng);  // S_0..S_rmax
            for (const double rd : radii) {
                const auto r = static_cast<std::uint32_t>(rd);
                ct_vol[i].push_back(static_cast<double>(ct_ball_edges_from_levels(lv, r)));
                double tree_ball = 0.0;  // tree edges D_1..D_R are S_0..S_{R-1}
                for (std::uint32_t k = 0; k < r; ++k) tree_ball += static_cast<double>(lv[k]);
                tree_vol[i].push_back(tree_ball);
            }
        } else {
            const auto lv = sample_kesten_levels(sampler, r_max, rng);
            for (const double rd : radii)
                tree_vol[i].push_back(static_cast<double>(ball_edges_from_levels(lv, static_cast<std::uint32_t>(rd))));
        }
    });

    const double s2 = dist.second_factorial_moment();
    auto& balls = ctx.add_table("balls", {"R", "ct_mean", "ct_se", "ct_exact", "tree_mean", "tree_se", "tree_exact"});
    for (std::size_t j = 0; j < radii.size(); ++j) {
        const double r = radii[j];
        std::vector<double> tc, cc;
        for (std::size_t i = 0; i < o.graphs; ++i) {
            tc.push_back(tree_vol[i][j]);
            if (ct) cc.push_back(ct_vol[i][j]);
        }
        const double tree_exact = moment_formulas(dist, static_cast<std::uint32_t>(r)).ball_mean_infinite;
        // <|S_k|> = k f''(1) + 1, ball edges 3 sum_{k<=R} |S_k| - |S_R|.
        const double ct_exact = 3.0 * (0.5 * s2 * r * (r + 1) + r) - (s2 * r + 1.0);
        balls.add_row({static_cast<std::int64_t>(r), ct ? mean(cc) : nan, ct ? std_error(cc) : nan, ct ? ct_exact : nan,
                       mean(tc), std_error(tc), tree_exact});
    }
    std::ostringstream window;
    window << "R=" << radii.front() << ".." << radii.back();
    auto& rep = report_table(ctx);
    auto& pg = ctx.add_table("per_graph", {"graph", "ct_slope", "tree_slope"});
    const auto tree_pg = hausdorff_fit(tree_vol, radii, FitMode::per_graph);
    if (ct) {
        const auto ct_pg = hausdorff_fit(ct_vol, radii, FitMode::per_graph);
        for (std::size_t i = 0; i < o.graphs; ++i)
            pg.add_row({static_cast<std::int64_t>(i), ct_pg.per_graph[i], tree_pg.per_graph[i]});
        report_row(rep, o, ctx, "dh_per_graph_median", ct_pg.d_h, ct_pg.std_err, window.str(), o.graphs);
        const auto ct_mean = hausdorff_fit(ct_vol, radii, FitMode::mean);
        report_row(rep, o, ctx, "dh_mean", ct_mean.d_h, ct_mean.std_err, window.str(), o.graphs);
        const auto ct_med = hausdorff_fit(ct_vol, radii, FitMode::median);
        report_row(rep, o, ctx, "dh_median_volume", ct_med.d_h, ct_med.std_err, window.str(), o.graphs);
    } else {
        for (std::size_t i = 0; i < o.graphs; ++i)
            pg.add_row({static_cast<std::int64_t>(i), nan, tree_pg.per_graph[i]});
    }
    report_row(rep, o, ctx, "dh_tree_per_graph_median", tree_pg.d_h, tree_pg.std_err, window.str(), o.graphs);
    const auto tree_mean = hausdorff_fit(tree_vol, radii, FitMode::mean);
    report_row(rep, o, ctx, "dh_tree_mean", tree_mean.d_h, tree_mean.std_err, window.str(), o.graphs);
}

}  // namespace

void run_dims(const DimsOptions& o, Context& ctx) {
    const auto ensemble = parse_ensemble(o.ensemble);
    if (o.quantity == "ds") {
        if (ensemble == Ensemble::R || ensemble == Ensemble::Rprime) reduced_ds(o, ensemble, ctx);
        else if (ensemble == Ensemble::fixed_area) throw DomainError("ds is not defined for fixed_area samples");
        else walk_ds(o, ensemble, ctx);
    } else if (o.quantity == "dh") {
        hausdorff(o, ensemble, ctx);
    } else {
        throw DomainError("quantity must be ds or dh");
    }
}

}  // namespace uict::cli
