#include "uict/dimensions.hpp"

#include <algorithm>
#include <cmath>

#include "uict/error.hpp"
#include "uict/stats.hpp"

namespace uict {

HausdorffFit hausdorff_fit(const std::vector<std::vector<double>>& volumes, std::span<const double> radii,
                           FitMode mode) {
    if (volumes.empty()) throw DomainError("Hausdorff fit needs samples");
    if (radii.size() < 3) throw DomainError("Hausdorff fit needs at least three radii");
    const auto [rmin, rmax] = std::minmax_element(radii.begin(), radii.end());
    if (!(*rmin > 0.0) || std::log10(*rmax / *rmin) < 1.5 - 1e-9)
        throw DomainError("radius grid must span at least 1.5 decades");
    for (const auto& v : volumes)
        if (v.size() != radii.size()) throw DomainError("volume row length differs from the radius grid");

    HausdorffFit out;
    out.n_samples = volumes.size();
    const std::size_t m = radii.size();
    if (mode == FitMode::per_graph) {
        for (const auto& v : volumes) out.per_graph.push_back(loglog_fit(radii, v).slope);
        out.d_h = median(out.per_graph);
        // Large-sample standard error of a median.
        if (out.per_graph.size() > 1)
            out.std_err = 1.2533 * std_error(out.per_graph);
        return out;
    }
    std::vector<double> central(m), errs(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> col;
        col.reserve(volumes.size());
        for (const auto& v : volumes) col.push_back(v[j]);
        if (mode == FitMode::mean) {
            central[j] = mean(col);
            errs[j] = col.size() > 1 ? std_error(col) : 0.0;
        } else {
            central[j] = median(col);
            errs[j] = col.size() > 1 ? 1.2533 * std_error(col) : 0.0;
        }
    }
    const bool weighted = std::all_of(errs.begin(), errs.end(), [](double e) { return e > 0.0; });
    const auto fit = weighted ? loglog_fit(radii, central, errs) : loglog_fit(radii, central);
    out.d_h = fit.slope;
    out.std_err = fit.slope_se;
    return out;
}

std::vector<EnvelopeRow> envelope_check(std::span<const double> volumes, double radius, std::span<const double> lambdas) {
    if (volumes.empty()) throw DomainError("envelope check needs samples");
    if (!(radius > 1.0)) throw DomainError("envelope check needs R > 1");
    const double r2 = radius * radius, n = static_cast<double>(volumes.size());
    std::vector<EnvelopeRow> rows;
    for (const double lam : lambdas) {
        if (!(lam > 0.0)) throw DomainError("lambda must be positive");
        EnvelopeRow row;
        row.lambda = lam;
        for (const double v : volumes) {
            if (v < lam * r2) row.p_below += 1.0;
            if (v > lam * r2) row.p_above_plain += 1.0;
            if (v > lam * r2 * std::log(radius)) row.p_above += 1.0;
        }
        row.p_below /= n;
        row.p_above /= n;
        row.p_above_plain /= n;
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> dyadic_grid(int j_min, int j_max) {
    std::vector<double> xs;
    for (int j = j_min; j <= j_max; ++j) xs.push_back(std::ldexp(1.0, -j));
    return xs;
}

GraphSpectral reduced_spectral(const ReducedGraph& rg, std::span<const double> xs, double max_rel_width) {
    if (rg.length() < 2) throw DomainError("reduced graph too short for a spectral fit");
    std::vector<double> L(rg.multiplicities.begin(), rg.multiplicities.end());
    GraphSpectral g;
    for (const double x : xs) {
        const auto b = bd_q_bracket(L, x, L.size() - 1);
        if (b.relative_width() >= max_rel_width) continue;
        g.xs.push_back(x);
        g.qs.push_back(0.5 * (b.q_lo + b.q_hi));
        g.widths.push_back(b.relative_width());
    }
    if (g.xs.size() < 5)
        throw NumericalGuardError("fewer than five grid points with a narrow bracket; lengthen the graph");
    g.fit = spectral_fit(g.xs, g.qs);
    return g;
}

SpectralSummary summarize_spectral(const std::vector<GraphSpectral>& per_graph) {
    if (per_graph.empty()) throw DomainError("no graphs to summarize");
    SpectralSummary s;
    s.graphs = per_graph.size();
    std::vector<double> ds;
    for (const auto& g : per_graph) ds.push_back(g.fit.d_s);
    s.median_d_s = median(ds);
    s.mean_d_s = mean(ds);
    if (ds.size() > 1) s.median_se = 1.2533 * std_error(ds);

    // Ensemble-mean Q on the grid points shared by every graph.
    std::vector<double> xs = per_graph.front().xs;
    for (const auto& g : per_graph) {
        std::vector<double> keep;
        for (const double x : xs)
            if (std::find(g.xs.begin(), g.xs.end(), x) != g.xs.end()) keep.push_back(x);
        xs = std::move(keep);
    }
    if (xs.size() >= 3) {
        std::vector<double> lx, lq;
        for (const double x : xs) {
            double sum = 0.0;
            for (const auto& g : per_graph) {
                const auto it = std::find(g.xs.begin(), g.xs.end(), x);
                sum += g.qs[static_cast<std::size_t>(it - g.xs.begin())];
            }
            lx.push_back(-std::log(x));
            lq.push_back(std::log(sum / static_cast<double>(per_graph.size())));
        }
        const auto fit = linear_fit(lx, lq);
        s.mean_log_q_slope = fit.slope;
        s.mean_log_q_slope_se = fit.slope_se;
    }
    return s;
}

}  // namespace uict
