#include "uict/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "uict/error.hpp"

namespace uict {

namespace {

void check_negbin(unsigned r, double p) {
    if (r == 0) throw DomainError("negative binomial needs r >= 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("negative binomial needs p in (0, 1)");
}

}  // namespace

double negbin_pmf(unsigned r, double p, std::uint64_t m) {
    check_negbin(r, p);
    const double mm = static_cast<double>(m), rr = r;
    const double log_c = std::lgamma(mm + rr) - std::lgamma(mm + 1.0) - std::lgamma(rr);
    return std::exp(log_c + rr * std::log(p) + mm * std::log1p(-p));
}

double negbin_tail(unsigned r, double p, std::uint64_t k) {
    check_negbin(r, p);
    if (k == 0) return 1.0;
    // P(X >= K) = I_{1-p}(K, r).
    return boost::math::ibeta(static_cast<double>(k), static_cast<double>(r), 1.0 - p);
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> expected_probs,
                                double min_bin) {
    if (observed.size() != expected_probs.size()) throw DomainError("observed and expected differ in length");
    const double n = std::accumulate(observed.begin(), observed.end(), 0.0,
                                     [](double a, std::uint64_t b) { return a + static_cast<double>(b); });
    if (n <= 0.0) throw DomainError("chi-square test needs observations");

    std::vector<double> obs_bins, exp_bins;
    double o = 0.0, e = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        o += static_cast<double>(observed[i]);
        e += n * expected_probs[i];
        if (e >= min_bin) {
            obs_bins.push_back(o);
            exp_bins.push_back(e);
            o = e = 0.0;
        }
    }
    if (e > 0.0 || o > 0.0) {
        if (obs_bins.empty()) {
            obs_bins.push_back(o);
            exp_bins.push_back(e);
        } else {
            obs_bins.back() += o;
            exp_bins.back() += e;
        }
    }
    if (obs_bins.size() < 2) throw DomainError("chi-square test: too few bins after pooling");

    ChiSquareResult res;
    res.bins = obs_bins.size();
    res.dof = static_cast<unsigned>(res.bins - 1);
    for (std::size_t i = 0; i < res.bins; ++i) {
        if (exp_bins[i] <= 0.0) {
            if (obs_bins[i] > 0.0) {
                res.statistic = INFINITY;
                res.p_value = 0.0;
                return res;
            }
            continue;
        }
        const double d = obs_bins[i] - exp_bins[i];
        res.statistic += d * d / exp_bins[i];
    }
    res.p_value = boost::math::gamma_q(0.5 * res.dof, 0.5 * res.statistic);
    return res;
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys, std::span<const double> weights) {
    const std::size_t n = xs.size();
    if (ys.size() != n || (!weights.empty() && weights.size() != n)) throw DomainError("fit inputs differ in length");
    if (n < 2) throw DomainError("fit needs at least two points");
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        sw += w;
        sx += w * xs[i];
        sy += w * ys[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        sxx += w * (xs[i] - mx) * (xs[i] - mx);
        sxy += w * (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("degenerate abscissae in fit");
    LinearFit f;
    f.points = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double scale = 1.0;
    if (weights.empty()) {
        double rss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ys[i] - f.intercept - f.slope * xs[i];
            rss += r * r;
        }
        scale = n > 2 ? rss / static_cast<double>(n - 2) : 0.0;
    }
    f.slope_se = std::sqrt(scale / sxx);
    f.intercept_se = std::sqrt(scale * (1.0 / sw + mx * mx / sxx));
    return f;
}

LinearFit loglog_fit(std::span<const double> xs, std::span<const double> ys, std::span<const double> y_errs) {
    if (xs.size() < 3) throw DomainError("log-log fit needs at least three points");
    if (!y_errs.empty() && y_errs.size() != ys.size()) throw DomainError("error list differs in length");
    std::vector<double> lx, ly, w;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw DomainError("log-log fit needs positive data");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
        if (!y_errs.empty()) {
            const double rel = y_errs[i] / ys[i];
            if (!(rel > 0.0)) throw DomainError("log-log fit needs positive errors");
            w.push_back(1.0 / (rel * rel));
        }
    }
    return linear_fit(lx, ly, w);
}

double mean(std::span<const double> v) {
    if (v.empty()) throw DomainError("mean of an empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_error(std::span<const double> v) {
    if (v.size() < 2) throw DomainError("standard error needs two samples");
    const double m = mean(v);
    double ss = 0;
    for (const double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw DomainError("quantile of an empty sample");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace uict
