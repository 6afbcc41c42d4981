#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace uict {

// Negative binomial counting failures before the r-th success:
// P(X = m) = C(m + r - 1, m) p^r (1 - p)^m.
double negbin_pmf(unsigned r, double p, std::uint64_t m);

// P(X >= K). With r = 2, p = 1/n this is ((K + n)/n) (1 - 1/n)^K.
double negbin_tail(unsigned r, double p, std::uint64_t k);

struct ChiSquareResult {
    double statistic = 0;
    double p_value = 1;
    unsigned dof = 0;
    std::size_t bins = 0;
};

// Pearson test of observed counts against category probabilities. Adjacent
// categories are pooled left to right until each bin expects at least
// `min_bin` counts; a short last bin is folded into its neighbour. The
// probabilities should exhaust the support (put any tail in the last one).
ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> expected_probs,
                                double min_bin = 5.0);

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double slope_se = 0;
    double intercept_se = 0;
    std::size_t points = 0;
};

// Least squares y = a + b x. With weights, w_i = 1 / sigma_i^2 and the
// standard errors come from the weights; without, from the residuals.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys, std::span<const double> weights = {});

// Fit of log y against log x; y_errs (optional) are absolute errors on y.
LinearFit loglog_fit(std::span<const double> xs, std::span<const double> ys, std::span<const double> y_errs = {});

double mean(std::span<const double> v);
// Standard error of the mean.
double std_error(std::span<const double> v);
double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);

}  // namespace uict
