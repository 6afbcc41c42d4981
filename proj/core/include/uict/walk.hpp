#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uict/ensembles.hpp"
#include "uict/graph.hpp"
#include "uict/rng.hpp"

namespace uict {

// Monte Carlo return counts of simple random walks started at the root.
struct ReturnStats {
    std::uint64_t t_max = 0;
    std::uint64_t n_walkers = 0;
    std::uint64_t censored_count = 0;                // walkers that touched the window boundary
    std::vector<std::uint64_t> counts;               // walkers at the root at time t
    std::vector<std::uint64_t> first_return_counts;  // walkers back for the first time at time t

    double p(std::uint64_t t) const;
    double p_se(std::uint64_t t) const;
    double p0(std::uint64_t t) const;
    double p0_se(std::uint64_t t) const;
    double censored_fraction() const;

    // Counters are additive, so replicas merge in any order.
    void merge(const ReturnStats& other);
};

// Walker w uses the stream base.split(first_walker + w), so any partition of
// the walkers across threads reproduces the same counts.
ReturnStats simulate_walks(const AdjacencyGraph& graph, std::uint64_t t_max, std::uint64_t n_walkers,
                           const Rng& base, std::uint64_t first_walker = 0);
ReturnStats simulate_walks(const ReducedGraph& graph, std::uint64_t t_max, std::uint64_t n_walkers,
                           const Rng& base, std::uint64_t first_walker = 0);

// Throws NumericalGuardError when more than `threshold` of the walkers were censored.
void check_censoring(const ReturnStats& stats, double threshold = 0.01);

struct ExactReturns {
    std::vector<double> p;   // return probability at time t
    std::vector<double> p0;  // first-return probability at time t
};

// Exact p(t), p0(t) for t <= t_max by iterating the transition operator
// (graphs of at most 10^4 vertices).
ExactReturns exact_return_probs(const AdjacencyGraph& graph, std::uint64_t t_max);

// The half-line with L_k parallel edges between k and k+1, as a multigraph.
AdjacencyGraph reduced_to_adjacency(const ReducedGraph& rg);

// Q(x) as the root entry of (I - sqrt(1-x) P)^{-1}, P the transition
// matrix: a sparse LU solve rather than a series.
double q_resolvent(const AdjacencyGraph& graph, double x);

struct SeriesEval {
    double x = 0;
    double q = 0;
    double q_se = 0;
    double p = 0;
    double p_se = 0;
};

// Q(x) = sum_t (1-x)^{t/2} p(t) and P(x) = sum_{t>=1} (1-x)^{t/2} p0(t).
// Throws NumericalGuardError unless (1-x)^{t_max/2} < tol.
SeriesEval q_eval(const ExactReturns& exact, double x, double tol = 1e-14);
SeriesEval q_eval(const ReturnStats& stats, double x, double tol = 1e-3);

struct QBracket {
    double x = 0;
    double q_lo = 0;
    double q_hi = 0;
    double width() const { return q_hi - q_lo; }
    double relative_width() const { return (q_hi - q_lo) / q_lo; }
};

enum class UpperBoundary {
    certain_return,  // P(x; N) = 1
    trivial_bound,   // Q(x; N) = 2/x
};

// Backward birth-death recursion from vertex N down to the root, once with
// P(x; N) = 0 and once with the upper boundary value. conductances[k] is the
// number of edges between k and k+1; needs N + 1 <= conductances.size().
QBracket bd_q_bracket(std::span<const double> conductances, double x, std::size_t n,
                      UpperBoundary upper = UpperBoundary::certain_return);
QBracket bd_q_bracket(const ReducedGraph& rg, double x, std::size_t n,
                      UpperBoundary upper = UpperBoundary::certain_return);

struct EtaTerms {
    std::vector<double> eta;        // eta(x; n) = L_n (1 - P(x; n)), n = 0..N
    std::vector<double> p;          // P(x; n)
    double identity_residual = 0;   // max relative defect of the summed identity
    bool upper_bound_holds = true;  // 1/eta(n-1) <= 1/eta(N) + sum 1/L_k for all n
};

// eta along the recursion started from P(x; N) = p_boundary, 0 <= p_boundary < 1.
EtaTerms eta_recursion_terms(std::span<const double> conductances, double x, std::size_t n,
                             double p_boundary = 0.0);

struct SpectralFit {
    double alpha = 0;
    double d_s = 0;
    double std_err = 0;  // of d_s
    std::size_t points = 0;
};

// Slope of log Q against |log x|; d_s = 2 - 2 alpha. Needs >= 5 points and Q
// increasing as x decreases.
SpectralFit spectral_fit(std::span<const double> xs, std::span<const double> qs);

// d_s from the decay p(t) ~ t^{-d_s/2} over even t in [t_min, t_max],
// averaged in logarithmic bins.
SpectralFit spectral_from_returns(std::span<const double> p, std::uint64_t t_min, std::uint64_t t_max,
                                  std::size_t bins_per_decade = 8);

struct BirthDeathReport {
    std::vector<double> conductances;  // L_n = prod_{k=1}^n alpha_k / beta_k
    std::vector<double> partial_sums;  // sum_{k<=n} 1/L_k
    double tail_increment_ratio = 0;   // (S_N - S_{N/2}) / (S_{N/2} - S_{N/4})
    double eta = 0;                    // fitted exponent of L_n ~ n^eta
    double d_s_lower = 0;              // 2 eta
    bool recurrent = false;
};

// Birth-death chain with up/down probabilities alpha_n, beta_n (alpha_0 = 1).
BirthDeathReport bd_generic(std::span<const double> alphas, std::span<const double> betas);

}  // namespace uict
