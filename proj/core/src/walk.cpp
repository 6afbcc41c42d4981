#include "uict/walk.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "uict/error.hpp"
#include "uict/stats.hpp"

namespace uict {

double ReturnStats::p(std::uint64_t t) const {
    return n_walkers ? static_cast<double>(counts.at(t)) / static_cast<double>(n_walkers) : 0.0;
}

double ReturnStats::p_se(std::uint64_t t) const {
    if (n_walkers == 0) return 0.0;
    const double q = p(t);
    return std::sqrt(q * (1.0 - q) / static_cast<double>(n_walkers));
}

double ReturnStats::p0(std::uint64_t t) const {
    return n_walkers ? static_cast<double>(first_return_counts.at(t)) / static_cast<double>(n_walkers) : 0.0;
}

double ReturnStats::p0_se(std::uint64_t t) const {
    if (n_walkers == 0) return 0.0;
    const double q = p0(t);
    return std::sqrt(q * (1.0 - q) / static_cast<double>(n_walkers));
}

double ReturnStats::censored_fraction() const {
    return n_walkers ? static_cast<double>(censored_count) / static_cast<double>(n_walkers) : 0.0;
}

void ReturnStats::merge(const ReturnStats& other) {
    if (n_walkers == 0 && counts.empty()) {
        *this = other;
        return;
    }
    if (other.t_max != t_max) throw DomainError("cannot merge walk statistics with different t_max");
    n_walkers += other.n_walkers;
    censored_count += other.censored_count;
    for (std::size_t t = 0; t < counts.size(); ++t) {
        counts[t] += other.counts[t];
        first_return_counts[t] += other.first_return_counts[t];
    }
}

namespace {

ReturnStats empty_stats(std::uint64_t t_max, std::uint64_t n_walkers) {
    if (t_max == 0) throw DomainError("t_max must be at least 1");
    ReturnStats s;
    s.t_max = t_max;
    s.n_walkers = n_walkers;
    s.counts.assign(t_max + 1, 0);
    s.first_return_counts.assign(t_max + 1, 0);
    s.counts[0] = n_walkers;
    return s;
}

}  // namespace

ReturnStats simulate_walks(const AdjacencyGraph& graph, std::uint64_t t_max, std::uint64_t n_walkers,
                           const Rng& base, std::uint64_t first_walker) {
    ReturnStats s = empty_stats(t_max, n_walkers);
    const std::uint32_t root = graph.root();
    for (std::uint64_t w = 0; w < n_walkers; ++w) {
        Rng rng = base.split(first_walker + w);
        std::uint32_t pos = root;
        bool returned = false;
        for (std::uint64_t t = 1; t <= t_max; ++t) {
            const auto nb = graph.neighbors(pos);
            pos = nb[rng.below(static_cast<std::uint32_t>(nb.size()))];
            if (graph.on_boundary(pos)) {
                ++s.censored_count;
                break;
            }
            if (pos == root) {
                ++s.counts[t];
                if (!returned) {
                    ++s.first_return_counts[t];
                    returned = true;
                }
            }
        }
    }
    return s;
}

ReturnStats simulate_walks(const ReducedGraph& graph, std::uint64_t t_max, std::uint64_t n_walkers,
                           const Rng& base, std::uint64_t first_walker) {
    ReturnStats s = empty_stats(t_max, n_walkers);
    const auto& L = graph.multiplicities;
    const std::size_t top = L.size();
    if (top == 0) throw DomainError("reduced graph is empty");
    for (std::uint64_t w = 0; w < n_walkers; ++w) {
        Rng rng = base.split(first_walker + w);
        std::size_t pos = 0;
        bool returned = false;
        for (std::uint64_t t = 1; t <= t_max; ++t) {
            if (pos == 0) {
                pos = 1;
            } else {
                const std::uint64_t down = L[pos - 1], up = L[pos];
                pos = rng.below64(down + up) < up ? pos + 1 : pos - 1;
            }
            if (pos >= top) {
                ++s.censored_count;
                break;
            }
            if (pos == 0) {
                ++s.counts[t];
                if (!returned) {
                    ++s.first_return_counts[t];
                    returned = true;
                }
            }
        }
    }
    return s;
}

void check_censoring(const ReturnStats& stats, double threshold) {
    if (stats.censored_fraction() > threshold)
        throw NumericalGuardError("censored walker fraction above threshold; enlarge the window");
}

ExactReturns exact_return_probs(const AdjacencyGraph& graph, std::uint64_t t_max) {
    const std::uint32_t n = graph.vertex_count();
    if (n > 10'000) throw DomainError("exact return probabilities limited to 10^4 vertices");
    const std::uint32_t root = graph.root();
    ExactReturns out;
    out.p.assign(t_max + 1, 0.0);
    out.p0.assign(t_max + 1, 0.0);
    out.p[0] = 1.0;
    std::vector<double> cur(n, 0.0), nxt(n, 0.0), cur0(n, 0.0), nxt0(n, 0.0);
    cur[root] = 1.0;
    cur0[root] = 1.0;
    for (std::uint64_t t = 1; t <= t_max; ++t) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        std::fill(nxt0.begin(), nxt0.end(), 0.0);
        for (std::uint32_t v = 0; v < n; ++v) {
            const auto nb = graph.neighbors(v);
            if (nb.empty()) continue;
            const double share = 1.0 / static_cast<double>(nb.size());
            if (cur[v] != 0.0)
                for (const auto u : nb) nxt[u] += cur[v] * share;
            if (cur0[v] != 0.0)
                for (const auto u : nb) nxt0[u] += cur0[v] * share;
        }
        out.p[t] = nxt[root];
        out.p0[t] = nxt0[root];
        nxt0[root] = 0.0;  // absorbed at the first return
        std::swap(cur, nxt);
        std::swap(cur0, nxt0);
    }
    return out;
}

AdjacencyGraph reduced_to_adjacency(const ReducedGraph& rg) {
    std::vector<AdjacencyGraph::Edge> edges;
    const auto n = static_cast<std::uint32_t>(rg.length() + 1);
    std::vector<std::uint32_t> levels(n);
    for (std::uint32_t k = 0; k < n; ++k) levels[k] = k;
    for (std::uint32_t k = 0; k + 1 < n; ++k)
        for (std::uint64_t j = 0; j < rg[k]; ++j) edges.emplace_back(k, k + 1);
    return AdjacencyGraph::from_edges(n, edges, std::move(levels));
}

namespace {

void check_x(double x) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("x must lie in (0, 1)");
}

}  // namespace

double q_resolvent(const AdjacencyGraph& graph, double x) {
    check_x(x);
    const auto n = static_cast<Eigen::Index>(graph.vertex_count());
    const double s = std::sqrt(1.0 - x);
    std::vector<Eigen::Triplet<double>> trip;
    for (std::uint32_t v = 0; v < graph.vertex_count(); ++v) {
        trip.emplace_back(v, v, 1.0);
        const auto nb = graph.neighbors(v);
        for (const auto u : nb) trip.emplace_back(v, u, -s / static_cast<double>(nb.size()));
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) throw NumericalGuardError("resolvent factorization failed");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[graph.root()] = 1.0;
    const Eigen::VectorXd g = lu.solve(e);
    return g[graph.root()];
}

namespace {

void check_truncation(double x, std::uint64_t t_max, double tol) {
    if (!(std::pow(1.0 - x, 0.5 * static_cast<double>(t_max)) < tol))
        throw NumericalGuardError("x too small for the simulated horizon: series truncation dominates");
}

}  // namespace

SeriesEval q_eval(const ExactReturns& exact, double x, double tol) {
    check_x(x);
    check_truncation(x, exact.p.size() - 1, tol);
    const double w1 = std::sqrt(1.0 - x);
    SeriesEval e;
    e.x = x;
    double w = 1.0;
    for (std::size_t t = 0; t < exact.p.size(); ++t) {
        e.q += w * exact.p[t];
        if (t > 0) e.p += w * exact.p0[t];
        w *= w1;
    }
    return e;
}

SeriesEval q_eval(const ReturnStats& stats, double x, double tol) {
    check_x(x);
    check_truncation(x, stats.t_max, tol);
    const double w1 = std::sqrt(1.0 - x);
    SeriesEval e;
    e.x = x;
    double w = 1.0, p2 = 0.0;
    for (std::uint64_t t = 0; t <= stats.t_max; ++t) {
        e.q += w * stats.p(t);
        if (t > 0) {
            // Counts at different t share walkers; summing the standard
            // errors bounds the standard deviation of the sum.
            e.q_se += w * stats.p_se(t);
            e.p += w * stats.p0(t);
            p2 += w * w * stats.p0(t);
        }
        w *= w1;
    }
    // Each walker contributes a single first-return term, so this variance is exact.
    if (stats.n_walkers > 0) e.p_se = std::sqrt(std::max(0.0, p2 - e.p * e.p) / static_cast<double>(stats.n_walkers));
    return e;
}

namespace {

// D(n) = 1 - P(x; n) backwards from D(N) = d_boundary down to D(0).
double backward_d(std::span<const double> L, double x, std::size_t n, double d_boundary) {
    double d = d_boundary;
    for (std::size_t m = n; m >= 1; --m) {
        const double lo = L[m - 1], hi = L[m];
        d = (hi * d + x * lo) / (lo + hi * d);
        if (!(d > 0.0 && d <= 1.0)) throw NumericalGuardError("birth-death recursion left [0, 1)");
    }
    return d;
}

}  // namespace

QBracket bd_q_bracket(std::span<const double> conductances, double x, std::size_t n, UpperBoundary upper) {
    check_x(x);
    if (n + 1 > conductances.size()) throw DomainError("bracket depth N needs N + 1 conductances");
    for (std::size_t k = 0; k <= n; ++k)
        if (!(conductances[k] > 0.0)) throw DomainError("conductances must be positive");
    QBracket b;
    b.x = x;
    if (n == 0) {
        // The root's excursion is unconstrained: 0 <= P(x; 0) <= 1 - x.
        b.q_lo = 1.0;
        b.q_hi = 1.0 / x;
        return b;
    }
    const double d_high_q = upper == UpperBoundary::certain_return ? 0.0 : 0.5 * x;
    b.q_lo = 1.0 / backward_d(conductances, x, n, 1.0);
    b.q_hi = 1.0 / backward_d(conductances, x, n, d_high_q);
    return b;
}

QBracket bd_q_bracket(const ReducedGraph& rg, double x, std::size_t n, UpperBoundary upper) {
    std::vector<double> L(rg.multiplicities.begin(), rg.multiplicities.end());
    return bd_q_bracket(L, x, n, upper);
}

EtaTerms eta_recursion_terms(std::span<const double> conductances, double x, std::size_t n, double p_boundary) {
    check_x(x);
    if (n + 1 > conductances.size()) throw DomainError("eta recursion depth N needs N + 1 conductances");
    if (!(p_boundary >= 0.0 && p_boundary < 1.0)) throw DomainError("boundary P must lie in [0, 1) so that eta(N) > 0");
    const auto L = conductances;
    EtaTerms out;
    std::vector<double> d(n + 1);
    d[n] = 1.0 - p_boundary;
    for (std::size_t m = n; m >= 1; --m) d[m - 1] = (L[m] * d[m] + x * L[m - 1]) / (L[m - 1] + L[m] * d[m]);
    out.eta.resize(n + 1);
    out.p.resize(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        out.p[m] = 1.0 - d[m];
        out.eta[m] = L[m] * d[m];
    }
    // 1/eta(m) = 1/eta(N) + sum_{k=m}^{N-1} [1/L_k - x L_k / (eta_k eta_{k+1})],
    // accumulated from the top.
    double inv_sum = 0.0, x_sum = 0.0;
    for (std::size_t m = n; m-- > 0;) {
        if (!(out.eta[m] > 0.0)) throw NumericalGuardError("eta became nonpositive");
        inv_sum += 1.0 / L[m];
        x_sum += x * L[m] / (out.eta[m] * out.eta[m + 1]);
        const double lhs = 1.0 / out.eta[m];
        const double rhs = 1.0 / out.eta[n] + inv_sum - x_sum;
        out.identity_residual = std::max(out.identity_residual, std::abs(lhs - rhs) / lhs);
        if (lhs > 1.0 / out.eta[n] + inv_sum) out.upper_bound_holds = false;
    }
    return out;
}

SpectralFit spectral_fit(std::span<const double> xs, std::span<const double> qs) {
    if (xs.size() != qs.size()) throw DomainError("x and Q grids differ in length");
    if (xs.size() < 5) throw DomainError("spectral fit needs at least five grid points");
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] > xs[b]; });
    std::vector<double> lx, lq;
    double prev = 0.0;
    for (const auto i : order) {
        if (!(xs[i] > 0.0 && xs[i] < 1.0) || !(qs[i] >= 1.0)) throw DomainError("spectral fit needs x in (0,1), Q >= 1");
        if (!lq.empty() && qs[i] < prev) throw DomainError("Q is not monotone in x");
        prev = qs[i];
        lx.push_back(-std::log(xs[i]));
        lq.push_back(std::log(qs[i]));
    }
    const auto fit = linear_fit(lx, lq);
    SpectralFit s;
    s.alpha = fit.slope;
    s.d_s = 2.0 - 2.0 * fit.slope;
    s.std_err = 2.0 * fit.slope_se;
    s.points = lx.size();
    return s;
}

SpectralFit spectral_from_returns(std::span<const double> p, std::uint64_t t_min, std::uint64_t t_max,
                                  std::size_t bins_per_decade) {
    if (t_max >= p.size()) t_max = p.size() - 1;
    if (t_min < 2 || t_min >= t_max) throw DomainError("bad time window for the return-probability fit");
    const double step = std::pow(10.0, 1.0 / static_cast<double>(bins_per_decade));
    std::vector<double> lt, lp;
    double lo = static_cast<double>(t_min);
    while (lo < static_cast<double>(t_max)) {
        const double hi = std::min(lo * step, static_cast<double>(t_max) + 1.0);
        double sum_p = 0.0, sum_t = 0.0;
        std::size_t cnt = 0;
        for (auto t = static_cast<std::uint64_t>(std::ceil(lo)); static_cast<double>(t) < hi; ++t) {
            if (t % 2) continue;
            sum_p += p[t];
            sum_t += std::log(static_cast<double>(t));
            ++cnt;
        }
        if (cnt > 0 && sum_p > 0.0) {
            lt.push_back(sum_t / static_cast<double>(cnt));
            lp.push_back(std::log(sum_p / static_cast<double>(cnt)));
        }
        lo = hi;
    }
    if (lt.size() < 3) throw DomainError("too few populated bins for the return-probability fit");
    const auto fit = linear_fit(lt, lp);
    SpectralFit s;
    s.d_s = -2.0 * fit.slope;
    s.alpha = 1.0 - 0.5 * s.d_s;
    s.std_err = 2.0 * fit.slope_se;
    s.points = lt.size();
    return s;
}

BirthDeathReport bd_generic(std::span<const double> alphas, std::span<const double> betas) {
    if (alphas.size() != betas.size() || alphas.size() < 8) throw DomainError("need matching alpha/beta of length >= 8");
    if (std::abs(alphas[0] - 1.0) > 1e-12) throw DomainError("alpha_0 must be 1");
    for (std::size_t n = 0; n < alphas.size(); ++n) {
        if (std::abs(alphas[n] + betas[n] - 1.0) > 1e-12) throw DomainError("alpha_n + beta_n must equal 1");
        if (n > 0 && !(alphas[n] > 0.0 && betas[n] > 0.0)) throw DomainError("interior rates must be positive");
    }
    BirthDeathReport r;
    const std::size_t n = alphas.size();
    r.conductances.resize(n);
    r.partial_sums.resize(n);
    double logl = 0.0, s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) logl += std::log(alphas[k]) - std::log(betas[k]);
        r.conductances[k] = std::exp(logl);
        s += std::exp(-logl);
        r.partial_sums[k] = s;  // sum_{j<=k} 1/L_j
    }
    const std::size_t last = n - 1, half = last / 2, quarter = last / 4;
    const double inc_hi = r.partial_sums[last] - r.partial_sums[half];
    const double inc_lo = r.partial_sums[half] - r.partial_sums[quarter];
    r.tail_increment_ratio = inc_lo > 0.0 ? inc_hi / inc_lo : 0.0;
    r.recurrent = r.tail_increment_ratio > 0.9;

    std::vector<double> lx, ly;
    for (std::size_t k = std::max<std::size_t>(1, n / 10); k < n; ++k) {
        const double lk = std::log(r.conductances[k]);
        if (!std::isfinite(lk)) break;
        lx.push_back(std::log(static_cast<double>(k)));
        ly.push_back(lk);
    }
    if (lx.size() >= 2) r.eta = linear_fit(lx, ly).slope;
    r.d_s_lower = 2.0 * r.eta;
    return r;
}

}  // namespace uict
