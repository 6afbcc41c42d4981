#include <doctest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "uict/ensembles.hpp"
#include "uict/error.hpp"
#include "uict/graph.hpp"
#include "uict/tree_sampling.hpp"
#include "uict/triangulation.hpp"
#include "uict/walk.hpp"

using namespace uict;

namespace {

// Return probabilities from dense powers of the transition matrix.
std::vector<double> dense_returns(const AdjacencyGraph& g, std::size_t t_max) {
    const std::size_t n = g.vertex_count();
    std::vector<double> m(n * n, 0.0), row(n, 0.0), next(n, 0.0);
    for (std::uint32_t v = 0; v < n; ++v)
        for (const auto u : g.neighbors(v)) m[v * n + u] += 1.0 / g.degree(v);
    row[g.root()] = 1.0;
    std::vector<double> p{1.0};
    for (std::size_t t = 1; t <= t_max; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) next[j] += row[i] * m[i * n + j];
        std::swap(row, next);
        p.push_back(row[g.root()]);
    }
    return p;
}

std::vector<AdjacencyGraph> small_graphs() {
    std::vector<AdjacencyGraph> out{make_path_graph(2), make_path_graph(7), make_cycle_graph(3), make_cycle_graph(8)};
    const auto ct = CausalTriangulation::from_levels({1, 3, 4, 2}, {{3}, {3, 1, 3}, {2, 1, 1, 2}}, true);
    out.push_back(ct_to_adjacency(ct, true));
    out.push_back(tree_to_adjacency(beta(ct)));
    return out;
}

}  // namespace

TEST_SUITE("walk") {

TEST_CASE("exact returns on fixtures") {
    const auto path = make_path_graph(2);
    const auto e = exact_return_probs(path, 40);
    for (std::size_t t = 0; t <= 40; ++t) CHECK(e.p[t] == (t % 2 == 0 ? 1.0 : 0.0));
    CHECK(e.p0[2] == 1.0);
    for (std::size_t t = 3; t <= 40; ++t) CHECK(e.p0[t] == 0.0);

    const auto tri = make_cycle_graph(3);
    const auto c = exact_return_probs(tri, 200);
    CHECK(c.p[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.p[3] == doctest::Approx(0.25).epsilon(1e-15));
    double total = 0.0;
    for (double v : c.p0) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    for (const auto& g : small_graphs()) {
        const auto ex = exact_return_probs(g, 60);
        const auto dense = dense_returns(g, 60);
        for (std::size_t t = 0; t <= 60; ++t) CHECK(ex.p[t] == doctest::Approx(dense[t]).epsilon(1e-13));
    }
    CHECK_THROWS_AS(exact_return_probs(make_path_graph(10001), 3), DomainError);
}

TEST_CASE("generating functions") {
    const auto path = exact_return_probs(make_path_graph(2), 2000);
    for (double x : {0.5, 0.25}) {
        const auto s = q_eval(path, x);
        CHECK(s.q == doctest::Approx(1.0 / x).epsilon(1e-12));
        CHECK(s.p == doctest::Approx(1.0 - x).epsilon(1e-12));
    }
    for (const auto& g : small_graphs()) {
        const auto ex = exact_return_probs(g, 4000);
        for (double x : {0.05, 0.2, 0.5, 0.9}) {
            const auto s = q_eval(ex, x);
            CHECK(s.q >= 1.0);
            CHECK(s.p >= 0.0);
            CHECK(s.p < 1.0);
            CHECK(std::abs(s.q * (1.0 - s.p) - 1.0) < 1e-10);
        }
        CHECK(q_eval(ex, 0.999999).q < 1.01);
    }
    CHECK_THROWS_AS(q_eval(path, 0.001), NumericalGuardError);
    CHECK_THROWS_AS(q_eval(path, 0.0), DomainError);
    CHECK_THROWS_AS(q_eval(path, 1.0), DomainError);
}

TEST_CASE("Monte Carlo returns agree with exact values") {
    const Rng base(99);
    const std::uint64_t walkers = 40000;
    for (const auto& g : small_graphs()) {
        const auto mc = simulate_walks(g, 30, walkers, base);
        const auto ex = exact_return_probs(g, 30);
        CHECK(mc.censored_count == 0);
        std::uint64_t cum = 0, cum0 = 0;
        for (std::size_t t = 1; t <= 30; ++t) {
            CAPTURE(t);
            testing::check_within_se(mc.p(t), ex.p[t], testing::freq_se(ex.p[t], walkers), 4.0);
            testing::check_within_se(mc.p0(t), ex.p0[t], testing::freq_se(ex.p0[t], walkers), 4.0);
            cum += mc.counts[t];
            cum0 += mc.first_return_counts[t];
            CHECK(cum0 <= cum);
        }
    }
}

TEST_CASE("reduced-graph walks match the multigraph walk") {
    const ReducedGraph rg{{2, 3, 1, 4, 2, 5, 3, 2, 2, 1, 3, 1, 2, 2, 2, 2, 2, 2, 2, 2}};
    const Rng base(5);
    const auto mc = simulate_walks(rg, 16, 50000, base);
    const auto ex = exact_return_probs(reduced_to_adjacency(rg), 16);
    CHECK(mc.censored_count == 0);
    for (std::size_t t = 1; t <= 16; ++t)
        testing::check_within_se(mc.p(t), ex.p[t], testing::freq_se(ex.p[t], 50000), 4.0);
    const auto adj = reduced_to_adjacency(rg);
    CHECK(adj.vertex_count() == 21);
    CHECK(adj.degree(0) == 2);
    CHECK(adj.degree(3) == 5);
}

TEST_CASE("censoring") {
    const auto ct = CausalTriangulation::from_levels({1, 3, 4, 2}, {{3}, {3, 1, 3}, {2, 1, 1, 2}}, false);
    const auto g = ct_to_adjacency(ct, false);
    const auto s = simulate_walks(g, 200, 2000, Rng(4));
    CHECK(s.censored_count > 0);
    CHECK_THROWS_AS(check_censoring(s), NumericalGuardError);
    const ReducedGraph half{std::vector<std::uint64_t>(50, 1)};
    const auto ok = simulate_walks(half, 40, 1000, Rng(4));
    CHECK(ok.censored_count == 0);
    CHECK_NOTHROW(check_censoring(ok));
}

TEST_CASE("replicas merge deterministically") {
    const ReducedGraph rg{std::vector<std::uint64_t>(300, 2)};
    const Rng base(31337);
    const auto whole = simulate_walks(rg, 200, 3000, base);
    auto part = simulate_walks(rg, 200, 1000, base, 0);
    const auto b = simulate_walks(rg, 200, 1200, base, 1000);
    const auto c = simulate_walks(rg, 200, 800, base, 2200);
    part.merge(c);
    part.merge(b);
    CHECK(part.counts == whole.counts);
    CHECK(part.first_return_counts == whole.first_return_counts);
    CHECK(part.n_walkers == whole.n_walkers);
    CHECK(part.censored_count == whole.censored_count);
}

TEST_CASE("half-line return decay") {
    const ReducedGraph half{std::vector<std::uint64_t>(3000, 1)};
    const auto s = simulate_walks(half, 2000, 100000, Rng(2718));
    CHECK(s.censored_count == 0);
    std::vector<double> p(s.t_max + 1);
    for (std::size_t t = 0; t <= s.t_max; ++t) p[t] = s.p(t);
    const auto fit = spectral_from_returns(p, 20, 2000);
    CHECK(fit.d_s == doctest::Approx(1.0).epsilon(0.1));
    const auto mc = q_eval(s, 0.05);
    const auto br = bd_q_bracket(half, 0.05, 2000);
    CHECK(std::abs(mc.q - br.q_lo) < 4 * mc.q_se + 1e-6);
}

TEST_CASE("birth-death brackets") {
    const std::vector<double> ones(10001, 1.0);
    const auto b = bd_q_bracket(ones, 1e-4, 10000);
    CHECK(b.q_lo <= 100.0);
    CHECK(b.q_hi >= 100.0);
    CHECK(b.relative_width() < 0.01);
    const auto t = bd_q_bracket(ones, 1e-4, 10000, UpperBoundary::trivial_bound);
    CHECK(t.q_lo <= 100.0);
    CHECK(t.q_hi >= 100.0);
    CHECK(t.q_hi <= b.q_hi);
    CHECK(bd_q_bracket(ones, 0.25, 2000).q_lo == doctest::Approx(2.0).epsilon(1e-12));

    const OffspringSampler s(make_geometric());
    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        const auto rg = sample_reduced_R(400, s, rng);
        const auto hi = bd_q_bracket(rg, 0.99, 399);
        CHECK(hi.q_lo >= 1.0);
        CHECK(hi.q_hi <= 1.2);
        double lo = 0.0, up = INFINITY;
        for (std::size_t n : {1, 3, 10, 30, 100, 399}) {
            const auto br = bd_q_bracket(rg, 1e-3, n);
            CHECK(br.q_lo <= br.q_hi);
            CHECK(br.q_lo >= lo - 1e-12);
            CHECK(br.q_hi <= up + 1e-12);
            lo = br.q_lo;
            up = br.q_hi;
        }
        for (double x = 0.5; x > 1e-4; x /= 2) {
            const auto a = bd_q_bracket(rg, x, 399), c = bd_q_bracket(rg, x / 2, 399);
            CHECK(c.q_lo >= a.q_lo);
        }
    }
    CHECK_THROWS_AS(bd_q_bracket(ones, 0.1, 10001), DomainError);
    CHECK_THROWS_AS(bd_q_bracket(ones, 1.5, 10), DomainError);
}

TEST_CASE("bracket agrees with the exact chain") {
    Rng rng(23);
    for (int rep = 0; rep < 5; ++rep) {
        ReducedGraph rg;
        for (int k = 0; k < 49; ++k) rg.multiplicities.push_back(1 + rng.below(5));
        const auto ex = exact_return_probs(reduced_to_adjacency(rg), 1000);
        const auto q = q_eval(ex, 0.1).q;
        const auto br = bd_q_bracket(rg, 0.1, 48);
        CHECK(std::abs(br.q_lo - q) < 1e-8);
        CHECK(std::abs(br.q_hi - q) < 1e-8);
        CHECK(std::abs(q_resolvent(reduced_to_adjacency(rg), 0.1) - q) < 1e-10);
    }
    for (const auto& g : small_graphs()) {
        const auto ex = exact_return_probs(g, 3000);
        for (double x : {0.05, 0.3}) CHECK(q_resolvent(g, x) == doctest::Approx(q_eval(ex, x).q).epsilon(1e-11));
    }
    CHECK(q_resolvent(make_path_graph(2), 0.25) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("eta recursion") {
    const OffspringSampler s(make_geometric());
    Rng rng(404);
    for (int i = 0; i < 10; ++i) {
        const auto rg = sample_reduced_R(500, s, rng);
        const std::vector<double> L(rg.multiplicities.begin(), rg.multiplicities.end());
        for (double x : {0.1, 1e-3, 1e-6}) {
            for (double pb : {0.0, 0.5, 0.999}) {
                const auto e = eta_recursion_terms(L, x, 499, pb);
                CHECK(e.identity_residual < 1e-10);
                CHECK(e.upper_bound_holds);
                for (double v : e.eta) CHECK(v > 0.0);
            }
            const auto e = eta_recursion_terms(L, x, 499, 0.0);
            CHECK(1.0 / (1.0 - e.p[0]) == doctest::Approx(bd_q_bracket(L, x, 499).q_lo).epsilon(1e-12));
        }
        CHECK_THROWS_AS(eta_recursion_terms(L, 0.1, 499, 1.0), DomainError);
    }
    const std::vector<double> ones(200001, 1.0);
    for (double x : {1e-6, 1e-8}) {
        const auto e = eta_recursion_terms(ones, x, 200000);
        CHECK(e.eta[0] / std::sqrt(x) == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("spectral fits") {
    std::vector<double> xs, qs_half, qs_path;
    const std::vector<double> ones(40001, 1.0);
    for (int j = 6; j <= 20; ++j) {
        const double x = std::ldexp(1.0, -j);
        xs.push_back(x);
        qs_half.push_back(bd_q_bracket(ones, x, 40000).q_lo);
        qs_path.push_back(1.0 / x);
    }
    const auto half = spectral_fit(xs, qs_half);
    CHECK(half.alpha == doctest::Approx(0.5).epsilon(0.02 / 0.5));
    CHECK(half.d_s == doctest::Approx(1.0).epsilon(0.04));
    const auto path = spectral_fit(xs, qs_path);
    CHECK(path.alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(path.d_s) < 1e-12);
    CHECK(path.points == 15);
    const std::vector<double> few{0.5, 0.25, 0.125, 0.0625};
    CHECK_THROWS_AS(spectral_fit(few, few), DomainError);
    auto bad = qs_half;
    std::swap(bad[3], bad[9]);
    CHECK_THROWS_AS(spectral_fit(xs, bad), DomainError);
}

TEST_CASE("generic birth-death chains") {
    const std::size_t n = 4096;
    std::vector<double> a(n, 0.5), b(n, 0.5);
    a[0] = 1.0;
    b[0] = 0.0;
    const auto sym = bd_generic(a, b);
    for (double l : sym.conductances) CHECK(l == doctest::Approx(1.0));
    CHECK(sym.partial_sums[99] == doctest::Approx(100.0));
    CHECK(sym.recurrent);
    CHECK(std::abs(sym.eta) < 1e-12);

    std::fill(a.begin() + 1, a.end(), 2.0 / 3);
    std::fill(b.begin() + 1, b.end(), 1.0 / 3);
    const auto up = bd_generic(a, b);
    CHECK(up.conductances[10] == doctest::Approx(1024.0));
    CHECK(up.partial_sums.back() == doctest::Approx(2.0));
    CHECK_FALSE(up.recurrent);

    for (std::size_t k = 1; k < n; ++k) {
        const double r = k == 1 ? 1.0 : std::sqrt(static_cast<double>(k) / (k - 1.0));
        a[k] = r / (1 + r);
        b[k] = 1 / (1 + r);
    }
    const auto sq = bd_generic(a, b);
    CHECK(sq.eta == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(sq.d_s_lower == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sq.recurrent);
    // Drive the same chain through the bracket: d_s >= 2 eta.
    std::vector<double> xs, qs;
    for (int j = 6; j <= 16; ++j) {
        xs.push_back(std::ldexp(1.0, -j));
        qs.push_back(bd_q_bracket(std::span<const double>(sq.conductances), xs.back(), n - 1).q_lo);
    }
    CHECK(spectral_fit(xs, qs).d_s >= sq.d_s_lower - 0.05);

    std::vector<double> shortv(4, 0.5);
    CHECK_THROWS_AS(bd_generic(shortv, shortv), DomainError);
}

}
