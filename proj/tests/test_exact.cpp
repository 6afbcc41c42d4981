#include <doctest.h>

#include <cmath>
#include <map>

#include "support.hpp"
#include "uict/error.hpp"
#include "uict/exact.hpp"
#include "uict/tree.hpp"
#include "uict/tree_sampling.hpp"
#include "uict/triangulation.hpp"

using namespace uict;

TEST_SUITE("exact") {

TEST_CASE("X_k recursion") {
    const auto x = x_seq(0.5, 1000000);
    CHECK(x[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double k = i + 1;
        worst = std::max(worst, static_cast<double>(std::fabs(x[i] - k / (2 * (k + 1)))));
    }
    CHECK(worst < 1e-12);

    for (double g : {0.1, 0.3, 0.45, 0.4999}) {
        const auto xs = x_seq(g, 5000);
        const double star = x_fixed_point(g);
        CHECK(xs[0] == doctest::Approx(g * g).epsilon(1e-15));
        for (std::size_t i = 1; i < xs.size(); ++i) {
            CHECK(xs[i] >= xs[i - 1]);
            CHECK(xs[i] <= star + 1e-15);
        }
    }
    CHECK(x_fixed_point(0.3) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(static_cast<double>(x_seq(0.3, 200).back()) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK_THROWS_AS(x_seq(0.6, 3), DomainError);
    CHECK_THROWS_AS(x_seq(0.0, 3), DomainError);
    CHECK_THROWS_AS(x_seq(0.3, 0), DomainError);
}

TEST_CASE("partition function at the critical point") {
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        const double expect = 1.0 / ((n + 1.0) * (n + 2.0));
        worst = std::max(worst, std::abs(static_cast<double>(partition_height(0.5, n)) / expect - 1.0));
    }
    CHECK(worst < 1e-12);
    // Tail of the telescoping sum is 1/(n_max + 2).
    CHECK(static_cast<double>(partition_sum(0.5, 100000)) == doctest::Approx(0.5 - 1.0 / 100002).epsilon(1e-12));
    for (double g : {0.1, 0.3, 0.5})
        CHECK(static_cast<double>(partition_height(g, 1)) == doctest::Approx(g * g * g / (1 - g * g)).epsilon(1e-14));
}

TEST_CASE("partition function against enumeration") {
    // Weight g^{1 + area}; C_N <= 4^N bounds what lies beyond area 2N_max.
    const double g = 0.2;
    const std::uint32_t n_max = 12;
    std::map<std::uint32_t, double> by_height;
    for (std::uint32_t n = 1; n <= n_max; ++n)
        for (const auto& ct : enumerate_cts(n)) by_height[ct.top()] += std::pow(g, 1.0 + ct_area(ct));
    const double tail = g * std::pow(4 * g * g, n_max + 1) / (1 - 4 * g * g);
    for (std::uint32_t h = 1; h <= 4; ++h) {
        CAPTURE(h);
        const double closed = static_cast<double>(partition_height(g, h));
        CHECK(std::abs(by_height[h] - closed) <= tail + 1e-15);
        const auto oracle = partition_oracle(g, h);
        CHECK(oracle.error_bound < 1e-12);
        CHECK(std::abs(static_cast<double>(oracle.value) - closed) < 1e-12);
    }
    for (std::uint32_t h = 1; h <= 4; ++h) {
        const auto oracle = partition_oracle(0.5, h, 1e-9L);
        CHECK(static_cast<double>(oracle.value) == doctest::Approx(1.0 / ((h + 1.0) * (h + 2.0))).epsilon(1e-7));
    }
    CHECK_THROWS_AS(partition_oracle(0.5, 9, 1e-14L, 64), NumericalGuardError);
}

TEST_CASE("girth") {
    CHECK(girth_closed(1) == doctest::Approx(4.0 / 3).epsilon(1e-15));
    CHECK(girth_closed(2) == doctest::Approx(2.3).epsilon(1e-15));
    CHECK_THROWS_AS(girth_closed(0), DomainError);
    for (std::uint32_t n = 1; n <= 5; ++n) {
        CAPTURE(n);
        const auto oracle = girth_oracle(n);
        CHECK(oracle.error_bound < 1e-10);
        CHECK(std::abs(static_cast<double>(oracle.value) - girth_closed(n)) < 1e-8);
    }
}

TEST_CASE("moment formulas") {
    const auto m = moment_formulas(make_geometric(), 10);
    CHECK(m.level_mean_infinite == 19.0);
    CHECK(m.ball_mean_infinite == 100.0);
    CHECK(m.ball_mean_gw == 10.0);
    CHECK(m.height_tail_leading == doctest::Approx(0.1));
    for (double a : {0.5, 2.0}) {
        const auto d = make_dimer(a);
        CHECK(moment_formulas(d, 1).level_mean_infinite == doctest::Approx(1.0));
        for (std::uint32_t k : {1u, 7u, 50u}) CHECK(moment_formulas(d, k).ball_mean_gw == k);
    }
    CHECK_THROWS_AS(moment_formulas(OffspringDistribution::finite({0.2, 0.3, 0.5}), 3), DomainError);
}

TEST_CASE("ball-size generating functions") {
    const auto d = make_geometric();
    for (double z : {0.0, 0.3, 0.9, 1.0}) CHECK(f_R_eval(d, 1, z) == z);
    for (std::uint32_t r : {1u, 2u, 5u, 30u}) {
        CAPTURE(r);
        CHECK(f_R_eval(d, r, 1.0) == 1.0);
        CHECK(f_R_derivative(d, r, 1.0) == doctest::Approx(r).epsilon(1e-12));
        const double h = 1e-6;
        const double numeric = (f_R_eval(d, r, 0.7 + h) - f_R_eval(d, r, 0.7 - h)) / (2 * h);
        CHECK(f_R_derivative(d, r, 0.7) == doctest::Approx(numeric).epsilon(1e-7));
        CHECK(g_R_eval(d, r, 0.5) == doctest::Approx(pgf(d, f_R_eval(d, r, 0.5), 1)));
    }
    const auto dimer = make_dimer(2.0);
    CHECK(f_R_derivative(dimer, 12, 1.0) == doctest::Approx(12.0).epsilon(1e-12));
    // Monotone in z and in R on [0, 1].
    for (std::uint32_t r = 1; r < 20; ++r)
        for (double z = 0.05; z < 1.0; z += 0.05) {
            CHECK(f_R_eval(d, r, z) < f_R_eval(d, r, z + 0.05) + 1e-15);
            CHECK(f_R_eval(d, r + 1, z) <= f_R_eval(d, r, z));
        }
    CHECK_THROWS_AS(f_R_eval(d, 0, 0.5), DomainError);
    CHECK_THROWS_AS(f_R_eval(d, 40, 1.5), DomainError);
}

TEST_CASE("ball-size generating function by simulation") {
    const OffspringSampler s(make_geometric());
    Rng rng(77);
    const double z = 0.9;
    const std::uint32_t r = 10;
    testing::Moments m;
    for (int i = 0; i < 1000000; ++i) {
        const auto lv = sample_gw_levels(s, r, rng);
        m.add(std::pow(z, static_cast<double>(ball_edges_from_levels(lv, r))));
    }
    testing::check_within_se(m.mean(), f_R_eval(make_geometric(), r, z), m.se());
}

TEST_CASE("catalan") {
    CHECK(catalan(0) == 1);
    CHECK(catalan(1) == 1);
    CHECK(catalan(3) == 5);
    CHECK(catalan(3) == enumerate_cts(3).size());
    CHECK(catalan(30) == 3814986502092304ULL);
    CHECK_THROWS_AS(catalan(31), DomainError);
}

}
