#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "support.hpp"
#include "uict/error.hpp"
#include "uict/exact.hpp"
#include "uict/offspring.hpp"
#include "uict/stats.hpp"
#include "uict/tree_sampling.hpp"

using namespace uict;

namespace {

// Term-wise series sums of sum p_n x^n n^(k) up to a long cutoff.
double series(const OffspringDistribution& d, double x, int order, int terms = 4000) {
    double s = 0.0;
    for (int n = 0; n < terms; ++n) {
        double c = d.prob(n);
        if (order >= 1) c *= n;
        if (order >= 2) c *= (n - 1);
        if (n < order || c == 0.0) continue;
        const double term = c * std::pow(x, n - order);
        if (!std::isfinite(term)) break;
        s += term;
    }
    return s;
}

}  // namespace

TEST_SUITE("offspring") {

TEST_CASE("geometric law") {
    const auto d = make_geometric();
    CHECK(d.prob(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.prob(3) == doctest::Approx(1.0 / 16).epsilon(1e-15));
    CHECK(d.critical());
    CHECK(d.mean() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.second_factorial_moment() == doctest::Approx(2.0).epsilon(1e-14));
    // Term-wise: f''(1) = sum n(n-1) 2^{-(n+1)}.
    CHECK(series(d, 1.0, 2) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(series(d, 1.0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dimer law") {
    const auto geo = make_geometric();
    const auto one = make_dimer(1.0);
    for (int n = 0; n < 60; ++n) CHECK(one.prob(n) == doctest::Approx(geo.prob(n)).epsilon(1e-14));
    CHECK(one.second_factorial_moment() == doctest::Approx(2.0).epsilon(1e-13));

    const auto two = make_dimer(2.0);
    CHECK(two.prob(0) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(two.prob(1) == doctest::Approx(1.0 / 9).epsilon(1e-15));
    CHECK(series(two, 1.0, 0) == doctest::Approx(1.0).epsilon(1e-13));

    for (double a : {0.25, 0.5, 1.0, 2.0, 3.7, 10.0}) {
        const auto d = make_dimer(a);
        CAPTURE(a);
        CHECK(d.critical());
        CHECK(std::abs(d.mean() - 1.0) < 1e-12);
        CHECK(std::abs(series(d, 1.0, 1, 20000) - 1.0) < 1e-10);
        CHECK(d.second_factorial_moment() == doctest::Approx(series(d, 1.0, 2, 20000)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(make_dimer(0.0), DomainError);
    CHECK_THROWS_AS(make_dimer(-1.0), DomainError);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(OffspringDistribution::finite({0.5, 0.4}), DomainError);
    CHECK_THROWS_AS(OffspringDistribution::finite({0.0, 0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(OffspringDistribution::finite({0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(OffspringDistribution::with_geometric_tail({0.5}, 0.5, 1.0), DomainError);
    const auto binary = OffspringDistribution::finite({0.25, 0.5, 0.25});
    CHECK(binary.critical());
    CHECK(binary.second_factorial_moment() == doctest::Approx(0.5));
    CHECK(std::isinf(binary.radius()));
    const auto super = OffspringDistribution::finite({0.2, 0.3, 0.5});
    CHECK_FALSE(super.critical());
}

TEST_CASE("pgf values and derivatives") {
    const auto g = make_geometric();
    CHECK(pgf(g, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pgf(g, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pgf(g, 0.5) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK_THROWS_AS(pgf(g, 2.0), DomainError);
    CHECK_THROWS_AS(pgf(g, 0.5, 3), DomainError);
    for (double a : {0.5, 1.0, 2.0}) {
        const auto d = make_dimer(a);
        for (double x : {-0.5, 0.0, 0.3, 0.9, 1.0, 1.2}) {
            if (!(x < d.radius())) continue;
            CAPTURE(a);
            CAPTURE(x);
            for (int order = 0; order <= 2; ++order)
                CHECK(pgf(d, x, order) == doctest::Approx(series(d, x, order, 6000)).epsilon(1e-11));
        }
    }
    const auto binary = OffspringDistribution::finite({0.25, 0.5, 0.25});
    CHECK(pgf(binary, 2.0) == doctest::Approx(0.25 + 1.0 + 1.0));
    CHECK(pgf(binary, 2.0, 1) == doctest::Approx(0.5 + 1.0));
    CHECK(pgf(binary, 2.0, 2) == doctest::Approx(0.5));
}

TEST_CASE("offspring draws follow the law") {
    for (const auto& d : {make_geometric(), make_dimer(2.0), make_dimer(0.5)}) {
        const OffspringSampler s(d);
        Rng rng(11);
        const int n = 200000, cats = 12;
        std::vector<std::uint64_t> plain(cats, 0), biased(cats, 0);
        for (int i = 0; i < n; ++i) {
            ++plain[std::min<std::uint32_t>(s(rng), cats - 1)];
            ++biased[std::min<std::uint32_t>(s.size_biased(rng), cats - 1)];
        }
        std::vector<double> p(cats), q(cats);
        double tail_p = 1.0, tail_q = 1.0;
        for (int m = 0; m < cats - 1; ++m) {
            p[m] = d.prob(m);
            q[m] = m * d.prob(m);
            tail_p -= p[m];
            tail_q -= q[m];
        }
        p[cats - 1] = tail_p;
        q[cats - 1] = tail_q;
        CAPTURE(d.name());
        CHECK(chi_square_test(plain, p).p_value > 0.001);
        CHECK(chi_square_test(biased, q).p_value > 0.001);
        CHECK(biased[0] == 0);
    }
}

TEST_CASE("batched sums match mean and variance") {
    for (const auto& d : {make_geometric(), make_dimer(3.0)}) {
        const OffspringSampler s(d);
        Rng rng(5);
        const double var = d.second_factorial_moment() + d.mean() - d.mean() * d.mean();
        for (std::uint64_t count : {10ull, 1000ull, 100000ull}) {
            testing::Moments m;
            testing::Moments sq;
            for (int i = 0; i < 4000; ++i) {
                const double v = static_cast<double>(s.sum(count, rng));
                m.add(v);
                sq.add((v - count) * (v - count));
            }
            CAPTURE(count);
            testing::check_within_se(m.mean(), static_cast<double>(count), m.se(), 4.0);
            testing::check_within_se(sq.mean(), var * count, sq.se(), 4.0);
        }
    }
}

TEST_CASE("GW tree size law") {
    const auto d = make_geometric();
    const OffspringSampler s(d);
    // Exhaustive oracle: every N-edge tree has weight prod p_{c_v} = 2^{-(2N-1)}.
    for (std::uint32_t n = 1; n <= 6; ++n) {
        double total = 0.0;
        for (const auto& t : enumerate_trees(n)) {
            double w = 1.0;
            for (const auto c : t.preorder_counts()) w *= d.prob(c);
            CHECK(w == doctest::Approx(std::ldexp(1.0, -static_cast<int>(2 * n - 1))));
            total += w;
        }
        CHECK(total == doctest::Approx(catalan(n - 1) * std::ldexp(1.0, -static_cast<int>(2 * n - 1))));
    }
    Rng rng(99);
    const int samples = 200000;
    std::vector<double> freq(7, 0.0);
    for (int i = 0; i < samples; ++i) {
        // Large trees only matter as "not small"; the cap keeps memory bounded.
        const auto maybe = try_sample_gw_tree(s, rng, 100000);
        if (!maybe) continue;
        const auto& t = *maybe;
        std::uint64_t inner = 0;
        for (std::uint64_t v = 1; v < t.vertex_count(); ++v) inner += t.child_count(v);
        CHECK(inner == t.edge_count() - 1);
        if (t.edge_count() <= 6) freq[t.edge_count()] += 1.0;
    }
    for (std::uint32_t n = 1; n <= 6; ++n) {
        const double p = catalan(n - 1) * std::ldexp(1.0, -static_cast<int>(2 * n - 1));
        CAPTURE(n);
        testing::check_within_se(freq[n] / samples, p, testing::freq_se(p, samples));
    }
    CHECK(freq[1] / samples == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("node cap is reported") {
    const OffspringSampler s(make_geometric());
    Rng rng(3);
    int overflow = 0;
    for (int i = 0; i < 2000; ++i)
        if (!try_sample_gw_tree(s, rng, 50)) ++overflow;
    CHECK(overflow > 0);
    Rng rng2(3);
    bool thrown = false;
    for (int i = 0; i < 2000 && !thrown; ++i) {
        try {
            (void)sample_gw_tree(s, rng2, 50);
        } catch (const NumericalGuardError&) {
            thrown = true;
        }
    }
    CHECK(thrown);
}

TEST_CASE("GW ball means and height tail") {
    const OffspringSampler s(make_geometric());
    Rng rng(2024);
    const std::vector<std::uint32_t> ks{1, 2, 5, 10, 20};
    std::vector<testing::Moments> balls(ks.size());
    const std::vector<std::uint32_t> rs{1, 2, 10, 100};
    std::vector<double> survive(rs.size(), 0.0);
    const int samples = 100000;
    for (int i = 0; i < samples; ++i) {
        const auto lv = sample_gw_levels(s, 101, rng);
        for (std::size_t j = 0; j < ks.size(); ++j)
            balls[j].add(static_cast<double>(ball_edges_from_levels(lv, ks[j])));
        for (std::size_t j = 0; j < rs.size(); ++j)
            if (lv[rs[j] + 1] > 0) survive[j] += 1.0;
    }
    for (std::size_t j = 0; j < ks.size(); ++j) {
        CAPTURE(ks[j]);
        testing::check_within_se(balls[j].mean(), ks[j], balls[j].se());
    }
    for (std::size_t j = 0; j < rs.size(); ++j) {
        const double p = 1.0 / (rs[j] + 1.0);
        CAPTURE(rs[j]);
        testing::check_within_se(survive[j] / samples, p, testing::freq_se(p, samples));
    }
}

TEST_CASE("height tail closed form matches pgf iteration") {
    // P(h > R) = 1 - f^{R}(0); for the geometric law f^{R}(0) = R/(R+1).
    const auto d = make_geometric();
    double x = 0.0;
    for (int r = 1; r <= 200; ++r) {
        x = pgf(d, x);
        CHECK(1.0 - x == doctest::Approx(1.0 / (r + 1)).epsilon(1e-12));
    }
    CHECK(100 * (1.0 / 101) == doctest::Approx(2.0 / d.second_factorial_moment()).epsilon(0.011));
}

TEST_CASE("conditioned trees: small cases") {
    const auto d = make_geometric();
    Rng rng(8);
    for (int i = 0; i < 100; ++i) CHECK(sample_gw_tree_conditioned(d, 1, rng).edge_count() == 1);
    CHECK_THROWS_AS(sample_gw_tree_conditioned(d, 0, rng), DomainError);
    CHECK(enumerate_trees(2).size() == 1);
    // Three edges: the path and the cherry, each with probability 1/2.
    const auto trees = enumerate_trees(3);
    REQUIRE(trees.size() == 2);
    const int n = 100000;
    int first = 0;
    for (int i = 0; i < n; ++i) {
        const auto t = sample_gw_tree_conditioned(d, 3, rng);
        REQUIRE(t.edge_count() == 3);
        if (t == trees[0]) ++first;
        else CHECK(t == trees[1]);
    }
    testing::check_within_se(first / double(n), 0.5, testing::freq_se(0.5, n));
}

TEST_CASE("conditioned trees are uniform for the geometric law") {
    const auto d = make_geometric();
    Rng rng(17);
    for (std::uint32_t n : {4u, 6u, 8u}) {
        const auto trees = enumerate_trees(n);
        REQUIRE(trees.size() == catalan(n - 1));
        std::map<std::vector<std::uint32_t>, std::size_t> index;
        for (std::size_t i = 0; i < trees.size(); ++i) index[trees[i].preorder_counts()] = i;
        std::vector<std::uint64_t> counts(trees.size(), 0);
        const int samples = 100000;
        for (int i = 0; i < samples; ++i) ++counts[index.at(sample_gw_tree_conditioned(d, n, rng).preorder_counts())];
        const std::vector<double> probs(trees.size(), 1.0 / trees.size());
        CAPTURE(n);
        CHECK(chi_square_test(counts, probs).p_value > 0.001);
    }
}

TEST_CASE("conditioned trees follow the weighted law for other offspring laws") {
    Rng rng(23);
    for (const auto& d : {make_dimer(2.0), make_dimer(0.4), OffspringDistribution::finite({0.3, 0.45, 0.2, 0.05})}) {
        const std::uint32_t n = 6;
        const auto trees = enumerate_trees(n);
        std::map<std::vector<std::uint32_t>, std::size_t> index;
        std::vector<double> w(trees.size());
        double total = 0;
        for (std::size_t i = 0; i < trees.size(); ++i) {
            const auto pc = trees[i].preorder_counts();
            index[pc] = i;
            w[i] = 1.0;
            for (const auto c : pc) w[i] *= d.prob(c);
            total += w[i];
        }
        for (auto& x : w) x /= total;
        std::vector<std::uint64_t> counts(trees.size(), 0), rej(trees.size(), 0);
        const OffspringSampler s(d);
        for (int i = 0; i < 60000; ++i) {
            ++counts[index.at(sample_gw_tree_conditioned(d, n, rng).preorder_counts())];
            if (i < 20000) ++rej[index.at(sample_gw_tree_conditioned_rejection(s, n, rng).preorder_counts())];
        }
        CAPTURE(d.name());
        CHECK(chi_square_test(counts, w).p_value > 0.001);
        CHECK(chi_square_test(rej, w).p_value > 0.001);
    }
}

TEST_CASE("Kesten tree: branch counts and level means") {
    const auto d = make_geometric();
    const OffspringSampler s(d);
    Rng rng(31);
    const std::uint32_t h = 12;
    const int trees = 20000;
    std::vector<std::uint64_t> branches(11, 0);
    std::vector<testing::Moments> levels(h + 1), balls(h + 1);
    std::uint64_t spine_vertices = 0;
    for (int i = 0; i < trees; ++i) {
        const auto st = sample_kesten_tree(s, h, rng);
        REQUIRE(st.spine.size() == h + 1);
        CHECK(st.tree.truncation_height() == h);
        for (std::uint32_t k = 1; k < h; ++k) {
            ++branches[std::min<std::uint32_t>(st.branch_count(k), 10)];
            ++spine_vertices;
            CHECK(st.tree.depth(st.spine[k]) == k);
            CHECK(st.tree.parent(st.spine[k + 1]) == st.spine[k]);
            CHECK(st.spine[k + 1] == st.tree.first_child(st.spine[k]) + st.spine_slot[k]);
        }
        const auto stats = tree_stats(st.tree);
        for (std::uint32_t k = 1; k <= h; ++k) {
            levels[k].add(static_cast<double>(stats.level_sizes[k]));
            balls[k].add(static_cast<double>(stats.ball_sizes[k]));
        }
    }
    // Branch-count pgf is f'(x) = 1/(2-x)^2: P(b) = (b+1) 2^{-(b+2)}.
    std::vector<double> probs(11);
    double tail = 1.0;
    for (int b = 0; b < 10; ++b) {
        probs[b] = (b + 1) * std::ldexp(1.0, -(b + 2));
        tail -= probs[b];
    }
    probs[10] = tail;
    CHECK(probs[0] == doctest::Approx(0.25));
    CHECK(chi_square_test(branches, probs).p_value > 0.001);
    for (int b = 0; b < 10; ++b) {
        CAPTURE(b);
        testing::check_within_se(branches[b] / double(spine_vertices), probs[b], testing::freq_se(probs[b], spine_vertices));
    }
    for (std::uint32_t k = 1; k <= h; ++k) {
        CAPTURE(k);
        testing::check_within_se(levels[k].mean(), 2.0 * k - 1.0, levels[k].se());
        testing::check_within_se(balls[k].mean(), double(k) * k, balls[k].se());
    }
}

TEST_CASE("lazy Kesten levels match the explicit construction in law") {
    const OffspringSampler s(make_dimer(2.0));
    Rng rng(77);
    const std::uint32_t h = 30;
    testing::Moments lazy, full;
    for (int i = 0; i < 20000; ++i) {
        lazy.add(static_cast<double>(sample_kesten_levels(s, h, rng)[h]));
        if (i < 4000) full.add(static_cast<double>(sample_kesten_tree(s, h, rng).tree.level_size(h)));
    }
    const double expected = (h - 1.0) * make_dimer(2.0).second_factorial_moment() + 1.0;
    testing::check_within_se(lazy.mean(), expected, lazy.se());
    testing::check_within_se(full.mean(), expected, full.se());
}

}
