#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "uict/ensembles.hpp"
#include "uict/error.hpp"
#include "uict/resistance.hpp"
#include "uict/stats.hpp"

using namespace uict;

TEST_SUITE("resistance") {

TEST_CASE("reduced graphs") {
    const ReducedGraph twos{std::vector<std::uint64_t>(10, 2)};
    CHECK(resistance_reduced(twos, 4) == 2.0);
    CHECK(resistance_reduced(twos, 0) == 0.0);
    ReducedGraph pow2;
    for (int k = 0; k < 60; ++k) pow2.multiplicities.push_back(std::uint64_t{1} << k);
    CHECK(resistance_reduced(pow2, 60) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(resistance_reduced(pow2, 3) == 1.75);
    CHECK_THROWS_AS(resistance_reduced(twos, 11), DomainError);
}

TEST_CASE("sampled reduced graphs keep growing") {
    const OffspringSampler s(make_geometric());
    Rng rng(10);
    for (int i = 0; i < 5; ++i) {
        const auto rg = sample_reduced_R(100000, s, rng);
        const double r3 = resistance_reduced(rg, 1000), r4 = resistance_reduced(rg, 10000),
                     r5 = resistance_reduced(rg, 100000);
        CHECK(r4 > r3);
        CHECK(r5 - r4 > 0.5 * (r4 - r3));
    }
}

TEST_CASE("symmetric height-one ball") {
    for (std::uint64_t m : {1u, 2u, 3u, 5u}) {
        CAPTURE(m);
        const auto ct = CausalTriangulation::from_levels({1, m}, {{static_cast<std::uint32_t>(m)}}, false);
        const auto r = effective_resistance(ct, 1);
        CHECK(r.resistance == doctest::Approx(2.0 / m).epsilon(1e-12));
        CHECK(r.energy_residual < 1e-10);
        CHECK(nash_williams_lower(ct, 1) == doctest::Approx(1.0 / m));
        const auto c = effective_resistance(ct, 1, 1e-10, BoundaryMode::collapsed);
        CHECK(c.resistance == doctest::Approx(1.0 / m).epsilon(1e-12));
    }
}

TEST_CASE("Nash-Williams sandwich on sampled windows") {
    const OffspringSampler s(make_geometric());
    Rng rng(55);
    for (int i = 0; i < 30; ++i) {
        const auto ct = sample_uict(25, s, rng);
        const auto rg = gamma_R(ct);
        double prev = 0.0;
        for (std::uint32_t k = 1; k <= 25; ++k) {
            const double nw = nash_williams_lower(ct, k);
            CHECK(nw == resistance_reduced(rg, k));
            const auto top = effective_resistance(ct, k);
            const auto col = effective_resistance(ct, k, 1e-10, BoundaryMode::collapsed);
            CHECK(top.direct);
            CHECK(nw <= top.resistance * (1 + 1e-12));
            CHECK(nw <= col.resistance * (1 + 1e-12));
            CHECK(col.resistance <= top.resistance * (1 + 1e-12));
            CHECK(col.resistance >= prev * (1 - 1e-12));
            CHECK(top.energy_residual < 1e-10);
            CHECK(col.energy_residual < 1e-10);
            prev = col.resistance;
        }
    }
    const auto ct = sample_uict(5, s, rng);
    CHECK_THROWS_AS(effective_resistance(ct, 0), DomainError);
    CHECK_THROWS_AS(effective_resistance(ct, 6), DomainError);
    CHECK_THROWS_AS(nash_williams_lower(ct, 6), DomainError);
}

TEST_CASE("added terminal is not monotone in K") {
    const auto ct = CausalTriangulation::from_levels({1, 1, 1000}, {{1}, {1001}}, false);
    CHECK(effective_resistance(ct, 1).resistance == doctest::Approx(2.0));
    CHECK(effective_resistance(ct, 2).resistance < 1.01);
    CHECK(effective_resistance(ct, 2, 1e-10, BoundaryMode::collapsed).resistance >=
          effective_resistance(ct, 1, 1e-10, BoundaryMode::collapsed).resistance);
}

TEST_CASE("iterative solver agrees with the direct one") {
    const OffspringSampler s(make_geometric());
    Rng rng(88);
    const auto ct = sample_uict(60, s, rng);
    for (auto mode : {BoundaryMode::added_top, BoundaryMode::collapsed}) {
        const auto d = effective_resistance(ct, 60, 1e-12, mode);
        const auto it = effective_resistance(ct, 60, 1e-12, mode, 0);
        CHECK(d.direct);
        CHECK_FALSE(it.direct);
        CHECK(it.resistance == doctest::Approx(d.resistance).epsilon(1e-8));
        CHECK(it.energy_residual < 1e-8);
    }
}

TEST_CASE("profile grows logarithmically") {
    const OffspringSampler s(make_geometric());
    Rng rng(2);
    const std::vector<std::uint32_t> ks{2, 4, 8, 16, 32, 64};
    std::vector<std::vector<double>> per_k(ks.size());
    for (int i = 0; i < 40; ++i) {
        const auto ct = sample_uict(64, s, rng);
        const auto rows = resistance_profile(ct, ks);
        REQUIRE(rows.size() == ks.size());
        for (std::size_t j = 0; j < ks.size(); ++j) {
            CHECK(rows[j].k == ks[j]);
            CHECK(rows[j].ratio >= 1.0 - 1e-12);
            CHECK(rows[j].ratio == doctest::Approx(rows[j].exact / rows[j].nw_lower));
            per_k[j].push_back(rows[j].exact);
        }
    }
    std::vector<double> lk, med;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        lk.push_back(std::log(static_cast<double>(ks[j])));
        med.push_back(median(per_k[j]));
    }
    const auto fit = linear_fit(lk, med);
    CHECK(fit.slope - 1.96 * fit.slope_se > 0.0);
}

}
