#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "context.hpp"
#include "shared.hpp"
#include "uict/error.hpp"
#include "uict/exact.hpp"
#include "uict/stats.hpp"
#include "uict/tree.hpp"
#include "uict/tree_sampling.hpp"
#include "uict/triangulation.hpp"

namespace uict::cli {

namespace {

constexpr std::uint64_t chunk_size = 10'000;

bool geometric_law(const OffspringDistribution& d) {
    return d.tail_kind() == TailKind::geometric_tail && d.head().empty() && d.tail_ratio() == 0.5 &&
           d.tail_first() == 0.5;
}

// A zero standard error means a deterministic quantity: exact or infinitely off.
double z_score(double value, double exact, double se) {
    if (se > 0.0) return (value - exact) / se;
    return value == exact ? 0.0 : std::numeric_limits<double>::infinity();
}

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

std::vector<std::uint32_t> positive_list(const std::string& text, const char* what, std::int64_t max) {
    std::vector<std::uint32_t> out;
    for (const auto v : parse_int_list(text)) {
        if (v < 1 || v > max) throw DomainError(std::string(what) + " out of range");
        out.push_back(static_cast<std::uint32_t>(v));
    }
    return out;
}

// Runs body(rng, begin, end) over the samples in fixed chunks; chunk c always
// gets stream c, so results do not depend on the thread count.
template <class Acc, class F>
std::vector<Acc> chunked(std::uint64_t samples, const Context& ctx, Acc init, F body) {
    if (samples == 0) throw DomainError("samples must be positive");
    const std::uint64_t chunks = (samples + chunk_size - 1) / chunk_size;
    std::vector<Acc> acc(chunks, init);
    parallel_for(chunks, ctx.common.threads, [&](std::size_t c) {
        Rng rng = ctx.stream(c);
        const std::uint64_t n = std::min(chunk_size, samples - c * chunk_size);
        for (std::uint64_t i = 0; i < n; ++i) body(acc[c], rng);
    });
    return acc;
}

// Running sums of x and x^2 per column.
struct Sums {
    std::vector<double> s, s2;
    explicit Sums(std::size_t n = 0) : s(n, 0.0), s2(n, 0.0) {}
    void add(std::size_t j, double x) {
        s[j] += x;
        s2[j] += x * x;
    }
};

Sums merge(const std::vector<Sums>& parts) {
    Sums out(parts.front().s.size());
    for (const auto& p : parts)
        for (std::size_t j = 0; j < out.s.size(); ++j) {
            out.s[j] += p.s[j];
            out.s2[j] += p.s2[j];
        }
    return out;
}

std::pair<double, double> mean_se(const Sums& s, std::size_t j, std::uint64_t n) {
    const double nn = static_cast<double>(n), m = s.s[j] / nn;
    const double var = std::max(0.0, (s.s2[j] - nn * m * m) / (nn - 1.0));
    return {m, std::sqrt(var / nn)};
}

void slice_test(const DisttestOptions& o, Context& ctx) {
    const auto ensemble = parse_ensemble(o.ensemble);
    if (ensemble != Ensemble::R && ensemble != Ensemble::Rprime && ensemble != Ensemble::uict)
        throw DomainError("slice test needs R, Rprime or uict");
    if (o.bins < 2) throw DomainError("bins must be at least 2");
    const OffspringSampler sampler(ctx.distribution());
    if (!geometric_law(sampler.distribution()))
        throw DomainError("slice laws are tabulated for the geometric law only");
    // R and uict slices are |S_{n-1}| + |S_n| >= 2, R' slices are |D_n| >= 1.
    const std::uint64_t offset = ensemble == Ensemble::Rprime ? 1 : 2;
    auto& t = ctx.add_table("slice", {"ensemble", "level", "samples", "mean", "expected_mean", "statistic", "dof",
                                      "p_value"});
    for (const auto n : positive_list(o.level, "level", 100'000)) {
        if (n < 2) throw DomainError("slice laws start at level 2");
        using Counts = std::vector<std::uint64_t>;
        const auto parts = chunked(o.samples, ctx, Counts(o.bins + 1, 0), [&](Counts& c, Rng& rng) {
            std::uint64_t v = 0;
            if (ensemble == Ensemble::R) v = sample_reduced_R(n, sampler, rng)[n - 1];
            else if (ensemble == Ensemble::Rprime) v = sample_reduced_Rprime(n - 1, sampler, rng)[n - 2];
            else {
                const auto lv = sample_uict_level_sizes(n, sampler, rng);
                v = lv[n - 1] + lv[n];
            }
            if (v < offset) throw NumericalGuardError("slice below its minimum size");
            c[std::min<std::uint64_t>(v - offset, o.bins)] += 1;
        });
        Counts counts(o.bins + 1, 0);
        double total = 0.0;
        for (const auto& p : parts)
            for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += p[j];
        for (std::size_t j = 0; j < counts.size(); ++j) total += static_cast<double>(j) * counts[j];
        // Category j is value offset + j; the last category holds the tail.
        std::vector<double> probs(o.bins + 1);
        for (std::uint64_t j = 0; j < o.bins; ++j)
            probs[j] = slice_tail_prob(ensemble, n, offset + j - 1) - slice_tail_prob(ensemble, n, offset + j);
        probs[o.bins] = slice_tail_prob(ensemble, n, offset + o.bins - 1);
        const auto chi = chi_square_test(counts, probs);
        // Mean of the NegBin(2, p) part is 2(1 - p)/p (capped samples aside).
        const double p = ensemble == Ensemble::Rprime ? 1.0 / n : 1.0 / (2.0 * n);
        t.add_row({std::string(ensemble_name(ensemble)), as_int(n), as_int(o.samples),
                   total / static_cast<double>(o.samples) + static_cast<double>(offset),
                   2.0 * (1.0 - p) / p + static_cast<double>(offset), chi.statistic, as_int(chi.dof), chi.p_value});
    }
}

void moments_test(const DisttestOptions& o, Context& ctx) {
    const auto dist = ctx.distribution();
    const OffspringSampler sampler(dist);
    const auto ks = positive_list(o.k, "k", 10'000);
    const std::uint32_t k_max = *std::max_element(ks.begin(), ks.end());
    const std::size_t m = ks.size();
    // Columns: GW ball, Kesten level, Kesten ball for each k.
    const auto sums = merge(chunked(o.samples, ctx, Sums(3 * m), [&](Sums& s, Rng& rng) {
        const auto gw = sample_gw_levels(sampler, k_max, rng);
        const auto ks_lv = sample_kesten_levels(sampler, k_max, rng);
        for (std::size_t j = 0; j < m; ++j) {
            s.add(j, static_cast<double>(ball_edges_from_levels(gw, ks[j])));
            s.add(m + j, static_cast<double>(ks_lv[ks[j]]));
            s.add(2 * m + j, static_cast<double>(ball_edges_from_levels(ks_lv, ks[j])));
        }
    }));
    auto& t = ctx.add_table("moments", {"quantity", "k", "mean", "se", "exact", "z_score"});
    const char* names[] = {"ball_gw", "level_infinite", "ball_infinite"};
    for (std::size_t q = 0; q < 3; ++q)
        for (std::size_t j = 0; j < m; ++j) {
            const auto f = moment_formulas(dist, ks[j]);
            const double exact = q == 0 ? f.ball_mean_gw : q == 1 ? f.level_mean_infinite : f.ball_mean_infinite;
            const auto [mu, se] = mean_se(sums, q * m + j, o.samples);
            t.add_row({std::string(names[q]), as_int(ks[j]), mu, se, exact, z_score(mu, exact, se)});
        }
}

void height_test(const DisttestOptions& o, Context& ctx) {
    const auto dist = ctx.distribution();
    if (!geometric_law(dist)) throw DomainError("the exact height tail is tabulated for the geometric law only");
    const OffspringSampler sampler(dist);
    const auto rs = positive_list(o.radii, "R", 1'000'000);
    const std::uint32_t r_max = *std::max_element(rs.begin(), rs.end());
    using Counts = std::vector<std::uint64_t>;
    const auto parts = chunked(o.samples, ctx, Counts(rs.size(), 0), [&](Counts& c, Rng& rng) {
        const auto lv = sample_gw_levels(sampler, r_max + 1, rng);
        for (std::size_t j = 0; j < rs.size(); ++j)
            if (lv[rs[j] + 1] > 0) c[j] += 1;  // a vertex at depth R + 1
    });
    auto& t = ctx.add_table("height", {"R", "p_emp", "se", "exact", "R_times_p", "leading", "z_score"});
    const double n = static_cast<double>(o.samples);
    for (std::size_t j = 0; j < rs.size(); ++j) {
        double hits = 0.0;
        for (const auto& p : parts) hits += static_cast<double>(p[j]);
        const double exact = 1.0 / (rs[j] + 1.0), p_emp = hits / n;
        const double se = std::sqrt(exact * (1.0 - exact) / n);
        t.add_row({as_int(rs[j]), p_emp, se, exact, rs[j] * p_emp, rs[j] * moment_formulas(dist, rs[j]).height_tail_leading,
                   (p_emp - exact) / se});
    }
}

void ballgf_test(const DisttestOptions& o, Context& ctx) {
    const auto dist = ctx.distribution();
    const OffspringSampler sampler(dist);
    const auto rs = positive_list(o.radii, "R", 100'000);
    const std::uint32_t r_max = *std::max_element(rs.begin(), rs.end());
    if (!(o.z >= 0.0 && o.z <= 1.0)) throw DomainError("z must lie in [0, 1]");
    const auto sums = merge(chunked(o.samples, ctx, Sums(rs.size()), [&](Sums& s, Rng& rng) {
        const auto lv = sample_gw_levels(sampler, r_max, rng);
        for (std::size_t j = 0; j < rs.size(); ++j)
            s.add(j, std::pow(o.z, static_cast<double>(ball_edges_from_levels(lv, rs[j]))));
    }));
    auto& t = ctx.add_table("ballgf", {"R", "z", "empirical", "se", "f_R", "z_score", "f_R_prime_at_1"});
    for (std::size_t j = 0; j < rs.size(); ++j) {
        const auto [mu, se] = mean_se(sums, j, o.samples);
        const double f = f_R_eval(dist, rs[j], o.z);
        t.add_row({as_int(rs[j]), o.z, mu, se, f, z_score(mu, f, se), f_R_derivative(dist, rs[j], 1.0)});
    }
}

void uniform_test(const DisttestOptions& o, Context& ctx) {
    if (o.area < 1 || o.area > 12) throw DomainError("uniformity test needs N in [1, 12]");
    const auto n = static_cast<std::uint32_t>(o.area);
    const auto all = enumerate_cts(n);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < all.size(); ++i) index.emplace(serialize_ct(all[i]), i);
    const auto dist = ctx.distribution();
    using Counts = std::vector<std::uint64_t>;
    const auto parts = chunked(o.samples, ctx, Counts(all.size(), 0), [&](Counts& c, Rng& rng) {
        const auto it = index.find(serialize_ct(sample_ct_fixed_area(n, dist, rng)));
        if (it == index.end()) throw NumericalGuardError("sampled triangulation missing from the enumeration");
        c[it->second] += 1;
    });
    Counts counts(all.size(), 0);
    for (const auto& p : parts)
        for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += p[j];
    const auto chi = chi_square_test(counts, std::vector<double>(all.size(), 1.0 / static_cast<double>(all.size())));
    auto& t = ctx.add_table("uniform", {"N", "triangulations", "samples", "min_count", "max_count", "statistic", "dof",
                                        "p_value"});
    t.add_row({as_int(n), as_int(all.size()), as_int(o.samples),
               as_int(*std::min_element(counts.begin(), counts.end())),
               as_int(*std::max_element(counts.begin(), counts.end())), chi.statistic, as_int(chi.dof), chi.p_value});
}

// |S_{i+1}| = sum over tree level i + 1 of (degree - 1).
bool sum_rule(const CausalTriangulation& ct, const PlanarTree& t) {
    for (std::uint32_t i = 0; i < ct.top(); ++i) {
        std::uint64_t s = 0;
        const std::uint64_t b = t.level_begin(i + 1);
        for (std::uint64_t v = b; v < b + t.level_size(i + 1); ++v) s += t.degree(v) - 1;
        if (s != ct.level_size(i + 1)) return false;
    }
    return true;
}

void bijection_test(const DisttestOptions& o, Context& ctx) {
    if (o.max_area < 2 || o.max_area > 24) throw DomainError("max-area must lie in [2, 24]");
    if (o.max_edges < 3) throw DomainError("max-edges must be at least 3");
    auto& t = ctx.add_table("bijection", {"check", "cases", "failures"});

    std::int64_t ct_cases = 0, ct_fail = 0, tree_cases = 0, tree_fail = 0, rule_cases = 0, rule_fail = 0;
    for (std::uint32_t n = 1; 2 * n <= o.max_area; ++n) {
        for (const auto& ct : enumerate_cts_by_slices(n)) {
            const auto tree = beta(ct);
            ++ct_cases;
            if (!(beta_inv(tree) == ct) || ct_area(ct) != 2 * n) ++ct_fail;
            ++rule_cases;
            if (!sum_rule(ct, tree)) ++rule_fail;
        }
        for (const auto& tree : enumerate_trees(n + 1)) {
            const auto ct = beta_inv(tree);
            ++tree_cases;
            if (!(beta(ct) == tree)) ++tree_fail;
            ++rule_cases;
            if (!sum_rule(ct, tree)) ++rule_fail;
        }
    }
    t.add_row({std::string("exhaustive_ct_round_trip"), ct_cases, ct_fail});
    t.add_row({std::string("exhaustive_tree_round_trip"), tree_cases, tree_fail});

    // Random size-conditioned trees with 2..max_edges edges; trees of height
    // one have no triangulation image and are counted separately.
    struct Tally {
        std::int64_t cases = 0, failures = 0, rule_cases = 0, rule_failures = 0, flat = 0;
    };
    const auto dist = ctx.distribution();
    const auto parts = chunked(o.random, ctx, Tally{}, [&](Tally& a, Rng& rng) {
        const std::uint64_t n = 2 + rng.below64(o.max_edges - 1);
        const auto tree = sample_gw_tree_conditioned(dist, n, rng);
        if (tree.height() < 2) {
            ++a.flat;
            return;
        }
        const auto ct = beta_inv(tree);
        ++a.cases;
        if (!(beta(ct) == tree) || !(beta_inv(beta(ct)) == ct) || ct_area(ct) != 2 * (n - 1)) ++a.failures;
        ++a.rule_cases;
        if (!sum_rule(ct, tree)) ++a.rule_failures;
    });
    Tally sum;
    for (const auto& p : parts) {
        sum.cases += p.cases;
        sum.failures += p.failures;
        sum.rule_cases += p.rule_cases;
        sum.rule_failures += p.rule_failures;
        sum.flat += p.flat;
    }
    t.add_row({std::string("random_round_trip"), sum.cases, sum.failures});
    t.add_row({std::string("random_height_one_skipped"), sum.flat, std::int64_t{0}});
    t.add_row({std::string("sum_rule"), rule_cases + sum.rule_cases, rule_fail + sum.rule_failures});

    std::int64_t cat_fail = 0, cat_cases = 0;
    for (std::uint32_t n = 1; n <= 10; ++n) {
        ++cat_cases;
        if (enumerate_cts(n).size() != catalan(n)) ++cat_fail;
    }
    t.add_row({std::string("catalan_count"), cat_cases, cat_fail});
}

}  // namespace

void run_disttest(const DisttestOptions& o, Context& ctx) {
    if (o.test == "slice") slice_test(o, ctx);
    else if (o.test == "moments") moments_test(o, ctx);
    else if (o.test == "height") height_test(o, ctx);
    else if (o.test == "ballgf") ballgf_test(o, ctx);
    else if (o.test == "uniform") uniform_test(o, ctx);
    else if (o.test == "bijection") bijection_test(o, ctx);
    else throw DomainError("unknown test '" + o.test + "'");
}

}  // namespace uict::cli
