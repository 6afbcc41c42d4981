#include <algorithm>
#include <cmath>
#include <limits>

#include "context.hpp"
#include "uict/error.hpp"
#include "uict/exact.hpp"
#include "uict/tree_sampling.hpp"
#include "uict/triangulation.hpp"

namespace uict::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::uint32_t as_u32(std::int64_t v, const char* what) {
    if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) throw DomainError(std::string(what) + " out of range");
    return static_cast<std::uint32_t>(v);
}

void xseq_table(const ExactOptions& o, Context& ctx) {
    if (o.k_max == 0) throw DomainError("k-max must be positive");
    const auto x = x_seq(o.g, o.k_max);
    const bool critical = o.g == 0.5;
    const double star = x_fixed_point(o.g);
    auto& t = ctx.add_table("xseq", {"k", "x", "reference", "abs_err", "max_abs_err", "monotone"});
    double worst = 0.0;
    bool monotone = true;
    std::uint64_t next_report = 1;
    for (std::uint64_t i = 0; i < x.size(); ++i) {
        const long double k = static_cast<long double>(i + 1);
        const long double ref = critical ? k / (2 * (k + 1)) : static_cast<long double>(star);
        const double err = static_cast<double>(std::fabs(x[i] - ref));
        if (critical) worst = std::max(worst, err);
        if (i > 0 && x[i] < x[i - 1]) monotone = false;
        if (!(x[i] <= static_cast<long double>(star) + 1e-15L)) monotone = false;
        const bool last = i + 1 == x.size();
        if (i + 1 == next_report || last) {
            t.add_row({static_cast<std::int64_t>(i + 1), static_cast<double>(x[i]), static_cast<double>(ref), err,
                       critical ? worst : nan, static_cast<std::int64_t>(monotone)});
            // 1..10, then 20, 30, .., 100, 200, ..
            const auto step = next_report < 10 ? 1 : static_cast<std::uint64_t>(std::pow(10, std::floor(std::log10(next_report))));
            next_report += step;
        }
    }
}

void partition_table(const ExactOptions& o, Context& ctx) {
    auto& t = ctx.add_table("partition",
                            {"n", "z", "telescoped", "rel_err", "oracle", "oracle_bound", "oracle_abs_err", "cutoff"});
    const bool critical = o.g == 0.5;
    for (const auto nn : parse_int_list(o.n)) {
        const auto n = as_u32(nn, "n");
        if (n == 0) throw DomainError("n must be positive");
        const double z = static_cast<double>(partition_height(o.g, n));
        const double tele = critical ? 1.0 / ((n + 1.0) * (n + 2.0)) : nan;
        double oracle = nan, bound = nan, abs_err = nan;
        std::int64_t cutoff = 0;
        if (n <= o.oracle_max) {
            const auto v = partition_oracle(o.g, n, static_cast<long double>(o.tol));
            oracle = static_cast<double>(v.value);
            bound = static_cast<double>(v.error_bound);
            abs_err = std::abs(oracle - z);
            cutoff = v.cutoff;
        }
        t.add_row({static_cast<std::int64_t>(n), z, tele, critical ? std::abs(z / tele - 1.0) : nan, oracle, bound,
                   abs_err, cutoff});
    }
    auto& s = ctx.add_table("partition_sum", {"n_max", "sum", "limit"});
    const auto ns = parse_int_list(o.n);
    const auto n_max = as_u32(*std::max_element(ns.begin(), ns.end()), "n");
    s.add_row({static_cast<std::int64_t>(n_max), static_cast<double>(partition_sum(o.g, n_max)), critical ? 0.5 : nan});
}

void girth_table(const ExactOptions& o, Context& ctx) {
    auto& t = ctx.add_table("girth", {"n", "closed", "oracle", "abs_err", "error_bound", "cutoff"});
    for (const auto nn : parse_int_list(o.n)) {
        const auto n = as_u32(nn, "n");
        const double closed = girth_closed(n);
        const auto v = girth_oracle(n, static_cast<long double>(o.tol));
        t.add_row({static_cast<std::int64_t>(n), closed, static_cast<double>(v.value),
                   std::abs(static_cast<double>(v.value) - closed), static_cast<double>(v.error_bound),
                   static_cast<std::int64_t>(v.cutoff)});
    }
}

void moments_table(const ExactOptions& o, Context& ctx) {
    const auto dist = ctx.distribution();
    auto& t = ctx.add_table("moments", {"k", "level_mean_infinite", "ball_mean_gw", "ball_mean_infinite",
                                        "height_tail_leading"});
    for (const auto kk : parse_int_list(o.k)) {
        const auto k = as_u32(kk, "k");
        const auto m = moment_formulas(dist, k);
        t.add_row({static_cast<std::int64_t>(k), m.level_mean_infinite, m.ball_mean_gw, m.ball_mean_infinite,
                   m.height_tail_leading});
    }
}

void fr_table(const ExactOptions& o, Context& ctx) {
    const auto dist = ctx.distribution();
    auto& t = ctx.add_table("fR", {"R", "z", "f_R", "f_R_prime", "g_R", "f_R_prime_at_1"});
    const auto zs = parse_real_list(o.z);
    for (const auto rr : parse_int_list(o.radii)) {
        const auto r = as_u32(rr, "R");
        for (const double z : zs)
            t.add_row({static_cast<std::int64_t>(r), z, f_R_eval(dist, r, z), f_R_derivative(dist, r, z),
                       g_R_eval(dist, r, z), f_R_derivative(dist, r, 1.0)});
    }
}

void catalan_table(const ExactOptions& o, Context& ctx) {
    auto& t = ctx.add_table("catalan", {"N", "catalan", "enumerated_cts", "enumerated_trees"});
    for (const auto nn : parse_int_list(o.n)) {
        const auto n = as_u32(nn, "N");
        const auto c = static_cast<std::int64_t>(catalan(n));
        std::int64_t cts = -1, trees = -1;
        if (n >= 1 && n <= 12) cts = static_cast<std::int64_t>(enumerate_cts(n).size());
        if (n >= 1 && n <= 12) trees = static_cast<std::int64_t>(enumerate_trees(n + 1).size());
        t.add_row({static_cast<std::int64_t>(n), c, cts, trees});
    }
}

}  // namespace

void run_exact(const ExactOptions& o, Context& ctx) {
    if (o.table == "xseq") xseq_table(o, ctx);
    else if (o.table == "partition") partition_table(o, ctx);
    else if (o.table == "girth") girth_table(o, ctx);
    else if (o.table == "moments") moments_table(o, ctx);
    else if (o.table == "fR") fr_table(o, ctx);
    else if (o.table == "catalan") catalan_table(o, ctx);
    else throw DomainError("unknown exact table '" + o.table + "'");
}

}  // namespace uict::cli
