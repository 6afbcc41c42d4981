#pragma once

#include <cstdint>
#include <vector>

#include "uict/offspring.hpp"

namespace uict {

// X_1 = g^2, X_{k+1} = g^2 / (1 - X_k), for 0 < g <= 1/2. Iterated in
// extended precision.
std::vector<long double> x_seq(double g, std::uint64_t n);

// Fixed point (1 - sqrt(1 - 4 g^2)) / 2 of the recursion.
double x_fixed_point(double g);

// Partition function of triangulations with n levels above the root,
// g * prod_{k<=n} X_k / (1 - X_k).
long double partition_height(double g, std::uint64_t n);

// sum_{n=1}^{n_max} Z(g; n).
long double partition_sum(double g, std::uint64_t n_max);

// Result of a truncated weighted sum over level sequences (l_1, ..., l_K),
// each l_k capped at `cutoff`. `error_bound` estimates the discarded tail by
// geometric extrapolation of the increments between successive cutoffs.
struct OracleValue {
    long double value = 0;
    long double error_bound = 0;
    std::uint32_t cutoff = 0;
};

// Z(g; n) by direct transfer summation over level sizes.
OracleValue partition_oracle(double g, std::uint32_t n, long double tol = 1e-12L, std::uint32_t max_cutoff = 4096);

// Mean length of the middle cycle S_n on triangulations of height 2n.
double girth_closed(std::uint32_t n);
OracleValue girth_oracle(std::uint32_t n, long double tol = 1e-10L, std::uint32_t max_cutoff = 4096);

struct MomentFormulas {
    double level_mean_infinite;   // <|D_k|> on the Kesten tree
    double ball_mean_gw;          // <|B_k|> on the GW tree
    double ball_mean_infinite;    // <|B_k|> on the Kesten tree
    double height_tail_leading;   // leading term of P(h(T) > k)
};

MomentFormulas moment_formulas(const OffspringDistribution& dist, std::uint32_t k);

// f_1(z) = z, f_{R+1}(z) = z f(f_R(z)): the pgf of the GW ball size |B_R|.
double f_R_eval(const OffspringDistribution& dist, std::uint32_t radius, double z);
// d f_R / dz by the chain rule.
double f_R_derivative(const OffspringDistribution& dist, std::uint32_t radius, double z);
// g_R(z) = f'(f_R(z)).
double g_R_eval(const OffspringDistribution& dist, std::uint32_t radius, double z);

// Catalan number C_N, N <= 30.
std::uint64_t catalan(std::uint32_t n);

}  // namespace uict
