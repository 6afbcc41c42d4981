#include "uict/exact.hpp"

#include <cmath>
#include <limits>

#include "uict/error.hpp"

namespace uict {

namespace {

void check_fugacity(double g) {
    if (!(g > 0.0 && g <= 0.5)) throw DomainError("fugacity g must lie in (0, 1/2]");
}

// log n! table, extended on demand.
class LogFactorial {
public:
    long double operator()(std::uint64_t n) {
        while (table_.size() <= n) {
            const auto m = table_.size();
            table_.push_back(table_.back() + std::log(static_cast<long double>(m)));
        }
        return table_[n];
    }
    long double log_binom(std::uint64_t n, std::uint64_t k) { return (*this)(n) - (*this)(k) - (*this)(n - k); }

private:
    std::vector<long double> table_{0.0L};
};

// Transfer summation over (l_1..l_K) in [1, cutoff]^K of
//   g * g^{2 sum l} * prod_k C(l_k + l_{k+1} - 1, l_k - 1) * (l_mark if mark > 0)
// where mark is the level whose size is inserted as a factor.
long double transfer_sum(double g, std::uint32_t levels, std::uint32_t cutoff, std::uint32_t mark, LogFactorial& lf) {
    const long double log_g2 = 2.0L * std::log(static_cast<long double>(g));
    std::vector<long double> v(cutoff + 1, 0.0L), w(cutoff + 1, 0.0L);
    for (std::uint32_t l = 1; l <= cutoff; ++l) v[l] = std::exp(log_g2 * l) * (mark == 1 ? l : 1);
    for (std::uint32_t k = 2; k <= levels; ++k) {
        for (std::uint32_t lp = 1; lp <= cutoff; ++lp) {
            long double s = 0.0L;
            for (std::uint32_t l = 1; l <= cutoff; ++l) {
                if (v[l] == 0.0L) continue;
                s += v[l] * std::exp(lf.log_binom(l + lp - 1, l - 1) + log_g2 * lp);
            }
            w[lp] = s * (mark == k ? lp : 1);
        }
        std::swap(v, w);
    }
    long double total = 0.0L;
    for (std::uint32_t l = 1; l <= cutoff; ++l) total += v[l];
    return static_cast<long double>(g) * total;
}

// Grow the cutoff until the extrapolated tail of f(cutoff) is below tol.
template <class F>
OracleValue extrapolate(F f, long double tol, std::uint32_t max_cutoff) {
    std::uint32_t m = 16;
    long double a = f(m), b = f(2 * m), c = f(3 * m);
    for (;;) {
        const long double d1 = b - a, d2 = c - b;
        long double bound = std::numeric_limits<long double>::infinity();
        if (d2 == 0.0L) {
            bound = 0.0L;
        } else if (d1 != 0.0L) {
            const long double r = d2 / d1;
            if (r > 0.0L && r < 1.0L) bound = std::fabs(d2) * r / (1.0L - r);
        }
        if (bound < tol) return {c, bound, 3 * m};
        if (3 * (m + m / 2) > max_cutoff)
            throw NumericalGuardError("oracle cutoff too small to certify the truncation error");
        m += m / 2;
        a = f(m);
        b = f(2 * m);
        c = f(3 * m);
    }
}

}  // namespace

std::vector<long double> x_seq(double g, std::uint64_t n) {
    check_fugacity(g);
    if (n == 0) throw DomainError("x_seq needs n >= 1");
    std::vector<long double> x(n);
    const long double g2 = static_cast<long double>(g) * g;
    x[0] = g2;
    for (std::uint64_t k = 1; k < n; ++k) {
        const long double denom = 1.0L - x[k - 1];
        if (!(denom > 0.0L)) throw NumericalGuardError("X_k recursion diverged");
        x[k] = g2 / denom;
    }
    return x;
}

double x_fixed_point(double g) {
    check_fugacity(g);
    return (1.0 - std::sqrt(1.0 - 4.0 * g * g)) / 2.0;
}

long double partition_height(double g, std::uint64_t n) {
    const auto x = x_seq(g, n);
    long double z = g;
    for (const auto xk : x) z *= xk / (1.0L - xk);
    return z;
}

long double partition_sum(double g, std::uint64_t n_max) {
    const auto x = x_seq(g, n_max);
    long double z = g, total = 0.0L;
    for (const auto xk : x) {
        z *= xk / (1.0L - xk);
        total += z;
    }
    return total;
}

OracleValue partition_oracle(double g, std::uint32_t n, long double tol, std::uint32_t max_cutoff) {
    check_fugacity(g);
    if (n == 0) throw DomainError("partition oracle needs n >= 1");
    LogFactorial lf;
    return extrapolate([&](std::uint32_t m) { return transfer_sum(g, n, m, 0, lf); }, tol, max_cutoff);
}

double girth_closed(std::uint32_t n) {
    if (n == 0) throw DomainError("girth needs n >= 1");
    const double nn = n;
    return nn + 0.25 + 0.25 / (2.0 * nn + 1.0);
}

OracleValue girth_oracle(std::uint32_t n, long double tol, std::uint32_t max_cutoff) {
    if (n == 0) throw DomainError("girth needs n >= 1");
    // Height-2n triangulations have real levels S_1..S_{2n-1}; the middle is S_n.
    const std::uint32_t levels = 2 * n - 1;
    LogFactorial lf;
    return extrapolate(
        [&](std::uint32_t m) {
            return transfer_sum(0.5, levels, m, n, lf) / transfer_sum(0.5, levels, m, 0, lf);
        },
        tol, max_cutoff);
}

MomentFormulas moment_formulas(const OffspringDistribution& dist, std::uint32_t k) {
    if (!dist.critical()) throw DomainError("moment formulas need a critical offspring law");
    if (k == 0) throw DomainError("moment formulas need k >= 1");
    const double s = dist.second_factorial_moment(), kk = k;
    return {(kk - 1.0) * s + 1.0, kk, 0.5 * kk * (kk - 1.0) * s + kk, 2.0 / (s * kk)};
}

double f_R_eval(const OffspringDistribution& dist, std::uint32_t radius, double z) {
    if (radius == 0) throw DomainError("radius must be at least 1");
    if (!(z >= 0.0)) throw DomainError("z must be nonnegative");
    double fk = z;
    for (std::uint32_t r = 1; r < radius; ++r) {
        if (!(fk < dist.radius())) throw DomainError("z outside the domain of f_R: iteration diverged");
        fk = z * pgf(dist, fk, 0);
        if (!std::isfinite(fk)) throw DomainError("z outside the domain of f_R: iteration diverged");
    }
    return fk;
}

double f_R_derivative(const OffspringDistribution& dist, std::uint32_t radius, double z) {
    if (radius == 0) throw DomainError("radius must be at least 1");
    double fk = z, dk = 1.0;
    for (std::uint32_t r = 1; r < radius; ++r) {
        if (!(fk < dist.radius())) throw DomainError("z outside the domain of f_R: iteration diverged");
        const double f0 = pgf(dist, fk, 0), f1 = pgf(dist, fk, 1);
        dk = f0 + z * f1 * dk;
        fk = z * f0;
    }
    return dk;
}

double g_R_eval(const OffspringDistribution& dist, std::uint32_t radius, double z) {
    const double fr = f_R_eval(dist, radius, z);
    if (!(fr < dist.radius())) throw DomainError("z outside the domain of g_R");
    return pgf(dist, fr, 1);
}

std::uint64_t catalan(std::uint32_t n) {
    if (n > 30) throw DomainError("catalan(N) is exact only for N <= 30");
    std::uint64_t c = 1;
    for (std::uint32_t k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
    return c;
}

}  // namespace uict
