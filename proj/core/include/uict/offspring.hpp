#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "uict/rng.hpp"

namespace uict {

enum class TailKind { finite_support, geometric_tail };

// Offspring law {p_n} of a Galton-Watson process.
//
// Stored as an explicit head p_0..p_{m-1} followed, optionally, by a
// geometric tail p_{m+j} = tail_first * ratio^j. Both the uniform tree law
// p_n = 2^{-(n+1)} and the dimer family fit this form exactly, so pgf
// values and moments are closed-form with no truncation.
class OffspringDistribution {
public:
    static OffspringDistribution finite(std::vector<double> probs, std::string name = "finite");
    static OffspringDistribution with_geometric_tail(std::vector<double> head, double tail_first,
                                                     double ratio, std::string name = "custom");

    double prob(std::size_t n) const noexcept;
    const std::vector<double>& head() const noexcept { return head_; }
    TailKind tail_kind() const noexcept { return kind_; }
    std::size_t tail_start() const noexcept { return head_.size(); }
    double tail_first() const noexcept { return tail_first_; }
    double tail_ratio() const noexcept { return ratio_; }

    double mean() const noexcept { return mean_; }
    double second_factorial_moment() const noexcept { return second_factorial_; }
    bool critical() const noexcept;

    // Radius of convergence of the pgf (infinity for finite support).
    double radius() const noexcept;

    const std::string& name() const noexcept { return name_; }

private:
    OffspringDistribution() = default;
    void validate_and_cache();

    std::vector<double> head_;
    TailKind kind_ = TailKind::finite_support;
    double tail_first_ = 0.0;
    double ratio_ = 0.0;
    double mean_ = 0.0;
    double second_factorial_ = 0.0;
    std::string name_;
};

// p_n = 2^{-(n+1)}: the law behind the uniform infinite planar tree.
OffspringDistribution make_geometric();

// Dimer-weighted law: p_0 = g, p_n = a^{-2} g^{n+1} with g = a / (1 + a).
OffspringDistribution make_dimer(double a);

// f, f' or f'' at x (order 0, 1, 2). Throws DomainError outside the disk of
// convergence.
double pgf(const OffspringDistribution& dist, double x, int order = 0);

// Sampling front-end with cached cumulative tables.
class OffspringSampler {
public:
    explicit OffspringSampler(const OffspringDistribution& dist);

    // Number of children of an ordinary vertex.
    std::uint32_t operator()(Rng& rng) const;

    // Total offspring m of a spine vertex, drawn with probability m p_m.
    std::uint32_t size_biased(Rng& rng) const;

    // Sum of `count` independent offspring draws.
    std::uint64_t sum(std::uint64_t count, Rng& rng) const;

    const OffspringDistribution& distribution() const noexcept { return dist_; }

private:
    std::uint64_t geometric(Rng& rng) const;

    OffspringDistribution dist_;
    std::vector<double> head_cdf_;
    std::vector<double> biased_head_cdf_;
    double biased_tail_plain_ = 0.0;  // weight of m0 + G in the size-biased tail
    double biased_tail_total_ = 0.0;
    double log_ratio_ = 0.0;
    bool half_ratio_ = false;
};

}  // namespace uict
