#include "uict/offspring.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "uict/error.hpp"

namespace uict {

namespace {

constexpr double kNormTol = 1e-12;

}  // namespace

OffspringDistribution OffspringDistribution::finite(std::vector<double> probs, std::string name) {
    OffspringDistribution d;
    d.head_ = std::move(probs);
    d.kind_ = TailKind::finite_support;
    d.name_ = std::move(name);
    d.validate_and_cache();
    return d;
}

OffspringDistribution OffspringDistribution::with_geometric_tail(std::vector<double> head, double tail_first,
                                                                 double ratio, std::string name) {
    OffspringDistribution d;
    d.head_ = std::move(head);
    d.kind_ = TailKind::geometric_tail;
    d.tail_first_ = tail_first;
    d.ratio_ = ratio;
    d.name_ = std::move(name);
    d.validate_and_cache();
    return d;
}

void OffspringDistribution::validate_and_cache() {
    if (kind_ == TailKind::geometric_tail) {
        if (!(ratio_ > 0.0 && ratio_ < 1.0)) throw DomainError("geometric tail ratio must lie in (0, 1)");
        if (!(tail_first_ > 0.0)) throw DomainError("geometric tail must carry positive mass");
    }
    double total = 0.0, mean = 0.0, fact2 = 0.0;
    bool branching = false;
    for (std::size_t n = 0; n < head_.size(); ++n) {
        const double p = head_[n];
        if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("offspring probabilities must be finite and nonnegative");
        total += p;
        mean += static_cast<double>(n) * p;
        fact2 += static_cast<double>(n) * static_cast<double>(n - (n > 0 ? 1 : 0)) * p;
        if (n >= 2 && p > 0.0) branching = true;
    }
    if (kind_ == TailKind::geometric_tail) {
        // sum_j c r^j (m+j)^{(k)} in closed form, m = tail start.
        const double m = static_cast<double>(head_.size());
        const double c = tail_first_, r = ratio_, q = 1.0 - r;
        total += c / q;
        mean += c * (m / q + r / (q * q));
        // E[(m+J)(m+J-1)] with weights c r^j.
        const double s0 = 1.0 / q, s1 = r / (q * q), s2 = r * (1.0 + r) / (q * q * q);
        fact2 += c * (m * (m - 1.0) * s0 + (2.0 * m - 1.0) * s1 + s2);
        branching = true;
    }
    if (std::abs(total - 1.0) > kNormTol) {
        std::ostringstream os;
        os << "offspring probabilities sum to " << total << ", not 1";
        throw DomainError(os.str());
    }
    if (!(prob(0) > 0.0)) throw DomainError("p_0 must be positive");
    if (!branching) throw DomainError("need p_i > 0 for some i >= 2");
    mean_ = mean;
    second_factorial_ = fact2;
}

double OffspringDistribution::prob(std::size_t n) const noexcept {
    if (n < head_.size()) return head_[n];
    if (kind_ == TailKind::finite_support) return 0.0;
    return tail_first_ * std::pow(ratio_, static_cast<double>(n - head_.size()));
}

bool OffspringDistribution::critical() const noexcept { return std::abs(mean_ - 1.0) < kNormTol; }

double OffspringDistribution::radius() const noexcept {
    return kind_ == TailKind::finite_support ? std::numeric_limits<double>::infinity() : 1.0 / ratio_;
}

OffspringDistribution make_geometric() {
    return OffspringDistribution::with_geometric_tail({}, 0.5, 0.5, "geometric");
}

OffspringDistribution make_dimer(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("dimer fugacity a must be positive");
    const double g = a / (1.0 + a);
    std::ostringstream name;
    name << "dimer(a=" << a << ")";
    return OffspringDistribution::with_geometric_tail({g}, g * g / (a * a), g, name.str());
}

double pgf(const OffspringDistribution& dist, double x, int order) {
    if (order < 0 || order > 2) throw DomainError("pgf order must be 0, 1 or 2");
    if (!(std::abs(x) < dist.radius())) throw DomainError("pgf argument outside the disk of convergence");
    const auto& head = dist.head();
    double value = 0.0;
    // Horner on the head, differentiated term by term.
    for (std::size_t i = head.size(); i-- > 0;) {
        const double n = static_cast<double>(i);
        double coef = head[i];
        if (order >= 1) coef *= n;
        if (order >= 2) coef *= (n - 1.0);
        if (static_cast<int>(i) >= order) value += coef * std::pow(x, static_cast<double>(i - order));
    }
    if (dist.tail_kind() == TailKind::geometric_tail) {
        // T(x) = c x^m / (1 - r x), u = 1 / (1 - r x).
        const double c = dist.tail_first(), r = dist.tail_ratio();
        const double m = static_cast<double>(dist.tail_start());
        const double u = 1.0 / (1.0 - r * x);
        auto xp = [x](double e) { return e < 0.0 ? 0.0 : std::pow(x, e); };
        switch (order) {
        case 0:
            value += c * xp(m) * u;
            break;
        case 1:
            value += c * ((m > 0 ? m * xp(m - 1) : 0.0) * u + xp(m) * r * u * u);
            break;
        default:
            value += c * ((m > 1 ? m * (m - 1) * xp(m - 2) : 0.0) * u +
                          (m > 0 ? 2.0 * m * r * xp(m - 1) : 0.0) * u * u + 2.0 * r * r * xp(m) * u * u * u);
            break;
        }
    }
    return value;
}

OffspringSampler::OffspringSampler(const OffspringDistribution& dist) : dist_(dist) {
    const auto& head = dist_.head();
    double acc = 0.0, bacc = 0.0;
    for (std::size_t n = 0; n < head.size(); ++n) {
        acc += head[n];
        bacc += static_cast<double>(n) * head[n];
        head_cdf_.push_back(acc);
        biased_head_cdf_.push_back(bacc);
    }
    if (dist_.tail_kind() == TailKind::geometric_tail) {
        const double c = dist_.tail_first(), r = dist_.tail_ratio(), q = 1.0 - r;
        const double m = static_cast<double>(dist_.tail_start());
        biased_tail_plain_ = c * m / q;
        biased_tail_total_ = biased_tail_plain_ + c * r / (q * q);
        log_ratio_ = std::log(r);
        half_ratio_ = (r == 0.5);
    }
}

std::uint64_t OffspringSampler::geometric(Rng& rng) const {
    if (half_ratio_) {
        std::uint64_t count = 0;
        for (;;) {
            const std::uint64_t w = rng();
            if (w != 0) return count + static_cast<std::uint64_t>(std::countr_zero(w));
            count += 64;
        }
    }
    return static_cast<std::uint64_t>(std::floor(std::log(rng.uniform_open_zero()) / log_ratio_));
}

std::uint32_t OffspringSampler::operator()(Rng& rng) const {
    if (head_cdf_.empty()) return static_cast<std::uint32_t>(geometric(rng));
    const double u = rng.uniform();
    for (std::size_t n = 0; n < head_cdf_.size(); ++n)
        if (u < head_cdf_[n]) return static_cast<std::uint32_t>(n);
    if (dist_.tail_kind() == TailKind::finite_support) return static_cast<std::uint32_t>(head_cdf_.size() - 1);
    return static_cast<std::uint32_t>(dist_.tail_start() + geometric(rng));
}

std::uint32_t OffspringSampler::size_biased(Rng& rng) const {
    const double total = (biased_head_cdf_.empty() ? 0.0 : biased_head_cdf_.back()) + biased_tail_total_;
    const double u = rng.uniform() * total;
    for (std::size_t n = 0; n < biased_head_cdf_.size(); ++n)
        if (u < biased_head_cdf_[n]) return static_cast<std::uint32_t>(n);
    if (dist_.tail_kind() == TailKind::finite_support) return static_cast<std::uint32_t>(biased_head_cdf_.size() - 1);
    const double in_tail = u - (biased_head_cdf_.empty() ? 0.0 : biased_head_cdf_.back());
    const auto m0 = static_cast<std::uint64_t>(dist_.tail_start());
    // Weight (m0 + j) c r^j splits into m0 c r^j (plain geometric) and
    // j c r^j, for which j - 1 is a sum of two geometrics.
    if (in_tail < biased_tail_plain_) return static_cast<std::uint32_t>(m0 + geometric(rng));
    return static_cast<std::uint32_t>(m0 + 1 + geometric(rng) + geometric(rng));
}

std::uint64_t OffspringSampler::sum(std::uint64_t count, Rng& rng) const {
    if (count <= 32) {
        std::uint64_t total = 0;
        for (std::uint64_t i = 0; i < count; ++i) total += (*this)(rng);
        return total;
    }
    // Multinomial split over head categories, then the tail block, whose
    // excess over the tail start is negative binomial.
    const auto& head = dist_.head();
    const bool has_tail = dist_.tail_kind() == TailKind::geometric_tail;
    std::uint64_t remaining = count, total = 0;
    double mass_left = 1.0;
    for (std::size_t n = 0; n < head.size() && remaining > 0; ++n) {
        if (!has_tail && n + 1 == head.size()) {
            total += n * remaining;
            remaining = 0;
            break;
        }
        const double p = std::min(1.0, head[n] / mass_left);
        std::uint64_t k = 0;
        if (p >= 1.0) {
            k = remaining;
        } else if (p > 0.0) {
            std::binomial_distribution<std::uint64_t> binom(remaining, p);
            k = binom(rng);
        }
        total += n * k;
        remaining -= k;
        mass_left -= head[n];
        if (mass_left <= 0.0) mass_left = std::numeric_limits<double>::min();
    }
    if (remaining > 0 && has_tail) {
        total += remaining * dist_.tail_start();
        std::negative_binomial_distribution<std::uint64_t> nb(remaining, 1.0 - dist_.tail_ratio());
        total += nb(rng);
    }
    return total;
}

}  // namespace uict
