#include "uict/tree_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "uict/error.hpp"

namespace uict {

namespace {

// Rotate a child-count sequence with sum N - 1 into the unique cyclic shift
// that is a valid preorder word (cycle lemma): start just after the first
// position where the running sum of (c - 1) attains its minimum.
std::vector<std::uint32_t> cycle_lemma_rotate(const std::vector<std::uint32_t>& counts) {
    const std::size_t n = counts.size();
    std::int64_t running = 0, best = 0;
    std::size_t best_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        running += static_cast<std::int64_t>(counts[i]) - 1;
        if (i == 0 || running < best) {
            best = running;
            best_pos = i + 1;
        }
    }
    std::vector<std::uint32_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = counts[(best_pos + i) % n];
    return out;
}

// Uniform k-subset of {0..n-1} as a sorted index list (Floyd's algorithm).
std::vector<std::uint64_t> random_subset(std::uint64_t n, std::uint64_t k, Rng& rng) {
    std::vector<std::uint64_t> chosen;
    chosen.reserve(k);
    if (2 * k > n) {
        // Cheaper to pick the complement.
        auto complement = random_subset(n, n - k, rng);
        std::size_t j = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            if (j < complement.size() && complement[j] == i) ++j;
            else chosen.push_back(i);
        }
        return chosen;
    }
    std::vector<char> mark(n, 0);
    for (std::uint64_t j = n - k; j < n; ++j) {
        const std::uint64_t t = rng.below64(j + 1);
        const std::uint64_t pick = mark[t] ? j : t;
        mark[pick] = 1;
    }
    for (std::uint64_t i = 0; i < n; ++i)
        if (mark[i]) chosen.push_back(i);
    return chosen;
}

// Uniform composition of `total` into `parts` positive integers.
std::vector<std::uint32_t> random_composition(std::uint64_t total, std::uint64_t parts, Rng& rng) {
    const auto cuts = random_subset(total - 1, parts - 1, rng);
    std::vector<std::uint32_t> out;
    out.reserve(parts);
    std::uint64_t prev = 0;
    for (const auto c : cuts) {
        out.push_back(static_cast<std::uint32_t>(c + 1 - prev));
        prev = c + 1;
    }
    out.push_back(static_cast<std::uint32_t>(total - prev));
    return out;
}

bool is_geometric_half(const OffspringDistribution& d) {
    return d.tail_kind() == TailKind::geometric_tail && d.head().empty() && d.tail_ratio() == 0.5 &&
           d.tail_first() == 0.5;
}

bool is_dimer_shape(const OffspringDistribution& d) {
    return d.tail_kind() == TailKind::geometric_tail && d.head().size() == 1 &&
           std::abs(d.head()[0] - d.tail_ratio()) < 1e-15;
}

}  // namespace

std::optional<PlanarTree> try_sample_gw_tree(const OffspringSampler& sampler, Rng& rng, std::uint64_t node_cap) {
    std::vector<std::uint32_t> counts;
    std::int64_t open = 1;
    while (open > 0) {
        if (counts.size() + 1 >= node_cap) return std::nullopt;
        const std::uint32_t c = sampler(rng);
        counts.push_back(c);
        open += static_cast<std::int64_t>(c) - 1;
    }
    return PlanarTree::from_preorder_counts(counts);
}

PlanarTree sample_gw_tree(const OffspringSampler& sampler, Rng& rng, std::uint64_t node_cap) {
    auto t = try_sample_gw_tree(sampler, rng, node_cap);
    if (!t) throw NumericalGuardError("Galton-Watson tree exceeded the node cap");
    return std::move(*t);
}

std::vector<std::uint64_t> sample_gw_levels(const OffspringSampler& sampler, std::uint32_t depth, Rng& rng) {
    std::vector<std::uint64_t> levels(static_cast<std::size_t>(depth) + 1, 0);
    levels[0] = 1;
    if (depth >= 1) levels[1] = 1;
    for (std::uint32_t k = 1; k < depth && levels[k] > 0; ++k) levels[k + 1] = sampler.sum(levels[k], rng);
    return levels;
}

PlanarTree sample_gw_tree_conditioned(const OffspringDistribution& dist, std::uint64_t n_edges, Rng& rng) {
    if (n_edges == 0) throw DomainError("conditioned tree needs N >= 1");
    if (n_edges == 1) return PlanarTree::from_level_order({1, 0});
    const std::uint64_t n = n_edges;
    std::vector<std::uint32_t> counts;

    if (is_geometric_half(dist)) {
        // Every sequence of N counts summing to N - 1 has the same weight:
        // stars and bars over 2N - 2 slots.
        const auto stars = random_subset(2 * n - 2, n - 1, rng);
        counts.assign(n, 0);
        std::uint64_t part = 0, s = 0;
        for (std::uint64_t slot = 0; slot < 2 * n - 2; ++slot) {
            if (s < stars.size() && stars[s] == slot) {
                ++counts[part];
                ++s;
            } else {
                ++part;
            }
        }
    } else if (is_dimer_shape(dist)) {
        // Weight depends only on the number k of internal vertices:
        // proportional to C(N,k) C(N-2,k-1) a^{-2k}.
        const double log_c = std::log(dist.tail_first() / (dist.tail_ratio() * dist.tail_ratio()));  // -2 log a
        std::vector<double> logw(n);
        double top = -INFINITY;
        for (std::uint64_t k = 1; k < n; ++k) {
            const double kk = static_cast<double>(k), nn = static_cast<double>(n);
            logw[k] = std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) + std::lgamma(nn - 1) -
                      std::lgamma(kk) - std::lgamma(nn - kk) + kk * log_c;
            top = std::max(top, logw[k]);
        }
        double total = 0.0;
        for (std::uint64_t k = 1; k < n; ++k) total += std::exp(logw[k] - top);
        double u = rng.uniform() * total;
        std::uint64_t k = n - 1;
        for (std::uint64_t j = 1; j < n; ++j) {
            u -= std::exp(logw[j] - top);
            if (u < 0.0) {
                k = j;
                break;
            }
        }
        const auto internal = random_subset(n, k, rng);
        const auto sizes = random_composition(n - 1, k, rng);
        counts.assign(n, 0);
        for (std::uint64_t j = 0; j < k; ++j) counts[internal[j]] = sizes[j];
    } else {
        // Generic law: i.i.d. counts conditioned on their sum.
        const OffspringSampler sampler(dist);
        counts.resize(n);
        for (std::uint64_t attempt = 0;; ++attempt) {
            if (attempt > 100'000'000) throw NumericalGuardError("conditioned sampler failed to hit the target size");
            std::uint64_t sum = 0;
            for (auto& c : counts) {
                c = sampler(rng);
                sum += c;
                if (sum > n - 1) break;
            }
            if (sum == n - 1) break;
        }
    }
    return PlanarTree::from_preorder_counts(cycle_lemma_rotate(counts));
}

PlanarTree sample_gw_tree_conditioned_rejection(const OffspringSampler& sampler, std::uint64_t n_edges, Rng& rng,
                                                std::uint64_t max_attempts) {
    if (n_edges == 0) throw DomainError("conditioned tree needs N >= 1");
    for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        auto t = try_sample_gw_tree(sampler, rng, n_edges + 1);
        if (t && t->edge_count() == n_edges) return std::move(*t);
    }
    throw NumericalGuardError("rejection sampler exhausted its attempts");
}

SpineTree sample_kesten_tree(const OffspringSampler& sampler, std::uint32_t height, Rng& rng) {
    if (height < 1) throw DomainError("Kesten tree height must be at least 1");
    std::vector<std::uint32_t> counts{1};
    SpineTree st;
    st.height_cap = height;
    st.spine = {0, 1};
    st.spine_slot = {0};
    std::uint64_t level_begin = 1, level_end = 1;
    std::uint64_t next = 2;  // id of the next vertex to be created
    for (std::uint32_t d = 1; d < height; ++d) {
        level_begin = level_end;
        level_end = next;
        const std::uint64_t spine_here = st.spine[d];
        for (std::uint64_t v = level_begin; v < level_end; ++v) {
            std::uint32_t c = 0;
            if (v == spine_here) {
                c = sampler.size_biased(rng);
                const std::uint32_t slot = rng.below(c);
                st.spine_slot.push_back(slot);
                st.spine.push_back(next + slot);
            } else {
                c = sampler(rng);
            }
            counts.push_back(c);
            next += c;
        }
    }
    // Vertices at depth `height` are left unexpanded.
    counts.resize(next, 0);
    st.tree = PlanarTree::from_level_order(std::move(counts), height);
    return st;
}

std::vector<std::uint64_t> sample_kesten_levels(const OffspringSampler& sampler, std::uint32_t height, Rng& rng) {
    std::vector<std::uint64_t> levels(static_cast<std::size_t>(height) + 1, 0);
    levels[0] = 1;
    if (height >= 1) levels[1] = 1;
    for (std::uint32_t k = 1; k < height; ++k)
        levels[k + 1] = sampler.size_biased(rng) + sampler.sum(levels[k] - 1, rng);
    return levels;
}

std::vector<PlanarTree> enumerate_trees(std::uint32_t n_edges) {
    if (n_edges == 0) throw DomainError("trees need at least one edge");
    if (n_edges > 16) throw DomainError("enumeration limited to N <= 16");
    std::vector<PlanarTree> out;
    std::vector<std::uint32_t> word(n_edges);
    // open = slots still to fill before position i.
    std::function<void(std::uint32_t, std::int64_t)> rec = [&](std::uint32_t i, std::int64_t open) {
        const std::int64_t left = n_edges - i;  // vertices still to place, including this one
        if (i == n_edges) {
            if (open == 0) out.push_back(PlanarTree::from_preorder_counts(word));
            return;
        }
        if (open <= 0) return;
        // After placing c here, open' = open + c - 1 and the remaining left-1
        // vertices can close at most left-1 slots.
        for (std::int64_t c = 0; open + c - 1 <= left - 1; ++c) {
            word[i] = static_cast<std::uint32_t>(c);
            rec(i + 1, open + c - 1);
        }
    };
    rec(0, 1);
    return out;
}

}  // namespace uict
