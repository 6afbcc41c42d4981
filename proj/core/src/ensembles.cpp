#include "uict/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "uict/error.hpp"
#include "uict/tree_sampling.hpp"

namespace uict {

Ensemble parse_ensemble(std::string_view name) {
    if (name == "gw") return Ensemble::gw;
    if (name == "kesten") return Ensemble::kesten;
    if (name == "uict" || name == "ct" || name == "CT") return Ensemble::uict;
    if (name == "fixed_area") return Ensemble::fixed_area;
    if (name == "R") return Ensemble::R;
    if (name == "Rprime" || name == "R'") return Ensemble::Rprime;
    throw DomainError("unknown ensemble '" + std::string(name) + "'");
}

std::string_view ensemble_name(Ensemble e) {
    switch (e) {
    case Ensemble::gw: return "gw";
    case Ensemble::kesten: return "kesten";
    case Ensemble::uict: return "uict";
    case Ensemble::fixed_area: return "fixed_area";
    case Ensemble::R: return "R";
    case Ensemble::Rprime: return "Rprime";
    }
    return "?";
}

CausalTriangulation sample_uict(std::uint32_t height, const OffspringSampler& sampler, Rng& rng) {
    if (height < 2) throw DomainError("UICT window height must be at least 2");
    const auto st = sample_kesten_tree(sampler, height + 1, rng);
    return beta_inv(st.tree, false);
}

std::vector<std::uint64_t> sample_uict_level_sizes(std::uint32_t height, const OffspringSampler& sampler, Rng& rng) {
    const auto d = sample_kesten_levels(sampler, height + 1, rng);
    return {d.begin() + 1, d.end()};
}

CausalTriangulation sample_ct_fixed_area(std::uint64_t n, const OffspringDistribution& dist, Rng& rng) {
    if (n == 0) throw DomainError("area parameter N must be at least 1");
    return beta_inv(sample_gw_tree_conditioned(dist, n + 1, rng), true);
}

ReducedGraph gamma_R_from_levels(const std::vector<std::uint64_t>& s) {
    if (s.size() < 2) throw DomainError("need at least the levels S_0 and S_1");
    ReducedGraph rg;
    const std::size_t top = s.size() - 1;
    rg.multiplicities.resize(top);
    rg.multiplicities[0] = s[1];
    for (std::size_t k = 1; k < top; ++k) rg.multiplicities[k] = s[k] + s[k + 1];
    return rg;
}

ReducedGraph gamma_R(const CausalTriangulation& ct) { return gamma_R_from_levels(ct.level_sizes()); }

ReducedGraph gamma_Rprime_from_levels(const std::vector<std::uint64_t>& d) {
    if (d.size() < 4) throw DomainError("tree too short for the R' reduction (height >= 3 needed)");
    ReducedGraph rg;
    for (std::size_t k = 2; k < d.size() && d[k] > 0; ++k) rg.multiplicities.push_back(d[k]);
    return rg;
}

ReducedGraph gamma_Rprime(const PlanarTree& tree) {
    const auto stats = tree_stats(tree);
    return gamma_Rprime_from_levels(stats.level_sizes);
}

ReducedGraph sample_reduced_R(std::uint32_t length, const OffspringSampler& sampler, Rng& rng) {
    if (length < 1) throw DomainError("reduced graph length must be positive");
    return gamma_R_from_levels(sample_uict_level_sizes(length, sampler, rng));
}

ReducedGraph sample_reduced_Rprime(std::uint32_t length, const OffspringSampler& sampler, Rng& rng) {
    if (length < 1) throw DomainError("reduced graph length must be positive");
    auto rg = gamma_Rprime_from_levels(sample_kesten_levels(sampler, std::max<std::uint32_t>(length + 1, 3), rng));
    rg.multiplicities.resize(length);
    return rg;
}

double slice_tail_prob(Ensemble ensemble, std::uint32_t n, std::uint64_t k) {
    if (n < 2) throw DomainError("slice laws hold for n >= 2");
    const double kk = static_cast<double>(k), nn = static_cast<double>(n);
    switch (ensemble) {
    case Ensemble::R:
    case Ensemble::uict:
        return (kk + 2.0 * nn - 1.0) / (2.0 * nn - 1.0) * std::pow(1.0 - 1.0 / (2.0 * nn), kk);
    case Ensemble::Rprime:
        return (kk + nn) / nn * std::pow(1.0 - 1.0 / nn, kk);
    default:
        throw DomainError("slice laws are available for R, Rprime and uict");
    }
}

void write_reduced(std::ostream& out, const ReducedGraph& rg) {
    out << "RGRAPH 1\n" << rg.length() << '\n';
    for (std::size_t k = 0; k < rg.length(); ++k) out << (k ? " " : "") << rg[k];
    out << '\n';
}

ReducedGraph read_reduced(std::istream& in) {
    std::string magic;
    int version = 0;
    std::string token;
    // Skip comment lines before the header.
    while (in >> std::ws && in.peek() == '#') std::getline(in, token);
    if (!(in >> magic >> version) || magic != "RGRAPH" || version != 1) throw FormatError("expected 'RGRAPH 1' header");
    while (in >> std::ws && in.peek() == '#') std::getline(in, token);
    std::uint64_t h = 0;
    if (!(in >> h)) throw FormatError("missing length");
    ReducedGraph rg;
    rg.multiplicities.reserve(h);
    for (std::uint64_t k = 0; k < h; ++k) {
        long long v = 0;
        if (!(in >> v)) throw FormatError("too few multiplicities");
        if (v <= 0) throw FormatError("multiplicities must be positive");
        rg.multiplicities.push_back(static_cast<std::uint64_t>(v));
    }
    return rg;
}

}  // namespace uict
