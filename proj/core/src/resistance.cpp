#include "uict/resistance.hpp"

#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "uict/error.hpp"

namespace uict {

double resistance_reduced(const ReducedGraph& rg, std::size_t k) {
    if (k > rg.length()) throw DomainError("K exceeds the reduced graph length");
    double r = 0.0;
    for (std::size_t j = 0; j < k; ++j) r += 1.0 / static_cast<double>(rg[j]);
    return r;
}

double nash_williams_lower(const CausalTriangulation& ct, std::uint32_t k) {
    if (k > ct.top()) throw DomainError("K exceeds the triangulation window");
    double r = 0.0;
    for (std::uint32_t j = 0; j < k; ++j) r += 1.0 / static_cast<double>(ct.slice_size(j));
    return r;
}

namespace {

struct Network {
    std::size_t nodes = 0;  // node 0 = root, node nodes-1 = top terminal
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

Network build_network(const CausalTriangulation& ct, std::uint32_t k, BoundaryMode mode) {
    Network net;
    const std::uint64_t below = ct.level_begin(k);  // vertices of levels 0..K-1
    const std::uint64_t top_size = ct.level_size(k);
    const bool collapse = mode == BoundaryMode::collapsed;
    // Level-K vertices keep their ids in added_top mode; the terminal comes last.
    net.nodes = collapse ? below + 1 : below + top_size + 1;
    const std::size_t terminal = net.nodes - 1;
    auto node = [&](std::uint64_t v) -> std::size_t {
        if (v < below) return v;
        return collapse ? terminal : v;
    };
    auto add = [&](std::uint64_t a, std::uint64_t b) {
        const auto u = node(a), w = node(b);
        if (u != w) net.edges.emplace_back(u, w);
    };
    for (std::uint32_t lvl = 1; lvl <= k; ++lvl) {
        const std::uint64_t n = ct.level_size(lvl), b = ct.level_begin(lvl);
        if (n == 1) continue;  // a loop carries no current
        for (std::uint64_t i = 0; i < n; ++i) add(b + i, b + (i + 1) % n);
    }
    for (std::uint32_t lvl = 0; lvl < k; ++lvl) {
        const std::uint64_t n = ct.level_size(lvl), b = ct.level_begin(lvl);
        const std::uint64_t m = ct.level_size(lvl + 1), up = ct.level_begin(lvl + 1);
        const auto f = ct.forward_degrees(lvl);
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::uint64_t s = ct.forward_start(lvl, i);
            for (std::uint32_t j = 0; j < f[i]; ++j) add(b + i, up + (s + j) % m);
        }
    }
    if (!collapse)
        for (std::uint64_t i = 0; i < top_size; ++i) net.edges.emplace_back(below + i, terminal);
    return net;
}

}  // namespace

ResistanceResult effective_resistance(const CausalTriangulation& ct, std::uint32_t k, double tol, BoundaryMode mode,
                                      std::size_t direct_limit) {
    if (k == 0 || k > ct.top()) throw DomainError("K must lie in [1, top]");
    const Network net = build_network(ct, k, mode);
    const std::size_t terminal = net.nodes - 1;
    // Unknowns: every node except root (potential 1) and terminal (potential 0).
    const std::size_t n = net.nodes - 2;
    auto unknown = [](std::size_t v) { return static_cast<Eigen::Index>(v - 1); };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(4 * net.edges.size());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (const auto& [a, b] : net.edges) {
        const bool a_free = a != 0 && a != terminal, b_free = b != 0 && b != terminal;
        if (a_free) trip.emplace_back(unknown(a), unknown(a), 1.0);
        if (b_free) trip.emplace_back(unknown(b), unknown(b), 1.0);
        if (a_free && b_free) {
            trip.emplace_back(unknown(a), unknown(b), -1.0);
            trip.emplace_back(unknown(b), unknown(a), -1.0);
        }
        if (a_free && b == 0) rhs[unknown(a)] += 1.0;
        if (b_free && a == 0) rhs[unknown(b)] += 1.0;
    }

    ResistanceResult res;
    res.unknowns = n;
    Eigen::VectorXd v;
    if (n > 0) {
        Eigen::SparseMatrix<double> lap(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        lap.setFromTriplets(trip.begin(), trip.end());
        if (n <= direct_limit) {
            Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap);
            if (solver.info() != Eigen::Success) throw NumericalGuardError("sparse factorization failed");
            v = solver.solve(rhs);
            if (solver.info() != Eigen::Success) throw NumericalGuardError("sparse solve failed");
        } else {
            Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> solver(lap);
            solver.setTolerance(tol);
            solver.setMaxIterations(20 * static_cast<Eigen::Index>(n));
            v = solver.solve(rhs);
            if (solver.info() != Eigen::Success) throw NumericalGuardError("conjugate gradients did not converge");
            res.direct = false;
        }
    }
    auto potential = [&](std::size_t node) {
        if (node == 0) return 1.0;
        if (node == terminal) return 0.0;
        return v[unknown(node)];
    };
    for (const auto& [a, b] : net.edges) {
        const double drop = potential(a) - potential(b);
        res.energy += drop * drop;
        if (a == 0) res.current += drop;
        if (b == 0) res.current -= drop;
    }
    if (!(res.current > 0.0)) throw NumericalGuardError("no current reaches the boundary");
    res.resistance = 1.0 / res.current;
    res.energy_residual = std::abs(res.energy - res.current) / res.current;
    return res;
}

std::vector<ResistanceRow> resistance_profile(const CausalTriangulation& ct, std::span<const std::uint32_t> ks,
                                              double tol, BoundaryMode mode) {
    std::vector<ResistanceRow> rows;
    rows.reserve(ks.size());
    for (const auto k : ks) {
        const auto r = effective_resistance(ct, k, tol, mode);
        ResistanceRow row;
        row.k = k;
        row.nw_lower = nash_williams_lower(ct, k);
        row.exact = r.resistance;
        row.ratio = r.resistance / row.nw_lower;
        row.energy_residual = r.energy_residual;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace uict
