#include "uict/triangulation.hpp"

#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "uict/error.hpp"
#include "uict/tree_sampling.hpp"

namespace uict {

CausalTriangulation CausalTriangulation::from_levels(std::vector<std::uint64_t> level_sizes,
                                                     const std::vector<std::vector<std::uint32_t>>& forward,
                                                     bool decorated) {
    if (level_sizes.size() < 2) throw FormatError("a triangulation needs at least the levels S_0 and S_1");
    if (level_sizes[0] != 1) throw FormatError("S_0 is a single vertex");
    const std::size_t top = level_sizes.size() - 1;
    if (forward.size() != top) throw FormatError("need forward degrees for every level below the top");
    for (std::size_t k = 1; k <= top; ++k)
        if (level_sizes[k] == 0) throw FormatError("levels must be nonempty");

    CausalTriangulation ct;
    ct.level_sizes_ = std::move(level_sizes);
    ct.decorated_ = decorated;
    ct.level_offsets_.assign(top + 2, 0);
    for (std::size_t k = 0; k <= top; ++k) ct.level_offsets_[k + 1] = ct.level_offsets_[k] + ct.level_sizes_[k];

    if (forward[0].size() != 1 || forward[0][0] != ct.level_sizes_[1])
        throw FormatError("the root must be joined once to every vertex of S_1");
    ct.forward_.reserve(ct.level_offsets_[top]);
    ct.forward_start_.reserve(ct.level_offsets_[top]);
    ct.forward_.push_back(forward[0][0]);
    ct.forward_start_.push_back(0);
    for (std::size_t k = 1; k < top; ++k) {
        const auto& f = forward[k];
        if (f.size() != ct.level_sizes_[k]) throw FormatError("forward degree list length differs from |S_k|");
        std::uint64_t start = 0;
        for (const auto d : f) {
            if (d == 0) throw FormatError("every vertex below the top needs a forward edge");
            ct.forward_.push_back(d);
            ct.forward_start_.push_back(start);
            start += d - 1;
        }
        if (start != ct.level_sizes_[k + 1])
            throw FormatError("forward degrees of S_k must sum to |S_k| + |S_{k+1}|");
    }
    return ct;
}

std::span<const std::uint32_t> CausalTriangulation::forward_degrees(std::uint32_t k) const {
    if (k >= top()) throw DomainError("the top level has no forward edges");
    return {forward_.data() + level_offsets_[k], forward_.data() + level_offsets_[k + 1]};
}

std::uint64_t CausalTriangulation::forward_start(std::uint32_t k, std::uint64_t i) const {
    if (k >= top()) throw DomainError("the top level has no forward edges");
    return forward_start_[level_offsets_[k] + i];
}

std::uint64_t CausalTriangulation::slice_size(std::uint32_t k) const {
    if (k > top()) throw DomainError("slice index above the top");
    if (k == top()) return decorated_ ? level_sizes_[k] : 0;
    return k == 0 ? level_sizes_[1] : level_sizes_[k] + level_sizes_[k + 1];
}

PlanarTree beta(const CausalTriangulation& ct) {
    const std::uint32_t top = ct.top();
    std::vector<std::uint32_t> counts{1, static_cast<std::uint32_t>(ct.level_size(1))};
    counts.reserve(ct.vertex_count() + 1);
    for (std::uint32_t k = 1; k < top; ++k) {
        const std::uint64_t above = ct.level_size(k + 1);
        const auto f = ct.forward_degrees(k);
        // Keep every forward edge but the clockwise-last; each vertex above
        // must end up with exactly one kept edge, and in planar order.
        std::uint64_t expected = 0;
        for (std::uint64_t i = 0; i < f.size(); ++i) {
            const std::uint64_t start = ct.forward_start(k, i);
            for (std::uint32_t j = 0; j + 1 < f[i]; ++j) {
                if ((start + j) % above != expected) throw FormatError("forward fans do not tile the next level");
                ++expected;
            }
            counts.push_back(f[i] - 1);
        }
        if (expected != above) throw FormatError("tree edges do not reach every vertex of the next level");
    }
    counts.resize(counts.size() + ct.level_size(top), 0);
    if (ct.decorated()) return PlanarTree::from_level_order(std::move(counts));
    return PlanarTree::from_level_order(std::move(counts), top + 1);
}

CausalTriangulation beta_inv(const PlanarTree& tree, bool decorate) {
    const std::uint32_t h = tree.height();
    if (h < 2) throw DomainError("tree height must be at least 2");
    const std::uint32_t top = h - 1;
    std::vector<std::uint64_t> sizes(top + 1);
    for (std::uint32_t k = 0; k <= top; ++k) sizes[k] = tree.level_size(k + 1);
    std::vector<std::vector<std::uint32_t>> forward(top);
    forward[0] = {tree.child_count(1)};
    for (std::uint32_t k = 1; k < top; ++k) {
        const std::uint64_t b = tree.level_begin(k + 1);
        forward[k].resize(sizes[k]);
        for (std::uint64_t i = 0; i < sizes[k]; ++i) forward[k][i] = tree.child_count(b + i) + 1;
    }
    return CausalTriangulation::from_levels(std::move(sizes), forward, decorate && !tree.truncated());
}

std::uint64_t ct_area(const CausalTriangulation& ct) {
    if (!ct.decorated()) throw DomainError("area is defined for finite (decorated) triangulations");
    std::uint64_t s = 0;
    for (std::uint32_t k = 1; k <= ct.top(); ++k) s += ct.level_size(k);
    return 2 * s;
}

std::uint64_t triangle_count(const CausalTriangulation& ct) {
    std::uint64_t s = 0;
    for (std::uint32_t k = 0; k <= ct.top(); ++k) s += ct.slice_size(k);
    return s;
}

std::vector<std::array<std::uint64_t, 3>> slice_triangles(const CausalTriangulation& ct, std::uint32_t k) {
    std::vector<std::array<std::uint64_t, 3>> tri;
    const std::uint32_t top = ct.top();
    if (k > top) throw DomainError("slice index above the top");
    const std::uint64_t n = ct.level_size(k);
    const std::uint64_t base = ct.level_begin(k);
    if (k == top) {
        if (!ct.decorated()) return tri;
        const std::uint64_t apex = ct.vertex_count();
        for (std::uint64_t i = 0; i < n; ++i) tri.push_back({apex, base + i, base + (i + 1) % n});
        return tri;
    }
    const std::uint64_t m = ct.level_size(k + 1);
    const std::uint64_t up = ct.level_begin(k + 1);
    if (k == 0) {
        for (std::uint64_t j = 0; j < m; ++j) tri.push_back({0, up + j, up + (j + 1) % m});
        return tri;
    }
    const auto f = ct.forward_degrees(k);
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t s = ct.forward_start(k, i);
        for (std::uint32_t j = 0; j + 1 < f[i]; ++j)
            tri.push_back({base + i, up + (s + j) % m, up + (s + j + 1) % m});
        tri.push_back({base + i, base + (i + 1) % n, up + (s + f[i] - 1) % m});
    }
    return tri;
}

std::uint64_t ct_ball_edges_from_levels(std::span<const std::uint64_t> level_sizes, std::uint32_t radius) {
    if (radius == 0) return 0;
    if (radius >= level_sizes.size()) throw DomainError("ball radius exceeds the window");
    std::uint64_t s = 0;
    for (std::uint32_t k = 1; k <= radius; ++k) s += level_sizes[k];
    return 3 * s - level_sizes[radius];
}

std::uint64_t ct_ball_edges(const CausalTriangulation& ct, std::uint32_t radius) {
    return ct_ball_edges_from_levels(ct.level_sizes(), radius);
}

AdjacencyGraph ct_to_adjacency(const CausalTriangulation& ct, bool include_decoration) {
    const bool apex = include_decoration && ct.decorated();
    const std::uint64_t nv = ct.vertex_count() + (apex ? 1 : 0);
    if (nv >= std::numeric_limits<std::uint32_t>::max()) throw DomainError("triangulation too large for a walk graph");
    const std::uint32_t top = ct.top();
    std::vector<AdjacencyGraph::Edge> edges;
    std::vector<std::uint32_t> levels(nv);
    for (std::uint32_t k = 0; k <= top; ++k)
        for (std::uint64_t v = ct.level_begin(k); v < ct.level_begin(k) + ct.level_size(k); ++v) levels[v] = k;
    auto id = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    for (std::uint32_t k = 1; k <= top; ++k) {
        const std::uint64_t n = ct.level_size(k), b = ct.level_begin(k);
        for (std::uint64_t i = 0; i < n; ++i) edges.emplace_back(id(b + i), id(b + (i + 1) % n));
    }
    for (std::uint32_t k = 0; k < top; ++k) {
        const std::uint64_t n = ct.level_size(k), b = ct.level_begin(k);
        const std::uint64_t m = ct.level_size(k + 1), up = ct.level_begin(k + 1);
        const auto f = ct.forward_degrees(k);
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::uint64_t s = ct.forward_start(k, i);
            for (std::uint32_t j = 0; j < f[i]; ++j) edges.emplace_back(id(b + i), id(up + (s + j) % m));
        }
    }
    if (apex) {
        const std::uint64_t a = ct.vertex_count();
        levels[a] = top + 1;
        for (std::uint64_t i = 0; i < ct.level_size(top); ++i) edges.emplace_back(id(a), id(ct.level_begin(top) + i));
    }
    std::optional<std::uint32_t> boundary;
    if (!ct.decorated()) boundary = top;
    return AdjacencyGraph::from_edges(static_cast<std::uint32_t>(nv), edges, std::move(levels), boundary);
}

AdjacencyGraph tree_to_adjacency(const PlanarTree& tree) {
    const std::uint64_t nv = tree.vertex_count();
    if (nv >= std::numeric_limits<std::uint32_t>::max()) throw DomainError("tree too large for a walk graph");
    std::vector<AdjacencyGraph::Edge> edges;
    edges.reserve(nv - 1);
    std::vector<std::uint32_t> levels(nv);
    for (std::uint32_t k = 0; k <= tree.height(); ++k)
        for (std::uint64_t v = tree.level_begin(k); v < tree.level_begin(k) + tree.level_size(k); ++v) levels[v] = k;
    for (std::uint64_t v = 1; v < nv; ++v)
        edges.emplace_back(static_cast<std::uint32_t>(tree.parent(v)), static_cast<std::uint32_t>(v));
    return AdjacencyGraph::from_edges(static_cast<std::uint32_t>(nv), edges, std::move(levels),
                                      tree.truncation_height());
}

std::vector<CausalTriangulation> enumerate_cts(std::uint32_t n) {
    if (n == 0 || n > 12) throw DomainError("enumeration supports 1 <= N <= 12");
    std::vector<CausalTriangulation> out;
    for (const auto& t : enumerate_trees(n + 1)) out.push_back(beta_inv(t, true));
    return out;
}

std::vector<CausalTriangulation> enumerate_cts_by_slices(std::uint32_t n) {
    if (n == 0 || n > 12) throw DomainError("enumeration supports 1 <= N <= 12");
    std::vector<CausalTriangulation> out;
    std::vector<std::uint64_t> sizes{1};
    std::vector<std::vector<std::uint32_t>> forward;

    // All compositions of `total` into `parts` positive integers.
    auto compositions = [](std::uint32_t total, std::uint32_t parts) {
        std::vector<std::vector<std::uint32_t>> res;
        std::vector<std::uint32_t> cur;
        std::function<void(std::uint32_t, std::uint32_t)> go = [&](std::uint32_t left, std::uint32_t slots) {
            if (slots == 1) {
                cur.push_back(left);
                res.push_back(cur);
                cur.pop_back();
                return;
            }
            for (std::uint32_t v = 1; v + (slots - 1) <= left; ++v) {
                cur.push_back(v);
                go(left - v, slots - 1);
                cur.pop_back();
            }
        };
        go(total, parts);
        return res;
    };

    std::function<void(std::uint32_t)> grow = [&](std::uint32_t remaining) {
        if (remaining == 0) {
            out.push_back(CausalTriangulation::from_levels(sizes, forward, true));
            return;
        }
        for (std::uint32_t next = 1; next <= remaining; ++next) {
            const auto k = static_cast<std::uint32_t>(sizes.size() - 1);
            std::vector<std::vector<std::uint32_t>> fans;
            if (k == 0)
                fans = {{next}};
            else
                fans = compositions(static_cast<std::uint32_t>(sizes[k]) + next, static_cast<std::uint32_t>(sizes[k]));
            sizes.push_back(next);
            for (auto& fan : fans) {
                forward.push_back(std::move(fan));
                grow(remaining - next);
                forward.pop_back();
            }
            sizes.pop_back();
        }
    };
    grow(n);
    return out;
}

void write_ct(std::ostream& out, const CausalTriangulation& ct) {
    out << "CTRI 1\n" << ct.top();
    if (ct.decorated()) out << " decorated";
    out << '\n';
    for (std::uint32_t k = 1; k < ct.top(); ++k) {
        out << ct.level_size(k);
        for (const auto f : ct.forward_degrees(k)) out << ' ' << f;
        out << '\n';
    }
    out << ct.level_size(ct.top()) << '\n';
}

namespace {

bool next_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        return true;
    }
    return false;
}

}  // namespace

CausalTriangulation read_ct(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) throw FormatError("empty triangulation stream");
    {
        std::istringstream head(line);
        std::string magic;
        int version = 0;
        if (!(head >> magic >> version) || magic != "CTRI" || version != 1)
            throw FormatError("expected 'CTRI 1' header");
    }
    if (!next_line(in, line)) throw FormatError("missing height line");
    std::uint32_t top = 0;
    bool decorated = false;
    {
        std::istringstream head(line);
        if (!(head >> top) || top == 0) throw FormatError("bad height");
        std::string word;
        if (head >> word) {
            if (word != "decorated") throw FormatError("unknown height-line flag '" + word + "'");
            decorated = true;
        }
    }
    std::vector<std::uint64_t> sizes{1};
    std::vector<std::vector<std::uint32_t>> forward(top);
    for (std::uint32_t k = 1; k <= top; ++k) {
        if (!next_line(in, line)) throw FormatError("truncated level list");
        std::istringstream body(line);
        std::uint64_t size = 0;
        if (!(body >> size)) throw FormatError("bad level size");
        sizes.push_back(size);
        long long f = 0;
        while (body >> f) {
            if (f <= 0) throw FormatError("forward degrees must be positive");
            forward[k < top ? k : 0].push_back(static_cast<std::uint32_t>(f));
        }
        if (!body.eof()) throw FormatError("non-numeric token in level line");
        if (k == top && !forward[0].empty()) throw FormatError("the top level has no forward degrees");
    }
    forward[0] = {static_cast<std::uint32_t>(sizes[1])};
    return CausalTriangulation::from_levels(std::move(sizes), forward, decorated);
}

std::string serialize_ct(const CausalTriangulation& ct) {
    std::ostringstream os;
    write_ct(os, ct);
    return os.str();
}

CausalTriangulation deserialize_ct(const std::string& text) {
    std::istringstream is(text);
    return read_ct(is);
}

}  // namespace uict
