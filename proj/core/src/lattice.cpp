#include "qpperc/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qpperc {

LatticePoint EdgeId::other_endpoint() const {
    LatticePoint y = base;
    y[static_cast<std::size_t>(axis)] += 1;
    return y;
}

std::vector<double> EdgeId::midpoint() const {
    std::vector<double> m(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) m[i] = static_cast<double>(base[i]);
    m[static_cast<std::size_t>(axis)] += 0.5;
    return m;
}

std::int64_t l1_distance(const LatticePoint& a, const LatticePoint& b) {
    if (a.size() != b.size()) throw std::invalid_argument("l1_distance: dimension mismatch");
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::llabs(a[i] - b[i]);
    return s;
}

double edge_l1_distance(const EdgeId& u, const LatticePoint& x) {
    if (u.base.size() != x.size()) throw std::invalid_argument("edge_l1_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double c = static_cast<double>(u.base[i]);
        if (static_cast<int>(i) == u.axis) c += 0.5;
        s += std::fabs(c - static_cast<double>(x[i]));
    }
    return s;
}

std::string format_point(const LatticePoint& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(x[i]);
    }
    s += ')';
    return s;
}

std::string format_edge(const EdgeId& u) {
    const auto m = u.midpoint();
    std::string s = "(";
    char buf[64];
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) s += ' ';
        std::snprintf(buf, sizeof(buf), "%.1f", m[i]);
        s += buf;
    }
    s += ')';
    return s;
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const {
    // splitmix64-style accumulation over coordinates
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ (p.size() * 0xff51afd7ed558ccdull);
    for (std::int64_t c : p) {
        std::uint64_t z = h + static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        h = z ^ (z >> 31);
    }
    return static_cast<std::size_t>(h);
}

namespace {

void enumerate_ball_rec(const LatticePoint& center, std::int64_t budget, std::size_t axis,
                        LatticePoint& scratch, std::vector<LatticePoint>& out) {
    if (axis + 1 == center.size()) {
        for (std::int64_t o = -budget; o <= budget; ++o) {
            scratch[axis] = center[axis] + o;
            out.push_back(scratch);
        }
        return;
    }
    for (std::int64_t o = -budget; o <= budget; ++o) {
        scratch[axis] = center[axis] + o;
        enumerate_ball_rec(center, budget - std::llabs(o), axis + 1, scratch, out);
    }
}

}  // namespace

std::vector<LatticePoint> enumerate_ball(const LatticePoint& center, std::int64_t radius) {
    if (center.empty()) throw std::invalid_argument("enumerate_ball: dimension 0");
    if (radius < 0) throw std::invalid_argument("enumerate_ball: negative radius");
    std::vector<LatticePoint> out;
    LatticePoint scratch(center.size());
    enumerate_ball_rec(center, radius, 0, scratch, out);
    return out;
}

namespace {

// Packs (base, axis) into a hashable key by appending the axis coordinate.
LatticePoint pack_edge(const EdgeId& u) {
    LatticePoint k = u.base;
    k.push_back(u.axis);
    return k;
}

}  // namespace

std::shared_ptr<const BoxGeometry> BoxGeometry::create(LatticePoint center, std::int64_t radius) {
    auto geo = std::shared_ptr<BoxGeometry>(new BoxGeometry());
    geo->center_ = std::move(center);
    geo->radius_ = radius;
    geo->vertices_ = enumerate_ball(geo->center_, radius);
    geo->shells_.reserve(geo->vertices_.size());
    geo->vertex_index_.reserve(geo->vertices_.size() * 2);
    for (std::size_t i = 0; i < geo->vertices_.size(); ++i) {
        geo->vertex_index_.emplace(geo->vertices_[i], static_cast<std::int32_t>(i));
        geo->shells_.push_back(l1_distance(geo->vertices_[i], geo->center_));
    }
    const int d = geo->dimension();
    // Internal edges: both endpoints inside the ball, equivalently midpoint
    // l1 distance <= radius. Boundary edges: inner endpoint on the outermost
    // shell, outer endpoint one step further out.
    for (std::size_t i = 0; i < geo->vertices_.size(); ++i) {
        const LatticePoint& v = geo->vertices_[i];
        for (int ax = 0; ax < d; ++ax) {
            for (int sign : {+1, -1}) {
                LatticePoint w = v;
                w[static_cast<std::size_t>(ax)] += sign;
                EdgeId e{sign > 0 ? v : w, ax};
                const std::int32_t j = geo->vertex_index(w);
                if (j >= 0) {
                    if (sign > 0) {  // visit each internal edge once, from its base
                        geo->edges_.push_back({static_cast<std::int32_t>(i), j, e});
                        geo->edge_index_.emplace(pack_edge(e), static_cast<std::int32_t>(geo->edges_.size() - 1));
                    }
                } else {
                    geo->boundary_edges_.push_back({static_cast<std::int32_t>(i), e});
                }
            }
        }
    }
    return geo;
}

std::int32_t BoxGeometry::vertex_index(const LatticePoint& x) const {
    auto it = vertex_index_.find(x);
    return it == vertex_index_.end() ? -1 : it->second;
}

std::int32_t BoxGeometry::edge_index(const EdgeId& u) const {
    auto it = edge_index_.find(pack_edge(u));
    return it == edge_index_.end() ? -1 : it->second;
}

}  // namespace qpperc
