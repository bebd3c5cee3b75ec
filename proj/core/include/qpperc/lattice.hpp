#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace qpperc {

/// A vertex of the nearest-neighbor lattice Z^d.
using LatticePoint = std::vector<std::int64_t>;

/// An edge of the lattice, identified by its midpoint base + e_axis/2.
/// `base` is the endpoint with the smaller coordinate along `axis`;
/// the other endpoint is base + e_axis. Axes are 0-based.
struct EdgeId {
    LatticePoint base;
    int axis = 0;

    LatticePoint other_endpoint() const;
    /// Midpoint coordinates (half-integer along `axis`).
    std::vector<double> midpoint() const;

    bool operator==(const EdgeId&) const = default;
};

std::int64_t l1_distance(const LatticePoint& a, const LatticePoint& b);
/// l1 distance between an edge midpoint and a vertex (always half-integer).
double edge_l1_distance(const EdgeId& u, const LatticePoint& x);

std::string format_point(const LatticePoint& x);
std::string format_edge(const EdgeId& u);

struct LatticePointHash {
    std::size_t operator()(const LatticePoint& p) const;
};

/// Enumerates the l1 ball Lambda_L^V(center) in a fixed canonical order
/// (lexicographic over coordinates). The order is part of the geometry
/// contract: realizations store per-line arrivals indexed by it.
std::vector<LatticePoint> enumerate_ball(const LatticePoint& center, std::int64_t radius);

/// An edge leaving a region through its horizontal boundary: the inner
/// endpoint lies in the region, the outer one does not.
struct BoundaryEdge {
    std::int32_t inner_vertex = 0;  // index into the owning vertex list
    EdgeId edge;
};

/// Precomputed layout of the box Lambda_L(center): vertex list, internal
/// edge list with endpoint indices, and the outward boundary edges.
/// Built once and shared across the many realizations sampled on one box.
class BoxGeometry {
  public:
    static std::shared_ptr<const BoxGeometry> create(LatticePoint center, std::int64_t radius);

    int dimension() const { return static_cast<int>(center_.size()); }
    const LatticePoint& center() const { return center_; }
    std::int64_t radius() const { return radius_; }

    const std::vector<LatticePoint>& vertices() const { return vertices_; }
    std::size_t vertex_count() const { return vertices_.size(); }

    struct InternalEdge {
        std::int32_t a = 0;  // index of edge.base in vertices()
        std::int32_t b = 0;  // index of base + e_axis
        EdgeId edge;
    };
    const std::vector<InternalEdge>& edges() const { return edges_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

    /// l1 distance of vertex i from the box center.
    std::int64_t shell(std::size_t i) const { return shells_[i]; }

    /// Index of a vertex, or -1 when outside the box.
    std::int32_t vertex_index(const LatticePoint& x) const;
    /// Index of an internal edge, or -1.
    std::int32_t edge_index(const EdgeId& u) const;

  private:
    BoxGeometry() = default;

    LatticePoint center_;
    std::int64_t radius_ = 0;
    std::vector<LatticePoint> vertices_;
    std::vector<std::int64_t> shells_;
    std::vector<InternalEdge> edges_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::unordered_map<LatticePoint, std::int32_t, LatticePointHash> vertex_index_;
    std::unordered_map<LatticePoint, std::int32_t, LatticePointHash> edge_index_;  // keyed by (base, axis) packed
};

}  // namespace qpperc
