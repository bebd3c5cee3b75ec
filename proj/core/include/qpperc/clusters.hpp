#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qpperc/realization.hpp"

namespace qpperc {

struct SpaceTimePoint {
    LatticePoint x;
    double t = 0.0;
    bool operator==(const SpaceTimePoint&) const = default;
};

/// Restriction of a realization to a sub-region: a spatial sub-ball, an
/// optional tighter time window, and a set of removed vertex lines. The
/// default masks nothing.
struct RegionMask {
    LatticePoint sub_center;       // used when sub_radius >= 0
    std::int64_t sub_radius = -1;  // -1 = no spatial restriction
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    std::vector<LatticePoint> excluded_lines;
};

/// Which pieces of the region boundary an operation looks at: the two
/// vertical faces (time-window endpoints) and the horizontal face (vertices
/// at maximal distance from the region center).
struct BoundarySpec {
    bool bottom = true;
    bool top = true;
    bool horizontal = true;
};

/// Ordinal handle of one death-free segment: `vertex` indexes the geometry's
/// vertex list, `index` counts segments upward in time (0-based; at most the
/// line's in-window death count).
struct IntervalId {
    std::int32_t vertex = -1;
    std::int32_t index = -1;
    bool operator==(const IntervalId&) const = default;
};

/// Exact cluster decomposition of one realization: deaths cut each vertex
/// line into maximal alive segments, every bond merges the two segments
/// covering its time on the edge's endpoint lines. Built once (union-find,
/// then flattened), immutable afterwards; concurrent queries are safe.
/// No time discretization anywhere: queries resolve by binary search over
/// the exact arrival times.
class ClusterStructure {
  public:
    explicit ClusterStructure(const Realization& r);
    ClusterStructure(const Realization& r, const RegionMask& mask);

    const Realization& realization() const { return *realization_; }
    double window_lo() const { return w_lo_; }
    double window_hi() const { return w_hi_; }

    bool vertex_active(std::size_t vertex_index) const { return offsets_[vertex_index] >= 0; }
    /// In-window death times cutting this line.
    const std::vector<double>& cuts(std::size_t vertex_index) const;

    /// Point lies on an active line, inside the closed window, and not
    /// exactly on a death arrival. Closure convention at the endpoints:
    /// t == window_lo / window_hi resolve to the first / last segment.
    bool alive(const SpaceTimePoint& a) const;

    /// Segment containing a point; throws std::domain_error when the point
    /// is deleted (exact death time) and std::invalid_argument outside the
    /// region.
    IntervalId interval_at(const SpaceTimePoint& a) const;

    bool connected(const SpaceTimePoint& a, const SpaceTimePoint& b) const;

    /// Cluster of `a` touches one of the requested faces. The horizontal
    /// face is the set of active vertices at maximal l1 distance from the
    /// region center; vertical faces use the closure convention.
    bool boundary_hit(const SpaceTimePoint& a, const BoundarySpec& faces) const;

    /// Some cluster touches both vertical faces.
    bool vertical_crossing() const;

    /// Per-realization unbiased estimate of the total communication from
    /// `a` to the region boundary: sum over outward boundary edges u of
    /// (bond intensity at u) * (alive length on u's inner line connected to
    /// a), plus the count of vertical-face points connected to a. The mean
    /// over realizations is the Q functional of the region.
    double q_statistic(const SpaceTimePoint& a, const RateProvider& rates,
                       const BoundarySpec& faces) const;
    double q_statistic(const SpaceTimePoint& a, const EnvironmentSpec& spec,
                       const BoundarySpec& faces) const;

    std::size_t interval_count() const { return parent_.size(); }
    std::size_t union_count() const { return unions_; }
    /// interval_count - union_count, the forest accounting identity.
    std::size_t cluster_count() const { return parent_.size() - unions_; }

    /// Rows (cluster_id, intervals, alive_length, bottom, top, horizontal).
    std::string clusters_csv() const;

  private:
    void build(const RegionMask& mask);
    std::int32_t find(std::int32_t i) const { return parent_[static_cast<std::size_t>(i)]; }
    std::int32_t flat_index(const SpaceTimePoint& a) const;
    double segment_length(std::int32_t vertex, std::int32_t index) const;

    const Realization* realization_;
    double w_lo_ = 0.0;
    double w_hi_ = 0.0;
    std::int64_t face_radius_ = 0;
    LatticePoint face_center_;
    std::vector<std::int32_t> offsets_;       // per vertex: first flat interval index, -1 = masked
    std::vector<std::vector<double>> cuts_;   // per vertex: in-window death times
    std::vector<std::int32_t> parent_;        // flattened after build: parent_[i] is the root
    std::vector<std::int32_t> vertex_of_;     // flat interval -> geometry vertex index
    std::size_t unions_ = 0;
    std::vector<std::uint8_t> root_faces_;    // per flat index, valid at roots: bit 1 bottom, 2 top, 4 horizontal
    std::vector<double> root_alive_;          // per flat index, valid at roots
    std::vector<std::int32_t> root_size_;     // interval count per root
};

}  // namespace qpperc
