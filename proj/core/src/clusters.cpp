#include "qpperc/clusters.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "qpperc/csv.hpp"

namespace qpperc {

ClusterStructure::ClusterStructure(const Realization& r) : realization_(&r) {
    build(RegionMask{});
}

ClusterStructure::ClusterStructure(const Realization& r, const RegionMask& mask)
    : realization_(&r) {
    build(mask);
}

namespace {

std::int32_t find_mut(std::vector<std::int32_t>& parent, std::int32_t i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
        parent[static_cast<std::size_t>(i)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
        i = parent[static_cast<std::size_t>(i)];
    }
    return i;
}

}  // namespace

void ClusterStructure::build(const RegionMask& mask) {
    const SpaceTimeBox& box = realization_->box();
    const BoxGeometry& geo = realization_->geometry();

    w_lo_ = std::max(box.t_lo, mask.t_lo);
    w_hi_ = std::min(box.t_hi, mask.t_hi);
    if (!(w_lo_ <= w_hi_))
        throw std::invalid_argument("RegionMask: window does not intersect the box window");

    if (mask.sub_radius >= 0) {
        if (mask.sub_center.size() != box.center.size())
            throw std::invalid_argument("RegionMask: sub-center dimension mismatch");
        if (l1_distance(mask.sub_center, box.center) + mask.sub_radius > box.radius)
            throw std::invalid_argument("RegionMask: sub-ball reaches outside the box");
        face_center_ = mask.sub_center;
        face_radius_ = mask.sub_radius;
    } else {
        face_center_ = box.center;
        face_radius_ = box.radius;
    }

    std::unordered_set<std::int32_t> excluded;
    for (const LatticePoint& x : mask.excluded_lines) {
        const std::int32_t v = geo.vertex_index(x);
        if (v < 0) throw std::invalid_argument("RegionMask: excluded line outside the box");
        excluded.insert(v);
    }

    const std::size_t nv = geo.vertex_count();
    offsets_.assign(nv, -1);
    cuts_.assign(nv, {});
    std::int32_t total = 0;
    for (std::size_t v = 0; v < nv; ++v) {
        const LatticePoint& x = geo.vertices()[v];
        if (l1_distance(x, face_center_) > face_radius_) continue;
        if (excluded.count(static_cast<std::int32_t>(v))) continue;
        auto& cuts = cuts_[v];
        for (double t : realization_->deaths(v))
            if (t > w_lo_ && t < w_hi_) cuts.push_back(t);
        offsets_[v] = total;
        total += static_cast<std::int32_t>(cuts.size()) + 1;
    }

    parent_.resize(static_cast<std::size_t>(total));
    vertex_of_.resize(static_cast<std::size_t>(total));
    std::vector<std::int32_t> size(static_cast<std::size_t>(total), 1);
    for (std::size_t v = 0; v < nv; ++v) {
        if (offsets_[v] < 0) continue;
        for (std::int32_t k = 0; k <= static_cast<std::int32_t>(cuts_[v].size()); ++k) {
            parent_[static_cast<std::size_t>(offsets_[v] + k)] = offsets_[v] + k;
            vertex_of_[static_cast<std::size_t>(offsets_[v] + k)] = static_cast<std::int32_t>(v);
        }
    }

    unions_ = 0;
    auto interval_on = [this](std::int32_t v, double t) {
        const auto& cuts = cuts_[static_cast<std::size_t>(v)];
        const std::int32_t k = static_cast<std::int32_t>(
            std::upper_bound(cuts.begin(), cuts.end(), t) - cuts.begin());
        return offsets_[static_cast<std::size_t>(v)] + k;
    };
    for (std::size_t e = 0; e < geo.edges().size(); ++e) {
        const auto& edge = geo.edges()[e];
        if (offsets_[static_cast<std::size_t>(edge.a)] < 0 ||
            offsets_[static_cast<std::size_t>(edge.b)] < 0)
            continue;
        for (double t : realization_->bonds(e)) {
            if (!(t > w_lo_ && t < w_hi_)) continue;
            std::int32_t ra = find_mut(parent_, interval_on(edge.a, t));
            std::int32_t rb = find_mut(parent_, interval_on(edge.b, t));
            if (ra == rb) continue;
            if (size[static_cast<std::size_t>(ra)] < size[static_cast<std::size_t>(rb)])
                std::swap(ra, rb);
            parent_[static_cast<std::size_t>(rb)] = ra;
            size[static_cast<std::size_t>(ra)] += size[static_cast<std::size_t>(rb)];
            ++unions_;
        }
    }

    // Flatten so queries are pure reads (safe to run concurrently).
    for (std::int32_t i = 0; i < total; ++i)
        parent_[static_cast<std::size_t>(i)] = find_mut(parent_, i);

    root_faces_.assign(static_cast<std::size_t>(total), 0);
    root_alive_.assign(static_cast<std::size_t>(total), 0.0);
    root_size_.assign(static_cast<std::size_t>(total), 0);
    for (std::size_t v = 0; v < nv; ++v) {
        if (offsets_[v] < 0) continue;
        const bool on_face = l1_distance(geo.vertices()[v], face_center_) == face_radius_;
        const std::int32_t n = static_cast<std::int32_t>(cuts_[v].size());
        for (std::int32_t k = 0; k <= n; ++k) {
            const std::int32_t i = offsets_[v] + k;
            const std::int32_t root = parent_[static_cast<std::size_t>(i)];
            root_alive_[static_cast<std::size_t>(root)] +=
                segment_length(static_cast<std::int32_t>(v), k);
            root_size_[static_cast<std::size_t>(root)] += 1;
            std::uint8_t bits = 0;
            if (k == 0) bits |= 1;
            if (k == n) bits |= 2;
            if (on_face) bits |= 4;
            root_faces_[static_cast<std::size_t>(root)] |= bits;
        }
    }
}

double ClusterStructure::segment_length(std::int32_t vertex, std::int32_t index) const {
    const auto& cuts = cuts_[static_cast<std::size_t>(vertex)];
    const double lo = index == 0 ? w_lo_ : cuts[static_cast<std::size_t>(index - 1)];
    const double hi =
        index == static_cast<std::int32_t>(cuts.size()) ? w_hi_ : cuts[static_cast<std::size_t>(index)];
    return hi - lo;
}

const std::vector<double>& ClusterStructure::cuts(std::size_t vertex_index) const {
    return cuts_[vertex_index];
}

std::int32_t ClusterStructure::flat_index(const SpaceTimePoint& a) const {
    const std::int32_t v = realization_->geometry().vertex_index(a.x);
    if (v < 0) throw std::invalid_argument("query vertex outside the box");
    if (offsets_[static_cast<std::size_t>(v)] < 0)
        throw std::invalid_argument("query vertex masked out of the region");
    if (!(a.t >= w_lo_ && a.t <= w_hi_))
        throw std::invalid_argument("query time outside the window");
    const auto& cuts = cuts_[static_cast<std::size_t>(v)];
    std::int32_t k;
    if (a.t == w_hi_) {
        k = static_cast<std::int32_t>(cuts.size());
    } else {
        k = static_cast<std::int32_t>(std::upper_bound(cuts.begin(), cuts.end(), a.t) -
                                      cuts.begin());
        if (k > 0 && cuts[static_cast<std::size_t>(k - 1)] == a.t)
            throw std::domain_error("query point is deleted (death arrival)");
    }
    return offsets_[static_cast<std::size_t>(v)] + k;
}

bool ClusterStructure::alive(const SpaceTimePoint& a) const {
    const std::int32_t v = realization_->geometry().vertex_index(a.x);
    if (v < 0 || offsets_[static_cast<std::size_t>(v)] < 0) return false;
    if (!(a.t >= w_lo_ && a.t <= w_hi_)) return false;
    const auto& cuts = cuts_[static_cast<std::size_t>(v)];
    if (a.t == w_hi_) return true;
    const auto it = std::upper_bound(cuts.begin(), cuts.end(), a.t);
    return it == cuts.begin() || *(it - 1) != a.t;
}

IntervalId ClusterStructure::interval_at(const SpaceTimePoint& a) const {
    const std::int32_t flat = flat_index(a);
    const std::int32_t v = vertex_of_[static_cast<std::size_t>(flat)];
    return IntervalId{v, flat - offsets_[static_cast<std::size_t>(v)]};
}

bool ClusterStructure::connected(const SpaceTimePoint& a, const SpaceTimePoint& b) const {
    return find(flat_index(a)) == find(flat_index(b));
}

bool ClusterStructure::boundary_hit(const SpaceTimePoint& a, const BoundarySpec& faces) const {
    const std::uint8_t bits = root_faces_[static_cast<std::size_t>(find(flat_index(a)))];
    return (faces.bottom && (bits & 1)) || (faces.top && (bits & 2)) ||
           (faces.horizontal && (bits & 4));
}

bool ClusterStructure::vertical_crossing() const {
    for (std::size_t i = 0; i < parent_.size(); ++i)
        if (parent_[i] == static_cast<std::int32_t>(i) && (root_faces_[i] & 1) &&
            (root_faces_[i] & 2))
            return true;
    return false;
}

double ClusterStructure::q_statistic(const SpaceTimePoint& a, const RateProvider& rates,
                                     const BoundarySpec& faces) const {
    const std::int32_t root = find(flat_index(a));
    const BoxGeometry& geo = realization_->geometry();
    const double kappa = rates.kappa();
    double q = 0.0;
    for (std::size_t v = 0; v < geo.vertex_count(); ++v) {
        if (offsets_[v] < 0) continue;
        const std::int32_t n = static_cast<std::int32_t>(cuts_[v].size());

        if (faces.bottom && find(offsets_[v]) == root) q += 1.0;
        if (faces.top && find(offsets_[v] + n) == root) q += 1.0;

        if (!faces.horizontal) continue;
        const LatticePoint& x = geo.vertices()[v];
        double intensity = 0.0;  // summed bond intensity over this line's outward edges
        for (int axis = 0; axis < geo.dimension(); ++axis) {
            for (int sign : {-1, 1}) {
                LatticePoint y = x;
                y[static_cast<std::size_t>(axis)] += sign;
                const std::int32_t w = geo.vertex_index(y);
                if (w >= 0 && offsets_[static_cast<std::size_t>(w)] >= 0) continue;
                const EdgeId u{sign > 0 ? x : y, axis};
                intensity += kappa * rates.bond_rate(u);
            }
        }
        if (intensity == 0.0) continue;
        double length = 0.0;
        for (std::int32_t k = 0; k <= n; ++k)
            if (find(offsets_[v] + k) == root)
                length += segment_length(static_cast<std::int32_t>(v), k);
        q += intensity * length;
    }
    return q;
}

double ClusterStructure::q_statistic(const SpaceTimePoint& a, const EnvironmentSpec& spec,
                                     const BoundarySpec& faces) const {
    return q_statistic(a, EnvironmentRates(spec), faces);
}

std::string ClusterStructure::clusters_csv() const {
    std::ostringstream out;
    csv::write_row(out, {"cluster_id", "intervals", "alive_length", "bottom", "top", "horizontal"});
    for (std::size_t i = 0; i < parent_.size(); ++i) {
        if (parent_[i] != static_cast<std::int32_t>(i)) continue;
        csv::write_row(out, {csv::format_int(static_cast<std::int64_t>(i)),
                             csv::format_int(root_size_[i]), csv::format_decimal(root_alive_[i]),
                             csv::format_int((root_faces_[i] & 1) != 0),
                             csv::format_int((root_faces_[i] & 2) != 0),
                             csv::format_int((root_faces_[i] & 4) != 0)});
    }
    return out.str();
}

}  // namespace qpperc
