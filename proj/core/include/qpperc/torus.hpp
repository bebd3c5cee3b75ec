#pragma once

#include <vector>

namespace qpperc {

/// A point on the nu-dimensional torus T^nu = [0,1)^nu. Coordinates are
/// reduced mod 1 on construction.
class TorusPoint {
  public:
    TorusPoint() = default;
    explicit TorusPoint(std::vector<double> coords);

    std::size_t dimension() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<double>& coords() const { return coords_; }

    bool operator==(const TorusPoint&) const = default;

  private:
    std::vector<double> coords_;
};

/// Reduce a real number into [0,1).
double wrap_unit(double x);

/// Sup metric over per-coordinate circle distances:
///   d(a,b) = max_i min(|a_i-b_i|, 1-|a_i-b_i|).
/// Symmetric, satisfies the triangle inequality, bounded by 1/2.
double torus_distance(const TorusPoint& a, const TorusPoint& b);

}  // namespace qpperc
