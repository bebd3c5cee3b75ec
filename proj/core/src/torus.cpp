#include "qpperc/torus.hpp"

#include <cmath>
#include <stdexcept>

namespace qpperc {

double wrap_unit(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("wrap_unit: non-finite coordinate");
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0;  // floor rounding at exact integers
    return y;
}

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
    for (double& c : coords_) c = wrap_unit(c);
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("torus_distance: dimension mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        double gap = std::fabs(a[i] - b[i]);
        gap = std::min(gap, 1.0 - gap);
        if (gap > best) best = gap;
    }
    return best;
}

}  // namespace qpperc
