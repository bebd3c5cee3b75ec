#include "qpperc/sampling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpperc {

SamplingFunction SamplingFunction::constant(std::size_t nu, double level) {
    if (nu == 0) throw std::invalid_argument("SamplingFunction: torus dimension 0");
    if (std::isnan(level) || level <= 0.0)
        throw std::invalid_argument("SamplingFunction: level must be positive (or +inf)");
    SamplingFunction h;
    h.kind_ = Kind::Constant;
    h.nu_ = nu;
    h.level_ = level;
    return h;
}

SamplingFunction SamplingFunction::power_product(double level, std::vector<Zero> zeros) {
    if (!(level > 0.0) || !std::isfinite(level))
        throw std::invalid_argument("SamplingFunction: power-product level must be finite positive");
    if (zeros.empty())
        throw std::invalid_argument("SamplingFunction: power-product requires at least one zero");
    const std::size_t nu = zeros.front().location.dimension();
    for (const Zero& z : zeros) {
        if (z.location.dimension() != nu)
            throw std::invalid_argument("SamplingFunction: zero dimension mismatch");
        if (!(z.exponent > 0.0))
            throw std::invalid_argument("SamplingFunction: zero exponent must be positive");
    }
    SamplingFunction h;
    h.kind_ = Kind::PowerProduct;
    h.nu_ = nu;
    h.level_ = level;
    h.zeros_ = std::move(zeros);
    return h;
}

double SamplingFunction::evaluate(const TorusPoint& theta) const {
    if (theta.dimension() != nu_)
        throw std::invalid_argument("SamplingFunction: argument dimension mismatch");
    if (kind_ == Kind::Constant) return level_;
    double v = level_;
    for (const Zero& z : zeros_) {
        const double d = torus_distance(theta, z.location);
        v *= std::pow(d, z.exponent);
    }
    return v;
}

bool SamplingFunction::admissible_for(double sigma) const {
    for (const Zero& z : zeros_)
        if (!(z.exponent < sigma)) return false;
    return true;
}

double SamplingFunction::exponent_estimate(std::size_t zero_index) const {
    if (kind_ != Kind::PowerProduct || zero_index >= zeros_.size())
        throw std::invalid_argument("exponent_estimate: no such zero");
    const TorusPoint& z = zeros_[zero_index].location;
    auto probe = [&](double dist) {
        std::vector<double> c = z.coords();
        c[0] = wrap_unit(c[0] + dist);  // ray along the first coordinate
        return evaluate(TorusPoint(c));
    };
    const double d1 = 1e-7, d2 = 1e-8;
    const double h1 = probe(d1), h2 = probe(d2);
    if (h1 <= 0.0 || h2 <= 0.0)
        throw std::domain_error("exponent_estimate: probe hit another zero");
    return (std::log(h1) - std::log(h2)) / (std::log(d1) - std::log(d2));
}

}  // namespace qpperc
