#pragma once

#include <vector>

#include "qpperc/torus.hpp"

namespace qpperc {

/// A nonnegative continuous sampling function on T^nu with finitely many
/// zeros, restricted to the two built-in families:
///   constant:      h = level everywhere (no zeros)
///   power-product: h(theta) = level * prod_j d(theta, zero_j)^{exp_j}
/// Power-law behavior at each zero makes sigma-admissibility checkable in
/// closed form: h is sigma-admissible iff every exp_j < sigma.
class SamplingFunction {
  public:
    enum class Kind { Constant, PowerProduct };

    struct Zero {
        TorusPoint location;
        double exponent = 1.0;  // must be > 0
    };

    /// `level` may be +infinity, giving the no-bonds limit (1/h == 0).
    static SamplingFunction constant(std::size_t nu, double level);
    static SamplingFunction power_product(double level, std::vector<Zero> zeros);

    Kind kind() const { return kind_; }
    double level() const { return level_; }
    std::size_t dimension() const { return nu_; }
    const std::vector<Zero>& zeros() const { return zeros_; }
    std::size_t zero_count() const { return zeros_.size(); }

    double evaluate(const TorusPoint& theta) const;

    /// Closed-form sigma-admissibility: every zero exponent strictly below sigma.
    bool admissible_for(double sigma) const;

    /// Numerical estimate of the power-law exponent at one zero: the slope of
    /// log h against log d along a ray into the zero, evaluated by finite
    /// difference at the two smallest distances of a geometric sequence
    /// 10^-1 .. 10^-8. Converges to the declared exponent as the contribution
    /// of the other factors vanishes.
    double exponent_estimate(std::size_t zero_index) const;

  private:
    Kind kind_ = Kind::Constant;
    std::size_t nu_ = 1;
    double level_ = 1.0;
    std::vector<Zero> zeros_;
};

}  // namespace qpperc
