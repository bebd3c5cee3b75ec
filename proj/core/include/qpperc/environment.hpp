#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpperc/lattice.hpp"
#include "qpperc/sampling.hpp"
#include "qpperc/torus.hpp"

namespace qpperc {

/// Dense real matrix, row-major. Shifts use rows = torus dimension,
/// cols = lattice dimension.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, std::vector<double> d);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix zeros(std::size_t r, std::size_t c);

    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    bool operator==(const Matrix&) const = default;
};

/// Finite-range certificate of the small-denominator quality of M: over
/// 0 < |x|_1 <= N,
///   c_hat = min d(Mx mod 1, 0) * |x|_1^zeta.
/// Any valid Diophantine constant for M is <= c_hat; c_hat = 0 exposes an
/// exact rational relation within range. Not a proof for |x| > N.
struct DiophantineCertificate {
    double c_hat = 0.0;
    LatticePoint witness;
};

DiophantineCertificate diophantine_certificate(const Matrix& M, double zeta, std::int64_t N);

struct ResonantSite {
    LatticePoint x;
    double delta = 0.0;
};

struct ResonantEdge {
    EdgeId u;
    double lambda = 0.0;  // +inf where the sampling function vanishes exactly
};

/// All resonant elements of one block: sites with death rate below epsilon
/// and edges with bond rate above 1/epsilon. Sites/edges where the sampling
/// function vanishes exactly count as resonant (rate 0 resp. infinity).
struct ResonanceReport {
    double epsilon = 0.0;
    LatticePoint center;
    std::int64_t radius = 0;
    std::vector<ResonantSite> resonant_sites;
    std::vector<ResonantEdge> resonant_edges;

    /// Rows (kind, position..., rate, epsilon); one midpoint coordinate
    /// column per lattice dimension.
    std::string to_csv() const;
};

struct LocalDensity {
    double rho_upper = 0.0;  // kappa^2 * (max incident bond rate) / death rate
    double rho_lower = 0.0;  // min version
};

/// One torus factor of the environment: field values on lattice element x
/// are read off the orbit theta + M x.
struct FieldComponent {
    Matrix M;
    TorusPoint theta;
    SamplingFunction h;
};

/// The quasiperiodic rate environment on Z^d. Component 0 drives the death
/// rate delta_x = h_0(theta_0 + M_0 x); component i >= 1 drives the bond
/// rate on axis i-1 edges, lambda_{x + e_i/2} = 1 / h_i(theta_i + M_i x).
/// Immutable after construction; every operation is a pure function of
/// (spec, lattice element), so concurrent reads need no locking.
class EnvironmentSpec {
  public:
    /// `components` holds d+1 entries, death component first.
    EnvironmentSpec(int d, std::vector<FieldComponent> components, double kappa, double zeta,
                    double sigma);

    /// Constant rates everywhere: delta_x = delta, lambda_u = lambda.
    /// lambda = 0 gives the no-bonds limit.
    static EnvironmentSpec uniform(int d, double delta, double lambda, double kappa,
                                   double zeta = 1.0, double sigma = 1.0);

    int dimension() const { return d_; }
    double kappa() const { return kappa_; }
    double zeta() const { return zeta_; }
    double sigma() const { return sigma_; }
    const FieldComponent& component(std::size_t i) const { return components_[i]; }

    int vertex_zero_count() const { return r_vertex_; }  // zeros of h_0
    int edge_zero_count() const { return r_edge_; }      // zeros of h_1..h_d combined
    /// max(2, vertex + edge zero count), the block resonance capacity.
    int resonance_capacity() const;

    /// Every sampling function admissible for the declared sigma.
    bool sigma_admissible() const;

    /// Orbit point theta_i + M_i x reduced mod 1.
    TorusPoint shift(std::size_t i, const LatticePoint& x) const;

    /// delta_x > 0. Throws std::domain_error when the orbit hits a zero of
    /// h_0 exactly (possible only for non-Diophantine M or contrived theta).
    double death_rate(const LatticePoint& x) const;

    /// lambda_u >= 0 (zero only in the no-bonds limit). Throws
    /// std::domain_error when h_i vanishes exactly (infinite rate).
    double bond_rate(const EdgeId& u) const;

    LocalDensity local_density(const LatticePoint& x) const;

    /// Exhaustive scan of the radius-L block around `center`: all sites of
    /// the l1 ball and all edges with both endpoints inside it.
    ResonanceReport scan_resonances(const LatticePoint& center, std::int64_t L,
                                    double epsilon) const;

  private:
    int d_ = 1;
    std::vector<FieldComponent> components_;
    double kappa_ = 1.0;
    double zeta_ = 1.0;
    double sigma_ = 1.0;
    int r_vertex_ = 0;
    int r_edge_ = 0;
};

}  // namespace qpperc
