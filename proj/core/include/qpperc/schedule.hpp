#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qpperc {

/// K = max(d/nu, zeta), the effective dimension/arithmetic exponent.
double derive_K(int d, int nu, double zeta);

/// The full multiscale parameter ledger. The exponents are tied together by
/// a chain of strict inequalities (see validate); `suggest` produces a valid
/// instantiation from the model constants alone.
struct ScheduleParams {
    int d = 1;
    int nu = 1;
    double zeta = 1.0;
    double sigma = 1.0;
    int R = 2;
    // Optional bookkeeping tying R to a concrete environment's sampling
    // functions; (0,0) leaves them unspecified.
    int R_vertex = 0;
    int R_edge = 0;

    double alpha = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
    double tau = 0.0;
    double p = 0.0;
    double q = 0.0;
    double beta = 0.0;

    double mu0 = 1.0;
    std::int64_t L0 = 10;
    double C = 1.0 / 50.0;  // unoptimized; exposed so sharper constants can be explored
    double C_kappa = 0.01;

    double K() const { return derive_K(d, nu, zeta); }
};

/// One violated constraint, with both sides evaluated numerically.
struct Violation {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Evaluates every inequality of the parameter system; empty result = valid.
/// Violations are data, not errors.
std::vector<Violation> validate(const ScheduleParams& params);

/// The standard instantiation gamma = 2R, alpha = 4*R*K*sigma, with eta at
/// the midpoint of its window, 1/tau at the midpoint of (eta, recip-upper)
/// so tau sits just below 1/eta, p and q at their window midpoints, and
/// beta = (1 - 1/gamma)/2. The result passes validate for every admissible
/// input. Throws std::runtime_error if a derived window degenerates.
ScheduleParams suggest(int d, int nu, double zeta, double sigma, int R);

/// Open interval of stretching exponents tau admitted by the parameter
/// system at the given (gamma, alpha, R, K, sigma, C).
struct TauWindow {
    double lo = 0.0;
    double hi = 0.0;
};
TauWindow tau_window(const ScheduleParams& params);

/// Cap on the claimed stretching exponent: C / (1 + R^2 sigma K). The
/// scheduled tau always sits strictly above this cap (the machinery runs at
/// a stronger exponent than any it certifies); throws std::logic_error when
/// a set tau does not.
double theorem_bound(const ScheduleParams& params);

/// Scale ladder row. Log values are exact carriers (the direct values
/// overflow to inf / underflow to 0 past ~10^308 and are display-only).
struct ScaleRow {
    int k = 0;
    double log10_L = 0.0;
    double log10_T = 0.0;
    double log10_eps = 0.0;
    double mu = 0.0;
    double L = 0.0;
    double T = 0.0;
    double eps = 0.0;
};

struct ScaleTable {
    std::vector<ScaleRow> rows;
    double kappa = 0.0;  // C_kappa * L0^{-alpha}

    std::string to_csv() const;
};

/// L_k = L0^{gamma^k}, T_k = L_k^eta, eps_k = L_k^{-alpha},
/// mu_{k+1} = mu_k (1 - L_{k+1}^{-beta}), all carried in log10 space.
ScaleTable scale_table(const ScheduleParams& params, std::int64_t L0, double mu0, int k_max);

}  // namespace qpperc
