#include "qpperc/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qpperc/csv.hpp"

namespace qpperc {

double derive_K(int d, int nu, double zeta) {
    if (d < 1 || nu < 1) throw std::invalid_argument("derive_K: d, nu >= 1 required");
    if (!(zeta > 0.0)) throw std::invalid_argument("derive_K: zeta > 0 required");
    return std::max(static_cast<double>(d) / static_cast<double>(nu), zeta);
}

namespace {

/// Shared lower bound of the 1/tau and eta windows:
///   (gamma/(gamma-1)) * (1 + 2*alpha*R*(gamma+R)/(gamma-R)).
double recip_tau_lower(const ScheduleParams& s) {
    const double g = s.gamma, R = s.R;
    return (g / (g - 1.0)) * (1.0 + 2.0 * s.alpha * R * (g + R) / (g - R));
}

/// Upper bound of the 1/tau window: (1 + R^2 K sigma)/C.
double recip_tau_upper(const ScheduleParams& s) {
    const double R = s.R;
    return (1.0 + R * R * s.K() * s.sigma) / s.C;
}

}  // namespace

std::vector<Violation> validate(const ScheduleParams& s) {
    std::vector<Violation> out;
    auto require = [&out](bool ok, const char* name, double lhs, double rhs) {
        if (!ok) out.push_back({name, lhs, rhs});
    };

    // Sanity of the raw fields first; the chain is meaningless without it.
    require(s.d >= 1, "d >= 1", s.d, 1.0);
    require(s.nu >= 1, "nu >= 1", s.nu, 1.0);
    require(s.zeta > 0.0, "zeta > 0", s.zeta, 0.0);
    require(s.sigma > 0.0, "sigma > 0", s.sigma, 0.0);
    require(s.R >= 2, "R >= 2", s.R, 2.0);
    require(s.alpha > 0.0, "alpha > 0", s.alpha, 0.0);
    require(s.gamma > 1.0, "gamma > 1", s.gamma, 1.0);
    require(s.tau > 0.0, "tau > 0", s.tau, 0.0);
    require(s.eta > 0.0, "eta > 0", s.eta, 0.0);
    require(s.mu0 > 0.0, "mu0 > 0", s.mu0, 0.0);
    require(s.L0 >= 2, "L0 >= 2", static_cast<double>(s.L0), 2.0);
    require(s.C > 0.0, "C > 0", s.C, 0.0);
    require(s.C_kappa > 0.0, "C_kappa > 0", s.C_kappa, 0.0);
    if (s.R_vertex != 0 || s.R_edge != 0) {
        const int derived = std::max(2, s.R_vertex + s.R_edge);
        require(s.R == derived, "R == max(2, R_vertex + R_edge)", s.R, derived);
    }
    if (!out.empty()) return out;

    const double K = s.K();
    const double R = s.R;
    const double recip_tau = 1.0 / s.tau;
    const double lower = recip_tau_lower(s);
    const double upper = recip_tau_upper(s);

    require(s.alpha > s.sigma * R * K, "alpha > sigma*R*K", s.alpha, s.sigma * R * K);
    require(s.alpha / (s.sigma * K) > s.gamma, "alpha/(sigma*K) > gamma", s.alpha / (s.sigma * K),
            s.gamma);
    require(s.gamma > R, "gamma > R", s.gamma, R);
    require(upper > recip_tau, "(1 + R^2*K*sigma)/C > 1/tau", upper, recip_tau);
    require(recip_tau > lower, "1/tau > (gamma/(gamma-1))*(1 + 2*alpha*R*(gamma+R)/(gamma-R))",
            recip_tau, lower);
    require(recip_tau > s.eta, "1/tau > eta", recip_tau, s.eta);
    require(s.eta > lower, "eta > (gamma/(gamma-1))*(1 + 2*alpha*R*(gamma+R)/(gamma-R))", s.eta,
            lower);
    const double p_upper = ((s.gamma - 1.0) * s.eta - s.gamma) / (s.alpha * s.gamma);
    const double p_lower = 2.0 * R * (s.gamma + R) / (s.gamma - R);
    require(p_upper > s.p, "((gamma-1)*eta - gamma)/(alpha*gamma) > p", p_upper, s.p);
    require(s.p > p_lower, "p > 2*R*(gamma+R)/(gamma-R)", s.p, p_lower);
    const double q_upper = ((s.gamma - 1.0) * s.eta - s.p * s.alpha * s.gamma) / s.gamma;
    require(q_upper > s.q, "((gamma-1)*eta - p*alpha*gamma)/gamma > q", q_upper, s.q);
    require(s.q > 1.0, "q > 1", s.q, 1.0);
    require(s.beta > 0.0, "beta > 0", s.beta, 0.0);
    require(s.beta < 1.0 - 1.0 / s.gamma, "beta < 1 - 1/gamma", s.beta, 1.0 - 1.0 / s.gamma);
    return out;
}

ScheduleParams suggest(int d, int nu, double zeta, double sigma, int R) {
    if (R < 2) throw std::invalid_argument("suggest: R >= 2 required");
    if (!(sigma > 0.0)) throw std::invalid_argument("suggest: sigma > 0 required");
    ScheduleParams s;
    s.d = d;
    s.nu = nu;
    s.zeta = zeta;
    s.sigma = sigma;
    s.R = R;
    const double K = derive_K(d, nu, zeta);
    s.gamma = 2.0 * R;
    s.alpha = 4.0 * R * K * sigma;

    const double lower = recip_tau_lower(s);
    const double upper = recip_tau_upper(s);
    if (!(upper > lower)) throw std::runtime_error("suggest: empty 1/tau window");
    s.eta = 0.5 * (lower + upper);
    s.tau = 1.0 / (0.5 * (s.eta + upper));

    const double p_lower = 2.0 * R * (s.gamma + R) / (s.gamma - R);
    const double p_upper = ((s.gamma - 1.0) * s.eta - s.gamma) / (s.alpha * s.gamma);
    if (!(p_upper > p_lower)) throw std::runtime_error("suggest: empty p window");
    s.p = 0.5 * (p_lower + p_upper);

    const double q_upper = ((s.gamma - 1.0) * s.eta - s.p * s.alpha * s.gamma) / s.gamma;
    if (!(q_upper > 1.0)) throw std::runtime_error("suggest: empty q window");
    s.q = 0.5 * (1.0 + q_upper);

    s.beta = 0.5 * (1.0 - 1.0 / s.gamma);
    return s;
}

TauWindow tau_window(const ScheduleParams& params) {
    return TauWindow{1.0 / recip_tau_upper(params), 1.0 / recip_tau_lower(params)};
}

double theorem_bound(const ScheduleParams& params) {
    const double R = params.R;
    const double bound = params.C / (1.0 + R * R * params.sigma * params.K());
    if (params.tau > 0.0 && !(params.tau > bound))
        throw std::logic_error("theorem_bound: scheduled tau must exceed the exponent cap");
    return bound;
}

ScaleTable scale_table(const ScheduleParams& params, std::int64_t L0, double mu0, int k_max) {
    if (L0 < 2) throw std::invalid_argument("scale_table: L0 >= 2 required");
    if (k_max < 0) throw std::invalid_argument("scale_table: k_max >= 0 required");
    if (!(mu0 > 0.0)) throw std::invalid_argument("scale_table: mu0 > 0 required");
    ScaleTable table;
    table.kappa = params.C_kappa * std::pow(static_cast<double>(L0), -params.alpha);
    table.rows.reserve(static_cast<std::size_t>(k_max) + 1);
    double log10_L = std::log10(static_cast<double>(L0));
    double mu = mu0;
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) {
            log10_L *= params.gamma;
            mu *= 1.0 - std::pow(10.0, -params.beta * log10_L);
        }
        ScaleRow row;
        row.k = k;
        row.log10_L = log10_L;
        row.log10_T = params.eta * log10_L;
        row.log10_eps = -params.alpha * log10_L;
        row.mu = mu;
        row.L = std::pow(10.0, row.log10_L);
        row.T = std::pow(10.0, row.log10_T);
        row.eps = std::pow(10.0, row.log10_eps);
        table.rows.push_back(row);
    }
    return table;
}

std::string ScaleTable::to_csv() const {
    std::ostringstream out;
    csv::write_row(out, {"k", "log10_L", "log10_T", "log10_eps", "mu", "L", "T", "eps", "kappa"});
    for (const ScaleRow& r : rows)
        csv::write_row(out, {csv::format_int(r.k), csv::format_decimal(r.log10_L),
                             csv::format_decimal(r.log10_T), csv::format_decimal(r.log10_eps),
                             csv::format_decimal(r.mu), csv::format_decimal(r.L),
                             csv::format_decimal(r.T), csv::format_decimal(r.eps),
                             csv::format_decimal(kappa)});
    return out.str();
}

}  // namespace qpperc
