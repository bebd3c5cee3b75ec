#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpperc/clusters.hpp"
#include "qpperc/environment.hpp"
#include "qpperc/realization.hpp"

namespace qpperc {

/// Wilson score interval, valid down to p near 0 where decay measurements
/// live. z is the two-sided 95% normal quantile.
struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
};
ConfidenceInterval wilson_interval(std::int64_t successes, std::int64_t n);

struct CorrelationEstimate {
    double p_hat = 0.0;
    std::int64_t n_trials = 0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::string query;  // human-readable descriptor, comma-free for CSV embedding
};

/// Estimate with the Wilson interval attached; query descriptor left empty.
CorrelationEstimate make_estimate(std::int64_t successes, std::int64_t n);

struct TwoPointQuery {
    SpaceTimePoint a;
    SpaceTimePoint b;
};

/// Monte Carlo probability that a and b lie in the same cluster of the
/// masked region. A query point deleted by a death in some trial counts as
/// not connected there. Deterministic in (spec, box, queries, n_trials,
/// seed); `workers` affects wall-clock only (per-query success counts are
/// summed over trials, an order-free reduction).
std::vector<CorrelationEstimate> estimate_two_point(const EnvironmentSpec& spec,
                                                    const SpaceTimeBox& box,
                                                    const std::vector<TwoPointQuery>& queries,
                                                    const RegionMask& mask, std::int64_t n_trials,
                                                    std::uint64_t seed, int workers = 1);
CorrelationEstimate estimate_two_point(const EnvironmentSpec& spec, const SpaceTimeBox& box,
                                       const SpaceTimePoint& a, const SpaceTimePoint& b,
                                       const RegionMask& mask, std::int64_t n_trials,
                                       std::uint64_t seed, int workers = 1);

enum class Regularity { Yes, No, Undecided };

struct RegularityEstimate {
    double q_hat = 0.0;
    double ci_lo = 0.0;  // normal 95% interval for the mean
    double ci_hi = 0.0;
    double threshold = 0.0;  // e^{-mu L}
    std::int64_t n_trials = 0;
    Regularity is_regular = Regularity::Undecided;
};

/// Mean of the per-realization boundary-communication statistic on the box
/// of spatial radius L and time radius L^eta centered at (x, 0), compared
/// against e^{-mu L}: Yes when the whole interval sits below, No when it
/// sits above.
RegularityEstimate estimate_regularity(const EnvironmentSpec& spec, const LatticePoint& x,
                                       std::int64_t L, double eta, double mu,
                                       std::int64_t n_trials, std::uint64_t seed, int workers = 1);

enum class DecayKind { SpatialExponential, TemporalStretched };

struct DecayFit {
    DecayKind kind = DecayKind::SpatialExponential;
    double mu_hat = 0.0;
    double tau_hat = 1.0;  // meaningful for the temporal kind only
    double r_squared = 0.0;
    std::vector<double> domain;  // distances / time gaps that entered the fit
};

struct FitOptions {
    double max_ci_width = 0.1;     // absolute cap on ci_hi - ci_lo (spatial fit)
    double min_p = 1e-4;           // temporal fit keeps p_hat in [min_p, max_p]
    double max_p = 0.99;
    double max_rel_halfwidth = 0.25;  // CI half-width < this fraction of |log p_hat|
};

/// Least-squares slope of log p against r; mu_hat = -slope. Points with
/// p_hat outside (0,1) or an interval wider than the cap are dropped; fewer
/// than 3 survivors refuse the fit (std::invalid_argument).
DecayFit fit_spatial_decay(const std::vector<std::pair<double, CorrelationEstimate>>& points,
                           const FitOptions& options = {});

/// Least-squares line of log(-log p) against log dt; tau_hat = slope,
/// mu_hat = exp(intercept). The double log amplifies noise at both ends, so
/// only p_hat in [min_p, max_p] with tight relative CI enter. Requires >= 3
/// survivors spanning at least one decade in dt.
DecayFit fit_temporal_stretch(const std::vector<std::pair<double, CorrelationEstimate>>& points,
                              const FitOptions& options = {});

/// One increasing event of the percolation configuration. The menu is
/// closed under monotonicity: adding a bond can only help, adding a death
/// only hurt, so FKG-type positive association applies to any pair.
struct PercolationEvent {
    enum class Kind { Connect, BoundaryHit, Crossing };
    Kind kind = Kind::Connect;
    SpaceTimePoint a;        // Connect, BoundaryHit
    SpaceTimePoint b;        // Connect
    BoundarySpec faces{};    // BoundaryHit
    RegionMask mask{};       // region the event is evaluated in
};

bool evaluate_event(const Realization& r, const PercolationEvent& event);

struct FkgProbeResult {
    double p_xy = 0.0;
    double p_x = 0.0;
    double p_y = 0.0;
    double se = 0.0;  // conservative standard error of p_xy - p_x * p_y
    bool pass = false;
    std::int64_t n_trials = 0;
};

/// Estimates P(X and Y), P(X), P(Y) on one shared trial stream and checks
/// the positive-association inequality p_xy >= p_x * p_y - 4 se. The SE is
/// the delta-method bound (v_xy + p_y^2 v_x + p_x^2 v_y)/n, which ignores
/// the variance-reducing covariances and so over-covers.
FkgProbeResult fkg_probe(const EnvironmentSpec& spec, const SpaceTimeBox& box,
                         const PercolationEvent& event_x, const PercolationEvent& event_y,
                         std::int64_t n_trials, std::uint64_t seed, int workers = 1);

/// Descriptor strings used in CSV output.
std::string describe_point(const SpaceTimePoint& a);
std::string describe_query(const TwoPointQuery& q);

/// Rows (query, p_hat, ci_lo, ci_hi, n).
std::string estimates_csv(const std::vector<CorrelationEstimate>& estimates);
/// Rows (kind, mu_hat, tau_hat, r_squared, n_points).
std::string fits_csv(const std::vector<DecayFit>& fits);

}  // namespace qpperc
