#include "qpperc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "qpperc/csv.hpp"

namespace qpperc {

namespace {

constexpr double kZ95 = 1.959963984540054;

}  // namespace

ConfidenceInterval wilson_interval(std::int64_t successes, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("wilson_interval: n >= 1 required");
    if (successes < 0 || successes > n)
        throw std::invalid_argument("wilson_interval: successes out of range");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        (kZ95 / denom) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    // Clamp into [0,1] and onto the point estimate: at s = 0 or s = n the
    // exact endpoint equals p and rounding must not tip it past.
    return ConfidenceInterval{std::min(p, std::max(0.0, center - half)),
                              std::max(p, std::min(1.0, center + half))};
}

CorrelationEstimate make_estimate(std::int64_t successes, std::int64_t n) {
    const ConfidenceInterval ci = wilson_interval(successes, n);
    CorrelationEstimate e;
    e.p_hat = static_cast<double>(successes) / static_cast<double>(n);
    e.n_trials = n;
    e.ci_lo = ci.lo;
    e.ci_hi = ci.hi;
    return e;
}

std::string describe_point(const SpaceTimePoint& a) {
    return format_point(a.x) + "@" + csv::format_decimal(a.t);
}

std::string describe_query(const TwoPointQuery& q) {
    return describe_point(q.a) + "<->" + describe_point(q.b);
}

namespace {

/// Rejects malformed queries up front (wrong vertex, masked line, time
/// outside the window) so per-trial evaluation only ever sees the
/// legitimate query-hit-a-death case.
void validate_queries(const SpaceTimeBox& box, const std::shared_ptr<const BoxGeometry>& geometry,
                      const RegionMask& mask, const std::vector<TwoPointQuery>& queries) {
    const Realization empty(box, geometry,
                            std::vector<std::vector<double>>(geometry->vertex_count()),
                            std::vector<std::vector<double>>(geometry->edges().size()));
    const ClusterStructure cs(empty, mask);
    for (const TwoPointQuery& q : queries) {
        cs.interval_at(q.a);
        cs.interval_at(q.b);
    }
}

}  // namespace

std::vector<CorrelationEstimate> estimate_two_point(const EnvironmentSpec& spec,
                                                    const SpaceTimeBox& box,
                                                    const std::vector<TwoPointQuery>& queries,
                                                    const RegionMask& mask, std::int64_t n_trials,
                                                    std::uint64_t seed, int workers) {
    if (n_trials < 1) throw std::invalid_argument("estimate_two_point: n_trials >= 1 required");
    if (queries.empty()) return {};
    auto geometry = BoxGeometry::create(box.center, box.radius);
    validate_queries(box, geometry, mask, queries);
    const EnvironmentRates rates(spec);

    const int w = detail::clamp_workers(workers, n_trials);
    std::vector<std::vector<std::int64_t>> partial(
        static_cast<std::size_t>(w), std::vector<std::int64_t>(queries.size(), 0));
    detail::run_partitioned(n_trials, w, [&](int worker, std::int64_t trial) {
        const Realization r = sample_realization(rates, box, geometry, seed,
                                                 static_cast<std::uint64_t>(trial));
        const ClusterStructure cs(r, mask);
        auto& counts = partial[static_cast<std::size_t>(worker)];
        for (std::size_t i = 0; i < queries.size(); ++i) {
            const TwoPointQuery& q = queries[i];
            if (cs.alive(q.a) && cs.alive(q.b) && cs.connected(q.a, q.b)) ++counts[i];
        }
    });

    std::vector<CorrelationEstimate> out;
    out.reserve(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        std::int64_t successes = 0;
        for (const auto& counts : partial) successes += counts[i];
        CorrelationEstimate e = make_estimate(successes, n_trials);
        e.query = describe_query(queries[i]);
        out.push_back(std::move(e));
    }
    return out;
}

CorrelationEstimate estimate_two_point(const EnvironmentSpec& spec, const SpaceTimeBox& box,
                                       const SpaceTimePoint& a, const SpaceTimePoint& b,
                                       const RegionMask& mask, std::int64_t n_trials,
                                       std::uint64_t seed, int workers) {
    return estimate_two_point(spec, box, {TwoPointQuery{a, b}}, mask, n_trials, seed, workers)
        .front();
}

RegularityEstimate estimate_regularity(const EnvironmentSpec& spec, const LatticePoint& x,
                                       std::int64_t L, double eta, double mu,
                                       std::int64_t n_trials, std::uint64_t seed, int workers) {
    if (L < 0) throw std::invalid_argument("estimate_regularity: L >= 0 required");
    if (!(eta > 0.0)) throw std::invalid_argument("estimate_regularity: eta > 0 required");
    if (n_trials < 2) throw std::invalid_argument("estimate_regularity: n_trials >= 2 required");
    const double T = std::pow(static_cast<double>(L), eta);
    if (!std::isfinite(T))
        throw std::invalid_argument("estimate_regularity: time radius L^eta overflows");
    const SpaceTimeBox box{x, L, -T, T};
    auto geometry = BoxGeometry::create(box.center, box.radius);
    const EnvironmentRates rates(spec);
    const SpaceTimePoint a{x, 0.0};
    const BoundarySpec all_faces{};

    // Per-trial values land in a trial-indexed slot; the reduction below is
    // sequential, so results do not depend on the worker count.
    std::vector<double> qs(static_cast<std::size_t>(n_trials), 0.0);
    detail::run_partitioned(n_trials, workers, [&](int, std::int64_t trial) {
        const Realization r = sample_realization(rates, box, geometry, seed,
                                                 static_cast<std::uint64_t>(trial));
        const ClusterStructure cs(r);
        qs[static_cast<std::size_t>(trial)] =
            cs.alive(a) ? cs.q_statistic(a, rates, all_faces) : 0.0;
    });

    double sum = 0.0;
    for (double q : qs) sum += q;
    const double mean = sum / static_cast<double>(n_trials);
    double ss = 0.0;
    for (double q : qs) ss += (q - mean) * (q - mean);
    const double se = std::sqrt(ss / static_cast<double>(n_trials - 1) /
                                static_cast<double>(n_trials));

    RegularityEstimate out;
    out.q_hat = mean;
    out.ci_lo = mean - kZ95 * se;
    out.ci_hi = mean + kZ95 * se;
    out.threshold = std::exp(-mu * static_cast<double>(L));
    out.n_trials = n_trials;
    if (out.ci_hi < out.threshold)
        out.is_regular = Regularity::Yes;
    else if (out.ci_lo > out.threshold)
        out.is_regular = Regularity::No;
    else
        out.is_regular = Regularity::Undecided;
    return out;
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit refused: degenerate abscissa");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
        ss_tot += (ys[i] - my) * (ys[i] - my);
    }
    fit.r_squared = ss_tot == 0.0 ? 0.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

}  // namespace

DecayFit fit_spatial_decay(const std::vector<std::pair<double, CorrelationEstimate>>& points,
                           const FitOptions& options) {
    std::vector<double> xs, ys, domain;
    for (const auto& [r, est] : points) {
        if (!(est.p_hat > 0.0 && est.p_hat < 1.0)) continue;
        if (!(est.ci_hi - est.ci_lo < options.max_ci_width)) continue;
        xs.push_back(r);
        ys.push_back(std::log(est.p_hat));
        domain.push_back(r);
    }
    if (xs.size() < 3)
        throw std::invalid_argument("spatial fit refused: fewer than 3 usable points");
    const LineFit lf = least_squares(xs, ys);
    DecayFit fit;
    fit.kind = DecayKind::SpatialExponential;
    fit.mu_hat = lf.slope == 0.0 ? 0.0 : -lf.slope;
    fit.tau_hat = 1.0;
    fit.r_squared = lf.r_squared;
    fit.domain = std::move(domain);
    return fit;
}

DecayFit fit_temporal_stretch(const std::vector<std::pair<double, CorrelationEstimate>>& points,
                              const FitOptions& options) {
    std::vector<double> xs, ys, domain;
    for (const auto& [dt, est] : points) {
        if (!(dt > 0.0)) throw std::invalid_argument("temporal fit: time gaps must be positive");
        if (!(est.p_hat >= options.min_p && est.p_hat <= options.max_p)) continue;
        const double log_p = std::log(est.p_hat);
        const double halfwidth = 0.5 * (est.ci_hi - est.ci_lo);
        if (!(halfwidth < options.max_rel_halfwidth * std::fabs(log_p))) continue;
        xs.push_back(std::log(dt));
        ys.push_back(std::log(-log_p));
        domain.push_back(dt);
    }
    if (xs.size() < 3)
        throw std::invalid_argument("temporal fit refused: fewer than 3 usable points");
    const auto [dt_min, dt_max] = std::minmax_element(domain.begin(), domain.end());
    if (!(*dt_max / *dt_min >= 10.0))
        throw std::invalid_argument("temporal fit refused: time gaps span less than one decade");
    const LineFit lf = least_squares(xs, ys);
    DecayFit fit;
    fit.kind = DecayKind::TemporalStretched;
    fit.tau_hat = lf.slope;
    fit.mu_hat = std::exp(lf.intercept);
    fit.r_squared = lf.r_squared;
    fit.domain = std::move(domain);
    return fit;
}

bool evaluate_event(const Realization& r, const PercolationEvent& event) {
    const ClusterStructure cs(r, event.mask);
    switch (event.kind) {
        case PercolationEvent::Kind::Connect:
            return cs.alive(event.a) && cs.alive(event.b) && cs.connected(event.a, event.b);
        case PercolationEvent::Kind::BoundaryHit:
            return cs.alive(event.a) && cs.boundary_hit(event.a, event.faces);
        case PercolationEvent::Kind::Crossing:
            return cs.vertical_crossing();
    }
    throw std::logic_error("evaluate_event: unknown event kind");
}

FkgProbeResult fkg_probe(const EnvironmentSpec& spec, const SpaceTimeBox& box,
                         const PercolationEvent& event_x, const PercolationEvent& event_y,
                         std::int64_t n_trials, std::uint64_t seed, int workers) {
    if (n_trials < 1) throw std::invalid_argument("fkg_probe: n_trials >= 1 required");
    auto geometry = BoxGeometry::create(box.center, box.radius);
    const EnvironmentRates rates(spec);

    const int w = detail::clamp_workers(workers, n_trials);
    struct Counts {
        std::int64_t x = 0, y = 0, xy = 0;
    };
    std::vector<Counts> partial(static_cast<std::size_t>(w));
    detail::run_partitioned(n_trials, w, [&](int worker, std::int64_t trial) {
        const Realization r = sample_realization(rates, box, geometry, seed,
                                                 static_cast<std::uint64_t>(trial));
        const bool ex = evaluate_event(r, event_x);
        const bool ey = evaluate_event(r, event_y);
        Counts& c = partial[static_cast<std::size_t>(worker)];
        c.x += ex;
        c.y += ey;
        c.xy += ex && ey;
    });
    Counts total;
    for (const Counts& c : partial) {
        total.x += c.x;
        total.y += c.y;
        total.xy += c.xy;
    }

    const double nn = static_cast<double>(n_trials);
    FkgProbeResult out;
    out.n_trials = n_trials;
    out.p_x = static_cast<double>(total.x) / nn;
    out.p_y = static_cast<double>(total.y) / nn;
    out.p_xy = static_cast<double>(total.xy) / nn;
    const double vx = out.p_x * (1.0 - out.p_x);
    const double vy = out.p_y * (1.0 - out.p_y);
    const double vxy = out.p_xy * (1.0 - out.p_xy);
    out.se = std::sqrt((vxy + out.p_y * out.p_y * vx + out.p_x * out.p_x * vy) / nn);
    out.pass = out.p_xy >= out.p_x * out.p_y - 4.0 * out.se;
    return out;
}

std::string estimates_csv(const std::vector<CorrelationEstimate>& estimates) {
    std::ostringstream out;
    csv::write_row(out, {"query", "p_hat", "ci_lo", "ci_hi", "n"});
    for (const CorrelationEstimate& e : estimates)
        csv::write_row(out, {e.query, csv::format_decimal(e.p_hat), csv::format_decimal(e.ci_lo),
                             csv::format_decimal(e.ci_hi), csv::format_int(e.n_trials)});
    return out.str();
}

std::string fits_csv(const std::vector<DecayFit>& fits) {
    std::ostringstream out;
    csv::write_row(out, {"kind", "mu_hat", "tau_hat", "r_squared", "n_points"});
    for (const DecayFit& f : fits)
        csv::write_row(out, {f.kind == DecayKind::SpatialExponential ? "spatial-exponential"
                                                                     : "temporal-stretched",
                             csv::format_decimal(f.mu_hat), csv::format_decimal(f.tau_hat),
                             csv::format_decimal(f.r_squared),
                             csv::format_int(static_cast<std::int64_t>(f.domain.size()))});
    return out.str();
}

}  // namespace qpperc
