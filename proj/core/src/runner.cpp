#include "qpperc/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "qpperc/csv.hpp"
#include "qpperc/version.hpp"

namespace qpperc {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::string> effective_formats(const RunnerOptions& options,
                                           const ExperimentConfig& config) {
    const std::vector<std::string>& f =
        options.formats.empty() ? config.output.formats : options.formats;
    for (const std::string& fmt : f)
        if (fmt != "csv" && fmt != "json")
            throw ConfigError("unknown output format '" + fmt + "' (expected csv or json)");
    return f;
}

bool wants(const std::vector<std::string>& formats, const char* fmt) {
    for (const std::string& f : formats)
        if (f == fmt) return true;
    return false;
}

void write_text(const std::string& dir, const std::string& name, const std::string& content,
                std::vector<std::string>& files) {
    fs::create_directories(dir);
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
    files.push_back(name);
}

ResultRecord make_record(const ExperimentConfig& config, const RunnerOptions& options) {
    ResultRecord rec;
    const std::string canonical = config.render();
    rec.version = std::string("qpperc ") + kVersionDescribe;
    rec.config_hash = hex64(fnv1a64(canonical));
    rec.experiment_id = hex64(fnv1a64(options.subcommand + "\n" + canonical));
    return rec;
}

ordered_json estimate_json(const CorrelationEstimate& e) {
    return ordered_json{{"query", e.query},
                        {"p_hat", e.p_hat},
                        {"ci_lo", e.ci_lo},
                        {"ci_hi", e.ci_hi},
                        {"n_trials", e.n_trials}};
}

ordered_json fit_json(const DecayFit& f) {
    return ordered_json{
        {"kind",
         f.kind == DecayKind::SpatialExponential ? "spatial-exponential" : "temporal-stretched"},
        {"mu_hat", f.mu_hat},
        {"tau_hat", f.tau_hat},
        {"r_squared", f.r_squared},
        {"domain", f.domain}};
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

double scan_epsilon(const ExperimentConfig& config, std::int64_t L) {
    if (!config.scan.epsilon_from_schedule) {
        if (!(config.scan.epsilon > 0.0 && config.scan.epsilon < 1.0))
            throw ConfigError("scan.epsilon must lie in (0,1) unless epsilon_from_schedule");
        return config.scan.epsilon;
    }
    // Resonance threshold of the scale whose blocks have side L: blocks of
    // side L are cleaned at eps = (L^{1/gamma})^{-alpha} = L^{-alpha/gamma}.
    const ScheduleParams params = config.schedule.build();
    return std::pow(static_cast<double>(L), -params.alpha / params.gamma);
}

std::vector<std::string> coordinate_header(int d, const char* stem) {
    std::vector<std::string> h;
    for (int i = 1; i <= d; ++i) h.push_back(stem + std::to_string(i));
    return h;
}

std::string combined_scan_csv(const std::vector<ResonanceReport>& scans, int d) {
    std::ostringstream out;
    std::vector<std::string> header{"L"};
    for (const std::string& c : coordinate_header(d, "center")) header.push_back(c);
    header.push_back("kind");
    for (const std::string& c : coordinate_header(d, "x")) header.push_back(c);
    header.push_back("rate");
    header.push_back("epsilon");
    csv::write_row(out, header);
    for (const ResonanceReport& rep : scans) {
        std::vector<std::string> prefix{csv::format_int(rep.radius)};
        for (std::int64_t c : rep.center) prefix.push_back(csv::format_int(c));
        for (const ResonantSite& s : rep.resonant_sites) {
            std::vector<std::string> row = prefix;
            row.push_back("site");
            for (std::int64_t c : s.x) row.push_back(csv::format_int(c));
            row.push_back(csv::format_decimal(s.delta));
            row.push_back(csv::format_decimal(rep.epsilon));
            csv::write_row(out, row);
        }
        for (const ResonantEdge& e : rep.resonant_edges) {
            std::vector<std::string> row = prefix;
            row.push_back("edge");
            for (double c : e.u.midpoint()) row.push_back(csv::format_decimal(c));
            row.push_back(csv::format_decimal(e.lambda));
            row.push_back(csv::format_decimal(rep.epsilon));
            csv::write_row(out, row);
        }
    }
    return out.str();
}

std::string scan_summary_csv(const std::vector<ResonanceReport>& scans, int d,
                             const EnvironmentSpec& spec) {
    std::ostringstream out;
    std::vector<std::string> header{"L"};
    for (const std::string& c : coordinate_header(d, "center")) header.push_back(c);
    header.insert(header.end(), {"epsilon", "resonant_sites", "resonant_edges", "R_vertex",
                                 "R_edge", "capacity"});
    csv::write_row(out, header);
    for (const ResonanceReport& rep : scans) {
        std::vector<std::string> row{csv::format_int(rep.radius)};
        for (std::int64_t c : rep.center) row.push_back(csv::format_int(c));
        row.push_back(csv::format_decimal(rep.epsilon));
        row.push_back(csv::format_int(static_cast<std::int64_t>(rep.resonant_sites.size())));
        row.push_back(csv::format_int(static_cast<std::int64_t>(rep.resonant_edges.size())));
        row.push_back(csv::format_int(spec.vertex_zero_count()));
        row.push_back(csv::format_int(spec.edge_zero_count()));
        row.push_back(csv::format_int(spec.resonance_capacity()));
        csv::write_row(out, row);
    }
    return out.str();
}

std::string certificates_csv(const EnvironmentSpec& spec, std::int64_t N) {
    std::ostringstream out;
    csv::write_row(out, {"component", "zeta", "N", "c_hat", "witness"});
    for (int i = 0; i <= spec.dimension(); ++i) {
        const DiophantineCertificate cert =
            diophantine_certificate(spec.component(static_cast<std::size_t>(i)).M, spec.zeta(), N);
        csv::write_row(out, {csv::format_int(i), csv::format_decimal(spec.zeta()),
                             csv::format_int(N), csv::format_decimal(cert.c_hat),
                             format_point(cert.witness)});
    }
    return out.str();
}

SpaceTimeBox run_box(const ExperimentConfig& config) {
    SpaceTimeBox box;
    box.center = config.run.center;
    box.radius = config.run.radius;
    box.t_lo = config.run.t_lo;
    box.t_hi = config.run.t_hi;
    if (box.center.size() != static_cast<std::size_t>(config.environment.d))
        throw ConfigError("run.center dimension does not match environment.d");
    if (box.radius < 0) throw ConfigError("run.radius must be >= 0");
    if (!(box.t_lo < box.t_hi)) throw ConfigError("run window needs t_lo < t_hi");
    return box;
}

std::vector<TwoPointQuery> config_queries(const ExperimentConfig& config) {
    std::vector<TwoPointQuery> queries;
    queries.reserve(config.run.queries.size());
    for (const QueryConfig& q : config.run.queries)
        queries.push_back({{q.a, q.ta}, {q.b, q.tb}});
    return queries;
}

std::string plot_header(const char* x, const char* y) {
    return std::string(x) + "\t" + y + "\t" + y + "_ci_lo\t" + y + "_ci_hi\n";
}

std::string plot_log_rows(const std::vector<std::pair<double, CorrelationEstimate>>& points,
                          const char* x_name) {
    std::string out = plot_header(x_name, "log_p");
    for (const auto& [x, e] : points) {
        out += csv::format_decimal(x);
        out += "\t" + csv::format_decimal(std::log(e.p_hat));
        out += "\t" + csv::format_decimal(std::log(e.ci_lo));
        out += "\t" + csv::format_decimal(std::log(e.ci_hi));
        out += "\n";
    }
    return out;
}

std::string plot_loglog_rows(const std::vector<std::pair<double, CorrelationEstimate>>& points) {
    // log(-log p) is decreasing in p, so the CI endpoints swap roles.
    std::string out = plot_header("log_dt", "loglog_inv_p");
    for (const auto& [dt, e] : points) {
        if (!(e.p_hat > 0.0 && e.p_hat < 1.0)) continue;
        const auto transform = [](double p) { return std::log(-std::log(p)); };
        out += csv::format_decimal(std::log(dt));
        out += "\t" + csv::format_decimal(transform(e.p_hat));
        out += "\t" + csv::format_decimal(e.ci_hi < 1.0 ? transform(e.ci_hi)
                                                        : -std::numeric_limits<double>::infinity());
        out += "\t" + csv::format_decimal(e.ci_lo > 0.0 ? transform(e.ci_lo)
                                                        : std::numeric_limits<double>::infinity());
        out += "\n";
    }
    return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

std::string resolve_output_dir(const RunnerOptions& options, const ExperimentConfig& config) {
    if (!options.out_dir.empty()) return options.out_dir;
    if (!config.output.directory.empty()) return config.output.directory;
    if (const char* env = std::getenv("QPPERC_OUT"); env && *env) return env;
    return ".";
}

RunOutcome run_env_scan(const ExperimentConfig& config, const RunnerOptions& options) {
    const auto start = Clock::now();
    RunOutcome outcome;
    outcome.record = make_record(config, options);
    outcome.out_dir = resolve_output_dir(options, config);
    const std::vector<std::string> formats = effective_formats(options, config);

    const EnvironmentSpec spec = config.environment.build();
    if (config.scan.L.empty()) throw ConfigError("env-scan needs a non-empty scan.L list");
    std::vector<LatticePoint> centers = config.scan.centers;
    if (centers.empty()) centers.push_back(LatticePoint(config.environment.d, 0));
    for (const LatticePoint& c : centers)
        if (c.size() != static_cast<std::size_t>(config.environment.d))
            throw ConfigError("scan.centers entries must have environment.d coordinates");

    for (std::int64_t L : config.scan.L) {
        const double eps = scan_epsilon(config, L);
        for (const LatticePoint& center : centers)
            outcome.record.scans.push_back(spec.scan_resonances(center, L, eps));
    }

    if (wants(formats, "csv")) {
        write_text(outcome.out_dir, "resonances.csv",
                   combined_scan_csv(outcome.record.scans, config.environment.d), outcome.files);
        write_text(outcome.out_dir, "scan_summary.csv",
                   scan_summary_csv(outcome.record.scans, config.environment.d, spec),
                   outcome.files);
        write_text(outcome.out_dir, "certificates.csv",
                   certificates_csv(spec, config.scan.certificate_N), outcome.files);
    }
    if (wants(formats, "json")) {
        ordered_json scans = ordered_json::array();
        for (const ResonanceReport& rep : outcome.record.scans) {
            ordered_json sites = ordered_json::array();
            for (const ResonantSite& s : rep.resonant_sites)
                sites.push_back(ordered_json{{"x", s.x}, {"delta", s.delta}});
            ordered_json edges = ordered_json::array();
            for (const ResonantEdge& e : rep.resonant_edges)
                edges.push_back(
                    ordered_json{{"base", e.u.base}, {"axis", e.u.axis}, {"lambda", e.lambda}});
            scans.push_back(ordered_json{{"L", rep.radius},
                                         {"center", rep.center},
                                         {"epsilon", rep.epsilon},
                                         {"sites", std::move(sites)},
                                         {"edges", std::move(edges)}});
        }
        write_text(outcome.out_dir, "resonances.json", json_text(scans), outcome.files);
    }
    outcome.record.wall_ms = elapsed_ms(start);
    return outcome;
}

RunOutcome run_simulate(const ExperimentConfig& config, const RunnerOptions& options) {
    const auto start = Clock::now();
    RunOutcome outcome;
    outcome.record = make_record(config, options);
    outcome.out_dir = resolve_output_dir(options, config);
    const std::vector<std::string> formats = effective_formats(options, config);

    const EnvironmentSpec spec = config.environment.build();
    const SpaceTimeBox box = run_box(config);
    const Realization r = sample_realization(spec, box, config.run.seed, 0);
    const ClusterStructure clusters(r);

    write_text(outcome.out_dir, "realization.txt", r.dump(), outcome.files);
    if (wants(formats, "csv"))
        write_text(outcome.out_dir, "clusters.csv", clusters.clusters_csv(), outcome.files);
    if (wants(formats, "json")) {
        const ordered_json summary{
            {"deaths", r.death_count()},
            {"bonds", r.bond_count()},
            {"intervals", clusters.interval_count()},
            {"clusters", clusters.cluster_count()},
            {"vertical_crossing", clusters.vertical_crossing()},
        };
        write_text(outcome.out_dir, "simulate_summary.json", json_text(summary), outcome.files);
    }
    outcome.record.wall_ms = elapsed_ms(start);
    return outcome;
}

RunOutcome run_estimate(const ExperimentConfig& config, const RunnerOptions& options) {
    const auto start = Clock::now();
    RunOutcome outcome;
    outcome.record = make_record(config, options);
    outcome.out_dir = resolve_output_dir(options, config);
    const std::vector<std::string> formats = effective_formats(options, config);

    const EnvironmentSpec spec = config.environment.build();
    const SpaceTimeBox box = run_box(config);
    const std::vector<TwoPointQuery> queries = config_queries(config);
    if (queries.empty()) throw ConfigError("estimate needs at least one [[run.query]] block");

    outcome.record.estimates = estimate_two_point(spec, box, queries, RegionMask{},
                                                  config.run.n_trials, config.run.seed,
                                                  config.run.workers);

    if (wants(formats, "csv"))
        write_text(outcome.out_dir, "estimates.csv", estimates_csv(outcome.record.estimates),
                   outcome.files);
    if (wants(formats, "json")) {
        ordered_json rows = ordered_json::array();
        for (const CorrelationEstimate& e : outcome.record.estimates)
            rows.push_back(estimate_json(e));
        write_text(outcome.out_dir, "estimates.json", json_text(rows), outcome.files);
    }
    outcome.record.wall_ms = elapsed_ms(start);
    return outcome;
}

RunOutcome run_fit(const ExperimentConfig& config, const RunnerOptions& options) {
    const auto start = Clock::now();
    RunOutcome outcome;
    outcome.record = make_record(config, options);
    outcome.out_dir = resolve_output_dir(options, config);
    const std::vector<std::string> formats = effective_formats(options, config);

    const EnvironmentSpec spec = config.environment.build();
    const SpaceTimeBox box = run_box(config);
    if (config.fit.spatial_distances.empty() && config.fit.temporal_gaps.empty())
        throw ConfigError("fit needs spatial_distances and/or temporal_gaps in [fit]");
    const double t_mid = 0.5 * (box.t_lo + box.t_hi);

    std::vector<TwoPointQuery> queries;
    std::vector<std::int64_t> spatial_r;
    for (double r : config.fit.spatial_distances) {
        const auto ri = static_cast<std::int64_t>(std::llround(r));
        if (!(r > 0.0) || static_cast<double>(ri) != r)
            throw ConfigError("fit.spatial_distances must be positive integers (lattice steps)");
        if (ri > box.radius)
            throw ConfigError("fit.spatial_distances exceed run.radius; enlarge the box");
        spatial_r.push_back(ri);
        LatticePoint b = box.center;
        b[0] += ri;
        queries.push_back({{box.center, t_mid}, {b, t_mid}});
    }
    for (double dt : config.fit.temporal_gaps) {
        if (!(dt > 0.0)) throw ConfigError("fit.temporal_gaps must be positive");
        if (dt > box.length())
            throw ConfigError("fit.temporal_gaps exceed the run window; widen t_lo..t_hi");
        queries.push_back({{box.center, t_mid - 0.5 * dt}, {box.center, t_mid + 0.5 * dt}});
    }

    outcome.record.estimates = estimate_two_point(spec, box, queries, RegionMask{},
                                                  config.run.n_trials, config.run.seed,
                                                  config.run.workers);

    const std::size_t n_spatial = spatial_r.size();
    for (std::size_t i = 0; i < n_spatial; ++i)
        outcome.record.spatial_points.emplace_back(static_cast<double>(spatial_r[i]),
                                                   outcome.record.estimates[i]);
    for (std::size_t i = 0; i < config.fit.temporal_gaps.size(); ++i)
        outcome.record.temporal_points.emplace_back(config.fit.temporal_gaps[i],
                                                    outcome.record.estimates[n_spatial + i]);

    if (!outcome.record.spatial_points.empty())
        outcome.record.fits.push_back(fit_spatial_decay(outcome.record.spatial_points));
    if (!outcome.record.temporal_points.empty())
        outcome.record.fits.push_back(fit_temporal_stretch(outcome.record.temporal_points));

    if (wants(formats, "csv")) {
        write_text(outcome.out_dir, "fit_estimates.csv", estimates_csv(outcome.record.estimates),
                   outcome.files);
        write_text(outcome.out_dir, "fits.csv", fits_csv(outcome.record.fits), outcome.files);
    }
    if (wants(formats, "json")) {
        ordered_json rows = ordered_json::array();
        for (const DecayFit& f : outcome.record.fits) rows.push_back(fit_json(f));
        write_text(outcome.out_dir, "fits.json", json_text(rows), outcome.files);
    }
    for (const std::string& f : emit_plot_data(outcome.record, outcome.out_dir))
        outcome.files.push_back(f);
    outcome.record.wall_ms = elapsed_ms(start);
    return outcome;
}

RunOutcome run_schedule(const ExperimentConfig& config, const RunnerOptions& options) {
    const auto start = Clock::now();
    RunOutcome outcome;
    outcome.record = make_record(config, options);
    outcome.out_dir = resolve_output_dir(options, config);
    const std::vector<std::string> formats = effective_formats(options, config);

    const ScheduleParams params = config.schedule.build();
    const std::vector<Violation> violations = validate(params);
    if (!violations.empty()) {
        std::string msg = "schedule parameters violate the inequality system:";
        for (const Violation& v : violations) {
            msg += "\n  " + v.name + "  (lhs " + csv::format_decimal(v.lhs) + ", rhs " +
                   csv::format_decimal(v.rhs) + ")";
        }
        throw ConfigError(msg);
    }
    const ScaleTable table = scale_table(params, params.L0, params.mu0, config.schedule.k_max);
    const TauWindow window = tau_window(params);
    const double bound = theorem_bound(params);

    if (wants(formats, "csv"))
        write_text(outcome.out_dir, "schedule.csv", table.to_csv(), outcome.files);
    if (wants(formats, "json")) {
        const ordered_json j{
            {"d", params.d},
            {"nu", params.nu},
            {"zeta", params.zeta},
            {"sigma", params.sigma},
            {"R", params.R},
            {"K", params.K()},
            {"alpha", params.alpha},
            {"gamma", params.gamma},
            {"eta", params.eta},
            {"tau", params.tau},
            {"p", params.p},
            {"q", params.q},
            {"beta", params.beta},
            {"mu0", params.mu0},
            {"L0", params.L0},
            {"C", params.C},
            {"C_kappa", params.C_kappa},
            {"kappa", table.kappa},
            {"tau_window", {window.lo, window.hi}},
            {"theorem_bound", bound},
        };
        write_text(outcome.out_dir, "schedule.json", json_text(j), outcome.files);
    }
    outcome.record.wall_ms = elapsed_ms(start);
    return outcome;
}

RunOutcome run_all(const ExperimentConfig& config, const RunnerOptions& options) {
    const auto start = Clock::now();
    RunOutcome total;
    total.record = make_record(config, options);
    total.out_dir = resolve_output_dir(options, config);

    const auto absorb = [&total](RunOutcome&& part) {
        for (std::string& f : part.files) total.files.push_back(std::move(f));
        for (auto& s : part.record.scans) total.record.scans.push_back(std::move(s));
        for (auto& e : part.record.estimates) total.record.estimates.push_back(std::move(e));
        for (auto& f : part.record.fits) total.record.fits.push_back(std::move(f));
        for (auto& p : part.record.spatial_points)
            total.record.spatial_points.push_back(std::move(p));
        for (auto& p : part.record.temporal_points)
            total.record.temporal_points.push_back(std::move(p));
    };

    absorb(run_schedule(config, options));
    if (!config.scan.L.empty()) absorb(run_env_scan(config, options));
    absorb(run_simulate(config, options));
    if (!config.run.queries.empty()) absorb(run_estimate(config, options));
    if (!config.fit.spatial_distances.empty() || !config.fit.temporal_gaps.empty())
        absorb(run_fit(config, options));

    total.record.wall_ms = elapsed_ms(start);
    return total;
}

std::vector<std::string> emit_plot_data(const ResultRecord& record, const std::string& dir) {
    std::vector<std::string> files;
    if (record.spatial_points.empty() && record.temporal_points.empty()) {
        std::cerr << "warning: no decay estimates present, plot data not written\n";
        return files;
    }
    if (!record.spatial_points.empty())
        write_text(dir, "plot_spatial.tsv", plot_log_rows(record.spatial_points, "r"), files);
    if (!record.temporal_points.empty()) {
        write_text(dir, "plot_temporal.tsv", plot_log_rows(record.temporal_points, "dt"), files);
        write_text(dir, "plot_temporal_stretch.tsv", plot_loglog_rows(record.temporal_points),
                   files);
    }
    return files;
}

void write_manifest(const ResultRecord& record, const std::vector<std::string>& files,
                    const std::string& dir) {
    ordered_json entries = ordered_json::array();
    for (const std::string& name : files) {
        const fs::path path = fs::path(dir) / name;
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("manifest: cannot reread " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        entries.push_back(ordered_json{{"path", name}, {"fnv1a64", hex64(fnv1a64(buf.str()))}});
    }
    const ordered_json manifest{
        {"experiment_id", record.experiment_id},
        {"version", record.version},
        {"config_hash", record.config_hash},
        {"wall_ms", record.wall_ms},
        {"files", std::move(entries)},
    };
    std::vector<std::string> sink;
    write_text(dir, "manifest.json", json_text(manifest), sink);
}

}  // namespace qpperc
