#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qpperc/csv.hpp"
#include "qpperc/runner.hpp"
#include "qpperc/version.hpp"

namespace {

using qpperc::ExperimentConfig;

std::string fmt(double v) { return qpperc::csv::format_decimal(v); }

struct CommonFlags {
    std::string config_path;
    std::int64_t seed = -1;
    std::int64_t trials = -1;
    int workers = 0;
    std::string out;
    std::string format;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "Experiment config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "Override run.seed")->check(CLI::NonNegativeNumber);
    cmd->add_option("--trials", f.trials, "Override run.n_trials")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--workers", f.workers, "Override run.workers")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out,
                    "Output directory; falls back to [output] directory, then QPPERC_OUT, "
                    "then the working directory");
    cmd->add_option("--format", f.format, "Output format (csv or json; default from config)")
        ->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig load_config(const CommonFlags& f) {
    ExperimentConfig config;
    if (!f.config_path.empty()) {
        config = ExperimentConfig::load(f.config_path);
    } else {
        config.environment.uniform = true;
    }
    if (f.seed >= 0) config.run.seed = static_cast<std::uint64_t>(f.seed);
    if (f.trials > 0) config.run.n_trials = f.trials;
    if (f.workers > 0) config.run.workers = f.workers;
    return config;
}

qpperc::RunnerOptions make_options(const CommonFlags& f, const std::string& subcommand) {
    qpperc::RunnerOptions options;
    options.out_dir = f.out;
    if (!f.format.empty()) options.formats = {f.format};
    options.subcommand = subcommand;
    return options;
}

void print_files(const qpperc::RunOutcome& outcome) {
    for (const std::string& name : outcome.files)
        std::cout << "wrote " << outcome.out_dir << "/" << name << "\n";
    std::cout << "wrote " << outcome.out_dir << "/manifest.json\n";
}

void print_estimates(const std::vector<qpperc::CorrelationEstimate>& estimates) {
    for (const qpperc::CorrelationEstimate& e : estimates)
        std::cout << e.query << "  p_hat = " << fmt(e.p_hat) << "  ci95 = [" << fmt(e.ci_lo)
                  << ", " << fmt(e.ci_hi) << "]  n = " << e.n_trials << "\n";
}

void print_fits(const std::vector<qpperc::DecayFit>& fits) {
    for (const qpperc::DecayFit& f : fits) {
        if (f.kind == qpperc::DecayKind::SpatialExponential)
            std::cout << "spatial-exponential  mu_hat = " << fmt(f.mu_hat)
                      << "  r_squared = " << fmt(f.r_squared) << "  points = " << f.domain.size()
                      << "\n";
        else
            std::cout << "temporal-stretched  tau_hat = " << fmt(f.tau_hat)
                      << "  mu_hat = " << fmt(f.mu_hat) << "  r_squared = " << fmt(f.r_squared)
                      << "  points = " << f.domain.size() << "\n";
    }
}

void print_scans(const std::vector<qpperc::ResonanceReport>& scans) {
    for (const qpperc::ResonanceReport& rep : scans)
        std::cout << "L = " << rep.radius << "  center " << qpperc::format_point(rep.center)
                  << "  epsilon = " << fmt(rep.epsilon)
                  << "  resonant sites = " << rep.resonant_sites.size()
                  << "  resonant edges = " << rep.resonant_edges.size() << "\n";
}

void print_schedule(const ExperimentConfig& config) {
    const qpperc::ScheduleParams params = config.schedule.build();
    const qpperc::ScaleTable table =
        qpperc::scale_table(params, params.L0, params.mu0, config.schedule.k_max);
    const qpperc::TauWindow window = qpperc::tau_window(params);
    std::cout << "d = " << params.d << "  nu = " << params.nu << "  zeta = " << fmt(params.zeta)
              << "  sigma = " << fmt(params.sigma) << "  R = " << params.R
              << "  K = " << fmt(params.K()) << "\n";
    std::cout << "gamma = " << fmt(params.gamma) << "\n";
    std::cout << "alpha = " << fmt(params.alpha) << "\n";
    std::cout << "eta = " << fmt(params.eta) << "\n";
    std::cout << "tau = " << fmt(params.tau) << "\n";
    std::cout << "p = " << fmt(params.p) << "\n";
    std::cout << "q = " << fmt(params.q) << "\n";
    std::cout << "beta = " << fmt(params.beta) << "\n";
    std::cout << "tau window = (" << fmt(window.lo) << ", " << fmt(window.hi) << ")\n";
    std::cout << "theorem bound = " << fmt(qpperc::theorem_bound(params)) << "\n";
    std::cout << "kappa = " << fmt(table.kappa) << "\n";
    std::printf("%4s %12s %14s %14s %14s %18s\n", "k", "log10(L)", "L", "T", "eps", "mu");
    for (const qpperc::ScaleRow& row : table.rows)
        std::printf("%4d %12.4f %14.6g %14.6g %14.6g %18.12g\n", row.k, row.log10_L, row.L, row.T,
                    row.eps, row.mu);
    std::cout << "(L, T, eps saturate past the double range; the log10 columns are exact)\n";
}

const char* config_reference() {
    return R"(Config file reference (structured key-value text; '#' comments; unknown keys are errors):

[environment]              quasiperiodic rate environment on Z^d
  d = 1                    lattice dimension
  kappa = 1.0              global bond intensity factor
  zeta = 1.0               Diophantine exponent used by admissibility checks
  sigma = 1.0              admissibility cap on sampling-function exponents
  uniform = false          true: constant rates, no component blocks needed
  delta = 1.0              uniform death rate (used when uniform = true)
  lambda = 1.0             uniform bond rate (used when uniform = true)

[[environment.component]]  d+1 blocks, death field first (uniform = false)
  M = [[0.618]]            torus shift matrix, one row per torus dimension
  theta = [0.0]            torus offset
  kind = "constant"        or "power-product"
  level = 1.0              constant value / overall factor (inf = no bonds)
  zeros = [[0.5]]          zero locations (power-product)
  exponents = [0.5]        one positive exponent per zero (power-product)

[schedule]                 multiscale parameter system
  suggest = true           derive exponents from (d, nu, zeta, sigma, R)
  d = 1                    lattice dimension
  nu = 1                   torus dimension
  zeta = 1.0               Diophantine exponent
  sigma = 1.0              admissibility threshold
  R = 2                    block resonance capacity
  alpha, gamma, eta, tau, p, q, beta   required when suggest = false
  mu0 = 1.0                decay rate at the base scale
  L0 = 10                  base scale
  C = 0.02                 stretching-bound constant
  C_kappa = 0.01           kappa prefactor (kappa = C_kappa * L0^-alpha)
  k_max = 5                rows in the scale table

[run]                      simulation box and Monte Carlo settings
  center = [0]
  radius = 1
  t_lo = 0.0
  t_hi = 1.0
  n_trials = 1000
  seed = 0
  workers = 1              wall-clock only; results are worker-independent

[[run.query]]              two-point queries for `estimate`
  a = [0]
  ta = 0.0
  b = [0]
  tb = 1.0

[scan]                     settings for `env-scan`
  L = [100]                block radii
  epsilon = 0.01           resonance threshold
  epsilon_from_schedule = false   use L^(-alpha/gamma) instead of epsilon
  centers = [[0]]          block centers (default: origin)
  certificate_N = 100      search depth for arithmetic certificates

[fit]                      settings for `fit`
  spatial_distances = [1, 2, 3]   lattice distances, along the first axis
  temporal_gaps = [0.5, 1, 2]     time gaps, centered in the run window

[output]
  directory = ""           output dir (--out flag and QPPERC_OUT also apply)
  formats = ["csv"]        any of "csv", "json"
)";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasiperiodic continuum percolation toolkit"};
    app.set_version_flag("--version", std::string("qpperc ") + qpperc::kVersionDescribe);
    app.require_subcommand(1);
    app.footer(config_reference());

    CommonFlags flags;

    CLI::App* scan_cmd = app.add_subcommand(
        "env-scan", "Exhaustively scan blocks for resonant sites and edges");
    add_common(scan_cmd, flags);
    std::vector<std::int64_t> scan_L;
    double scan_epsilon = -1.0;
    bool scan_eps_from_schedule = false;
    scan_cmd->add_option("--L", scan_L, "Block radii to scan (overrides scan.L)")
        ->delimiter(',');
    scan_cmd->add_option("--epsilon", scan_epsilon, "Resonance threshold (overrides scan.epsilon)");
    scan_cmd->add_flag("--epsilon-from-schedule", scan_eps_from_schedule,
                       "Use L^(-alpha/gamma) from the schedule block");

    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Sample one realization and its cluster decomposition");
    add_common(simulate_cmd, flags);

    CLI::App* estimate_cmd =
        app.add_subcommand("estimate", "Monte Carlo two-point connection probabilities");
    add_common(estimate_cmd, flags);

    CLI::App* fit_cmd = app.add_subcommand(
        "fit", "Estimate decay curves and fit exponential / stretched-exponential laws");
    add_common(fit_cmd, flags);

    CLI::App* schedule_cmd = app.add_subcommand(
        "schedule", "Derive, validate, and tabulate the multiscale parameter system");
    add_common(schedule_cmd, flags);
    int sched_d = 0, sched_nu = 0, sched_R = 0, sched_kmax = 0;
    double sched_zeta = 0.0, sched_sigma = 0.0, sched_mu0 = 0.0;
    std::int64_t sched_L0 = 0;
    schedule_cmd->add_option("--d", sched_d, "Lattice dimension")->check(CLI::PositiveNumber);
    schedule_cmd->add_option("--nu", sched_nu, "Torus dimension")->check(CLI::PositiveNumber);
    schedule_cmd->add_option("--zeta", sched_zeta, "Diophantine exponent");
    schedule_cmd->add_option("--sigma", sched_sigma, "Admissibility threshold");
    schedule_cmd->add_option("--R", sched_R, "Block resonance capacity")
        ->check(CLI::PositiveNumber);
    schedule_cmd->add_option("--L0", sched_L0, "Base scale")->check(CLI::PositiveNumber);
    schedule_cmd->add_option("--mu0", sched_mu0, "Base decay rate");
    schedule_cmd->add_option("--k-max", sched_kmax, "Scale table depth")
        ->check(CLI::PositiveNumber);

    CLI::App* all_cmd = app.add_subcommand("all", "Run every stage the config describes");
    add_common(all_cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        ExperimentConfig config = load_config(flags);
        if (*scan_cmd) {
            if (!scan_L.empty()) config.scan.L = scan_L;
            if (scan_epsilon >= 0.0) config.scan.epsilon = scan_epsilon;
            if (scan_eps_from_schedule) config.scan.epsilon_from_schedule = true;
        }
        if (*schedule_cmd) {
            if (sched_d > 0) config.schedule.d = sched_d;
            if (sched_nu > 0) config.schedule.nu = sched_nu;
            if (sched_zeta > 0.0) config.schedule.zeta = sched_zeta;
            if (sched_sigma > 0.0) config.schedule.sigma = sched_sigma;
            if (sched_R > 0) config.schedule.R = sched_R;
            if (sched_L0 > 0) config.schedule.L0 = sched_L0;
            if (sched_mu0 > 0.0) config.schedule.mu0 = sched_mu0;
            if (sched_kmax > 0) config.schedule.k_max = sched_kmax;
        }

        qpperc::RunOutcome outcome;
        if (*scan_cmd) {
            outcome = qpperc::run_env_scan(config, make_options(flags, "env-scan"));
            print_scans(outcome.record.scans);
        } else if (*simulate_cmd) {
            outcome = qpperc::run_simulate(config, make_options(flags, "simulate"));
        } else if (*estimate_cmd) {
            outcome = qpperc::run_estimate(config, make_options(flags, "estimate"));
            print_estimates(outcome.record.estimates);
        } else if (*fit_cmd) {
            outcome = qpperc::run_fit(config, make_options(flags, "fit"));
            print_fits(outcome.record.fits);
        } else if (*schedule_cmd) {
            outcome = qpperc::run_schedule(config, make_options(flags, "schedule"));
            print_schedule(config);
        } else {
            outcome = qpperc::run_all(config, make_options(flags, "all"));
            print_schedule(config);
            print_scans(outcome.record.scans);
            print_estimates(outcome.record.estimates);
            print_fits(outcome.record.fits);
        }
        qpperc::write_manifest(outcome.record, outcome.files, outcome.out_dir);
        print_files(outcome);
        return 0;
    } catch (const qpperc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
