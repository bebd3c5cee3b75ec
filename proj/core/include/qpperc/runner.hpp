#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qpperc/config.hpp"
#include "qpperc/estimation.hpp"
#include "qpperc/schedule.hpp"

namespace qpperc {

/// FNV-1a 64-bit content hash; manifest fingerprint, not cryptographic.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

struct RunnerOptions {
    std::string out_dir;               // --out; highest-priority output location
    std::vector<std::string> formats;  // non-empty overrides [output] formats
    std::string subcommand;            // folded into the experiment id
};

/// --out flag, then [output] directory, then QPPERC_OUT, then cwd.
std::string resolve_output_dir(const RunnerOptions& options, const ExperimentConfig& config);

/// Everything one invocation computed, persisted next to a manifest that
/// hashes each output file.
struct ResultRecord {
    std::string experiment_id;  // hash of (subcommand, canonical config text)
    std::string version;
    std::string config_hash;  // hash of the canonical config text alone
    std::vector<CorrelationEstimate> estimates;
    std::vector<DecayFit> fits;
    std::vector<ResonanceReport> scans;
    std::vector<std::pair<double, CorrelationEstimate>> spatial_points;   // (r, estimate)
    std::vector<std::pair<double, CorrelationEstimate>> temporal_points;  // (dt, estimate)
    double wall_ms = 0.0;
};

struct RunOutcome {
    ResultRecord record;
    std::vector<std::string> files;  // paths written, relative to the output dir
    std::string out_dir;
};

RunOutcome run_env_scan(const ExperimentConfig& config, const RunnerOptions& options);
RunOutcome run_simulate(const ExperimentConfig& config, const RunnerOptions& options);
RunOutcome run_estimate(const ExperimentConfig& config, const RunnerOptions& options);
RunOutcome run_fit(const ExperimentConfig& config, const RunnerOptions& options);
RunOutcome run_schedule(const ExperimentConfig& config, const RunnerOptions& options);
RunOutcome run_all(const ExperimentConfig& config, const RunnerOptions& options);

/// Decay-law plot data, tab-separated with CI columns: per-abscissa log
/// probability files for both kinds, plus the double-log transform whose
/// slope is the stretching exponent for the temporal kind. No points of a
/// kind = no file for it; nothing at all additionally warns on stderr.
/// Returns the files written (relative to dir).
std::vector<std::string> emit_plot_data(const ResultRecord& record, const std::string& dir);

/// manifest.json: experiment id, version, config hash, wall time, and one
/// (path, fnv1a64) entry per output file.
void write_manifest(const ResultRecord& record, const std::vector<std::string>& files,
                    const std::string& dir);

}  // namespace qpperc
