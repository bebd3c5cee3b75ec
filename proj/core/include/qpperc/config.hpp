#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qpperc/environment.hpp"
#include "qpperc/schedule.hpp"

namespace qpperc {

/// Parse failure with the offending key/line in the message.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

/// One value of the key-value config language: integer, float, string,
/// boolean, or (possibly nested) array.
struct ConfigValue {
    enum class Type { Integer, Float, String, Boolean, Array };
    Type type = Type::Integer;
    std::int64_t integer = 0;
    double number = 0.0;
    std::string text;
    bool boolean = false;
    std::vector<ConfigValue> array;
    int line = 0;

    double as_double(const std::string& key) const;
    std::int64_t as_int(const std::string& key) const;
    bool as_bool(const std::string& key) const;
    const std::string& as_string(const std::string& key) const;
    std::vector<double> as_double_array(const std::string& key) const;
    std::vector<std::int64_t> as_int_array(const std::string& key) const;
    std::vector<std::vector<double>> as_double_matrix(const std::string& key) const;
    std::vector<std::vector<std::int64_t>> as_int_matrix(const std::string& key) const;
};

/// Parsed section tree: flat key/value pairs, named sub-tables ([a.b]) and
/// arrays of tables ([[a.b]]).
struct ConfigTable {
    std::map<std::string, ConfigValue> values;
    std::map<std::string, ConfigTable> tables;
    std::map<std::string, std::vector<ConfigTable>> table_arrays;
    int line = 0;
};

/// Structured key-value text: comments (#), [section] and [[array.of.tables]]
/// headers, scalar values, and single-line (nested) arrays.
ConfigTable parse_config_text(const std::string& text);

struct ComponentConfig {
    std::vector<std::vector<double>> M;
    std::vector<double> theta;
    std::string kind = "constant";  // constant | power-product
    double level = 1.0;             // inf allowed for constant (no-bonds limit)
    std::vector<std::vector<double>> zeros;
    std::vector<double> exponents;

    bool operator==(const ComponentConfig&) const = default;
};

struct EnvironmentConfig {
    int d = 1;
    double kappa = 1.0;
    double zeta = 1.0;
    double sigma = 1.0;
    bool uniform = false;  // shorthand: constant delta / lambda everywhere
    double delta = 1.0;
    double lambda = 1.0;
    std::vector<ComponentConfig> components;  // death component first; d+1 total

    EnvironmentSpec build() const;
    bool operator==(const EnvironmentConfig&) const = default;
};

/// Self-contained schedule block (no values are pulled from the
/// environment block; set R etc. to match when cross-checking).
struct ScheduleConfig {
    bool suggest = true;
    int d = 1;
    int nu = 1;
    double zeta = 1.0;
    double sigma = 1.0;
    int R = 2;
    // explicit mode (suggest = false) requires the seven exponents
    double alpha = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
    double tau = 0.0;
    double p = 0.0;
    double q = 0.0;
    double beta = 0.0;
    double mu0 = 1.0;
    std::int64_t L0 = 10;
    double C = 1.0 / 50.0;
    double C_kappa = 0.01;
    int k_max = 5;

    ScheduleParams build() const;
    bool operator==(const ScheduleConfig&) const = default;
};

struct QueryConfig {
    std::vector<std::int64_t> a;
    double ta = 0.0;
    std::vector<std::int64_t> b;
    double tb = 0.0;

    bool operator==(const QueryConfig&) const = default;
};

struct RunConfig {
    std::vector<std::int64_t> center{0};
    std::int64_t radius = 1;
    double t_lo = 0.0;
    double t_hi = 1.0;
    std::int64_t n_trials = 1000;
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<QueryConfig> queries;

    bool operator==(const RunConfig&) const = default;
};

struct ScanConfig {
    std::vector<std::int64_t> L{};
    double epsilon = 0.0;  // ignored when epsilon_from_schedule
    bool epsilon_from_schedule = false;
    std::vector<std::vector<std::int64_t>> centers;  // empty = origin only
    std::int64_t certificate_N = 100;                // search depth for arithmetic certificates

    bool operator==(const ScanConfig&) const = default;
};

struct FitConfig {
    std::vector<double> spatial_distances;
    std::vector<double> temporal_gaps;

    bool operator==(const FitConfig&) const = default;
};

struct OutputConfig {
    std::string directory;  // empty -> --out flag / QPPERC_OUT / cwd
    std::vector<std::string> formats{"csv"};

    bool operator==(const OutputConfig&) const = default;
};

/// Whole experiment description. parse(render()) reproduces the object
/// exactly (render emits every field, numbers at round-trip precision), so
/// the render string doubles as the canonical form behind config hashes.
struct ExperimentConfig {
    EnvironmentConfig environment;
    ScheduleConfig schedule;
    RunConfig run;
    ScanConfig scan;
    FitConfig fit;
    OutputConfig output;

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    std::string render() const;

    bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace qpperc
