#include <cmath>
#include <limits>
#include <string>

#include "doctest.h"
#include "qpperc/config.hpp"
#include "qpperc/schedule.hpp"

using namespace qpperc;
using doctest::Approx;

TEST_CASE("value grammar covers every scalar and array shape") {
    const ConfigTable t = parse_config_text(
        "a = 1\n"
        "b = 1.5\n"
        "c = \"x#y = [\\\"ok\\\"]\"  # comment after a tricky string\n"
        "d = true\n"
        "e = [1, 2, 3]\n"
        "f = [[1.5, 2], [3, 4.5]]\n"
        "g = []\n"
        "h = -7\n"
        "i = 1e-3\n"
        "j = inf\n");
    CHECK(t.values.at("a").type == ConfigValue::Type::Integer);
    CHECK(t.values.at("a").as_int("a") == 1);
    CHECK(t.values.at("a").as_double("a") == 1.0);
    CHECK(t.values.at("b").as_double("b") == 1.5);
    CHECK(t.values.at("c").as_string("c") == "x#y = [\"ok\"]");
    CHECK(t.values.at("d").as_bool("d"));
    CHECK(t.values.at("e").as_int_array("e") == std::vector<std::int64_t>{1, 2, 3});
    CHECK(t.values.at("f").as_double_matrix("f") ==
          std::vector<std::vector<double>>{{1.5, 2.0}, {3.0, 4.5}});
    CHECK(t.values.at("g").as_double_array("g").empty());
    CHECK(t.values.at("h").as_int("h") == -7);
    CHECK(t.values.at("i").as_double("i") == 1e-3);
    CHECK(std::isinf(t.values.at("j").as_double("j")));
    CHECK(t.values.at("i").line == 9);
}

TEST_CASE("section headers nest and array-of-table headers append") {
    const ConfigTable t = parse_config_text(
        "[a]\n"
        "x = 1\n"
        "[a.b]\n"
        "y = 2\n"
        "[[a.c]]\n"
        "z = 1\n"
        "[[a.c]]\n"
        "z = 2\n");
    const ConfigTable& a = t.tables.at("a");
    CHECK(a.values.at("x").as_int("x") == 1);
    CHECK(a.tables.at("b").values.at("y").as_int("y") == 2);
    REQUIRE(a.table_arrays.at("c").size() == 2);
    CHECK(a.table_arrays.at("c")[0].values.at("z").as_int("z") == 1);
    CHECK(a.table_arrays.at("c")[1].values.at("z").as_int("z") == 2);
    CHECK(a.table_arrays.at("c")[1].line == 7);
}

TEST_CASE("lexical errors carry the offending line") {
    CHECK_THROWS_WITH_AS(parse_config_text("what\n"),
                         "config line 1: expected 'key = value'", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("bad key = 1\n"),
                         "config line 1: bad key name: 'bad key'", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[run]\nseed = 1\nseed = 2\n"),
                         "config line 3: duplicate key 'seed'", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[run\n"),
                         "config line 1: malformed section header: [run", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[run.]\n"),
                         "config line 1: bad section name: run.", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("k =\n"), "config line 1: missing value",
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("k = \"abc\n"),
                         "config line 1: unterminated string", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("k = \"a\\q\"\n"),
                         "config line 1: unsupported escape '\\q'", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("k = [1, 2\n"),
                         "config line 1: unterminated array", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("k = [1 2]\n"),
                         "config line 1: expected ',' or ']' in array", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("k = 99999999999999999999\n"),
                         "config line 1: integer out of range: 99999999999999999999",
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("k = 12abc\n"),
                         "config line 1: cannot parse value '12abc'", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("k = 1 2\n"),
                         "config line 1: trailing characters after value", ConfigError);
}

TEST_CASE("empty text parses to the uniform defaults") {
    const ExperimentConfig c = ExperimentConfig::parse("");
    ExperimentConfig expected;
    expected.environment.uniform = true;
    CHECK(c == expected);
    CHECK(c.environment.d == 1);
    CHECK(c.environment.delta == 1.0);
    CHECK(c.environment.lambda == 1.0);
    CHECK(c.schedule.suggest);
    CHECK(c.schedule.L0 == 10);
    CHECK(c.run.center == std::vector<std::int64_t>{0});
    CHECK(c.run.n_trials == 1000);
    CHECK(c.run.workers == 1);
    CHECK(c.scan.certificate_N == 100);
    CHECK(c.output.formats == std::vector<std::string>{"csv"});
}

namespace {

const char* kFullConfig =
    "[environment]\n"
    "d = 1\n"
    "kappa = 0.5\n"
    "zeta = 1.5\n"
    "sigma = 2\n"
    "delta = 3\n"
    "lambda = 0.25\n"
    "\n"
    "[[environment.component]]\n"
    "M = [[0.5]]\n"
    "theta = [0]\n"
    "kind = \"power-product\"\n"
    "level = 2\n"
    "zeros = [[0.25]]\n"
    "exponents = [1]\n"
    "\n"
    "[[environment.component]]\n"
    "M = [[0.25]]\n"
    "theta = [0.125]\n"
    "kind = \"constant\"\n"
    "level = 4\n"
    "\n"
    "[schedule]\n"
    "suggest = false\n"
    "d = 1\n"
    "nu = 1\n"
    "zeta = 1\n"
    "sigma = 1\n"
    "R = 2\n"
    "alpha = 8\n"
    "gamma = 4\n"
    "eta = 189.66666666666666\n"
    "tau = 0.0045489006823351018\n"
    "p = 14.828125\n"
    "q = 12.3125\n"
    "beta = 0.375\n"
    "mu0 = 0.5\n"
    "L0 = 12\n"
    "C = 0.015\n"
    "C_kappa = 0.005\n"
    "k_max = 3\n"
    "\n"
    "[run]\n"
    "center = [0]\n"
    "radius = 4\n"
    "t_lo = -1\n"
    "t_hi = 1\n"
    "n_trials = 200\n"
    "seed = 42\n"
    "workers = 3\n"
    "\n"
    "[[run.query]]\n"
    "a = [0]\n"
    "ta = 0\n"
    "b = [2]\n"
    "tb = 0.5\n"
    "\n"
    "[[run.query]]\n"
    "a = [-1]\n"
    "ta = -0.25\n"
    "b = [1]\n"
    "tb = 0.25\n"
    "\n"
    "[scan]\n"
    "L = [100, 1000]\n"
    "epsilon_from_schedule = true\n"
    "centers = [[0], [17]]\n"
    "certificate_N = 50\n"
    "\n"
    "[fit]\n"
    "spatial_distances = [1, 2, 3]\n"
    "temporal_gaps = [0.5, 1, 2]\n"
    "\n"
    "[output]\n"
    "directory = \"out\"\n"
    "formats = [\"csv\", \"json\"]\n";

}  // namespace

TEST_CASE("full config text populates every block") {
    const ExperimentConfig c = ExperimentConfig::parse(kFullConfig);
    CHECK(c.environment.kappa == 0.5);
    CHECK_FALSE(c.environment.uniform);
    REQUIRE(c.environment.components.size() == 2);
    CHECK(c.environment.components[0].kind == "power-product");
    CHECK(c.environment.components[0].zeros == std::vector<std::vector<double>>{{0.25}});
    CHECK(c.environment.components[0].exponents == std::vector<double>{1.0});
    CHECK(c.environment.components[1].kind == "constant");
    CHECK(c.environment.components[1].level == 4.0);
    CHECK_FALSE(c.schedule.suggest);
    CHECK(c.schedule.alpha == 8.0);
    CHECK(c.schedule.k_max == 3);
    CHECK(c.run.radius == 4);
    CHECK(c.run.seed == 42);
    REQUIRE(c.run.queries.size() == 2);
    CHECK(c.run.queries[1].a == std::vector<std::int64_t>{-1});
    CHECK(c.run.queries[1].tb == 0.25);
    CHECK(c.scan.L == std::vector<std::int64_t>{100, 1000});
    CHECK(c.scan.epsilon_from_schedule);
    CHECK(c.scan.centers == std::vector<std::vector<std::int64_t>>{{0}, {17}});
    CHECK(c.scan.certificate_N == 50);
    CHECK(c.fit.spatial_distances == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(c.fit.temporal_gaps == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(c.output.directory == "out");
    CHECK(c.output.formats == std::vector<std::string>{"csv", "json"});
}

TEST_CASE("parse of render reproduces the config exactly") {
    const ExperimentConfig defaults = ExperimentConfig::parse("");
    CHECK(ExperimentConfig::parse(defaults.render()) == defaults);

    const ExperimentConfig full = ExperimentConfig::parse(kFullConfig);
    const std::string rendered = full.render();
    CHECK(ExperimentConfig::parse(rendered) == full);
    CHECK(ExperimentConfig::parse(rendered).render() == rendered);

    // Values with no short decimal form survive the round trip bit-exactly.
    ExperimentConfig awkward = full;
    awkward.environment.kappa = 1.0 / 3.0;
    awkward.schedule.tau = 6.0 / 1319.0;
    awkward.run.t_hi = std::nextafter(1.0, 2.0);
    awkward.environment.components[1].level = std::numeric_limits<double>::infinity();
    CHECK(ExperimentConfig::parse(awkward.render()) == awkward);
}

TEST_CASE("schema errors name the key, section, and line") {
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("x = 1\n"),
                         "top-level key 'x' (line 1); keys belong inside a section",
                         ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[bogus]\n"),
                         "unknown section [bogus] (line 1)", ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[[bogus]]\n"),
                         "unknown section [[bogus]] (line 1)", ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[run]\nbogus = 1\n"),
                         "unknown key 'bogus' in [run] (line 2)", ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[run.sub]\nx = 1\n"),
                         "unknown section [run.sub] (line 1)", ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[run]\n[[run.bogus]]\nx = 1\n"),
                         "unknown section [[run.bogus]] (line 2)", ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[run]\nradius = 1.5\n"),
                         "key 'run.radius' (line 2): expected integer, got float",
                         ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[environment]\nuniform = 1\n"),
                         "key 'environment.uniform' (line 2): expected boolean, got integer",
                         ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[output]\ndirectory = 3\n"),
                         "key 'output.directory' (line 2): expected string, got integer",
                         ConfigError);
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::parse("[environment]\nuniform = true\nkappa = \"x\"\n"),
        "key 'environment.kappa' (line 3): expected number, got string", ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[run]\ncenter = 3\n"),
                         "key 'run.center' (line 2): expected array of integers, got integer",
                         ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[run]\ncenter = [1.5]\n"),
                         "key 'run.center' (line 2): expected integer, got float",
                         ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[run]\nseed = -1\n"),
                         "run.seed must be >= 0", ConfigError);
}

TEST_CASE("environment block cross-field rules") {
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::parse("[environment]\nuniform = true\n"
                                "[[environment.component]]\nM = [[1]]\ntheta = [0]\n"),
        "[environment] uniform = true conflicts with [[environment.component]]", ConfigError);
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::parse("[environment]\nd = 1\n"),
        "[environment] needs uniform = true or d+1 [[environment.component]] blocks",
        ConfigError);
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::parse("[environment]\n[[environment.component]]\ntheta = [0]\n"),
        "[environment.component#0] is missing required key 'M'", ConfigError);
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::parse("[environment]\n[[environment.component]]\n"
                                "M = [[1]]\ntheta = [0]\nkind = \"weird\"\n"),
        "[environment.component#0] kind must be \"constant\" or \"power-product\", got "
        "\"weird\"",
        ConfigError);
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::parse("[environment]\n[[environment.component]]\n"
                                "M = [[1]]\ntheta = [0]\nkind = \"power-product\"\n"),
        "[environment.component#0] power-product needs zeros", ConfigError);
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::parse("[environment]\n[[environment.component]]\n"
                                "M = [[1]]\ntheta = [0]\nkind = \"power-product\"\n"
                                "zeros = [[0.25], [0.5]]\nexponents = [1]\n"),
        "[environment.component#0] needs one exponent per zero", ConfigError);
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::parse("[environment]\n[[environment.component]]\n"
                                "M = [[1]]\ntheta = [0]\nzeros = [[0.25]]\n"),
        "[environment.component#0] constant kind takes no zeros/exponents", ConfigError);
    // The component index in the message tracks the offending block.
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::parse("[environment]\n"
                                "[[environment.component]]\nM = [[1]]\ntheta = [0]\n"
                                "[[environment.component]]\ntheta = [0]\n"),
        "[environment.component#1] is missing required key 'M'", ConfigError);
}

TEST_CASE("schedule block cross-field rules") {
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[schedule]\nalpha = 8\n"),
                         "[schedule] suggest = true conflicts with explicit exponents",
                         ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[schedule]\nsuggest = false\n"),
                         "[schedule] is missing required key 'alpha'", ConfigError);
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::parse("[run]\n[[run.query]]\na = [0]\nta = 0\ntb = 1\n"),
        "[run.query#0] is missing required key 'b'", ConfigError);
}

TEST_CASE("output formats are validated at parse time") {
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[output]\nformats = [\"xml\"]\n"),
                         "output.formats entries must be \"csv\" or \"json\", got \"xml\"",
                         ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[output]\nformats = []\n"),
                         "output.formats must not be empty", ConfigError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[output]\nformats = \"csv\"\n"),
                         "key 'output.formats' (line 2): expected array, got string",
                         ConfigError);
}

TEST_CASE("load rejects a missing file") {
    CHECK_THROWS_WITH_AS(ExperimentConfig::load("/no/such/qpperc.conf"),
                         "cannot open config file: /no/such/qpperc.conf", ConfigError);
}

TEST_CASE("uniform environment build carries the rates through") {
    const ExperimentConfig c = ExperimentConfig::parse(
        "[environment]\nuniform = true\nd = 2\nkappa = 0.5\nzeta = 1.5\nsigma = 2\n"
        "delta = 2\nlambda = 0.25\n");
    const EnvironmentSpec spec = c.environment.build();
    CHECK(spec.dimension() == 2);
    CHECK(spec.kappa() == 0.5);
    CHECK(spec.zeta() == 1.5);
    CHECK(spec.sigma() == 2.0);
    CHECK(spec.death_rate({7, -3}) == 2.0);
    CHECK(spec.bond_rate(EdgeId{{7, -3}, 0}) == 0.25);
    CHECK(spec.bond_rate(EdgeId{{7, -3}, 1}) == 0.25);
}

TEST_CASE("component environment build evaluates the sampled fields") {
    const ExperimentConfig c = ExperimentConfig::parse(
        "[environment]\nd = 1\nkappa = 1\nzeta = 1\nsigma = 2\n"
        "[[environment.component]]\n"
        "M = [[0.5]]\ntheta = [0]\nkind = \"power-product\"\nlevel = 2\n"
        "zeros = [[0.25]]\nexponents = [1]\n"
        "[[environment.component]]\n"
        "M = [[0.25]]\ntheta = [0.125]\nkind = \"constant\"\nlevel = 4\n");
    const EnvironmentSpec spec = c.environment.build();
    // delta_x = 2 d(x/2 mod 1, 1/4); both x = 0 and x = 1 sit distance 1/4 away.
    CHECK(spec.death_rate({0}) == Approx(0.5).epsilon(1e-15));
    CHECK(spec.death_rate({1}) == Approx(0.5).epsilon(1e-15));
    CHECK(spec.death_rate({2}) == Approx(2.0 * 0.25).epsilon(1e-15));
    CHECK(spec.bond_rate(EdgeId{{0}, 0}) == 0.25);
    CHECK(spec.vertex_zero_count() == 1);
    CHECK(spec.edge_zero_count() == 0);
}

TEST_CASE("no-bonds limit survives a config round trip") {
    ExperimentConfig c = ExperimentConfig::parse("");
    c.environment.lambda = 0.0;
    const ExperimentConfig back = ExperimentConfig::parse(c.render());
    CHECK(back == c);
    CHECK(back.environment.build().bond_rate(EdgeId{{0}, 0}) == 0.0);
}

TEST_CASE("schedule build defers to suggest and keeps the ladder constants") {
    const ExperimentConfig c = ExperimentConfig::parse(
        "[schedule]\nd = 1\nnu = 1\nzeta = 1\nsigma = 1\nR = 2\n"
        "mu0 = 0.5\nL0 = 12\nC = 0.015\nC_kappa = 0.005\nk_max = 3\n");
    const ScheduleParams built = c.schedule.build();
    const ScheduleParams reference = suggest(1, 1, 1.0, 1.0, 2);
    CHECK(built.alpha == reference.alpha);
    CHECK(built.gamma == reference.gamma);
    CHECK(built.eta == reference.eta);
    CHECK(built.tau == reference.tau);
    CHECK(built.p == reference.p);
    CHECK(built.q == reference.q);
    CHECK(built.beta == reference.beta);
    CHECK(built.mu0 == 0.5);
    CHECK(built.L0 == 12);
    CHECK(built.C == 0.015);
    CHECK(built.C_kappa == 0.005);
}

TEST_CASE("explicit schedule build is a passthrough") {
    const ExperimentConfig c = ExperimentConfig::parse(kFullConfig);
    const ScheduleParams built = c.schedule.build();
    CHECK(built.d == 1);
    CHECK(built.nu == 1);
    CHECK(built.zeta == 1.0);
    CHECK(built.sigma == 1.0);
    CHECK(built.R == 2);
    CHECK(built.alpha == 8.0);
    CHECK(built.gamma == 4.0);
    CHECK(built.eta == 189.66666666666666);
    CHECK(built.tau == 0.0045489006823351018);
    CHECK(built.p == 14.828125);
    CHECK(built.q == 12.3125);
    CHECK(built.beta == 0.375);
    CHECK(built.mu0 == 0.5);
    CHECK(built.L0 == 12);
    CHECK(validate(built).empty());
}
