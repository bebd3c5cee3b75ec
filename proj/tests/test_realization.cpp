#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qpperc/realization.hpp"

using namespace qpperc;
using doctest::Approx;

namespace {

std::uint64_t bits_of(double t) {
    std::uint64_t b;
    std::memcpy(&b, &t, sizeof b);
    return b;
}

Realization two_death_fixture() {
    const SpaceTimeBox box{{0}, 1, 0.0, 1.0};
    auto geometry = BoxGeometry::create(box.center, box.radius);
    std::vector<std::vector<double>> deaths{{0.2, 0.9}, {}, {}};
    std::vector<std::vector<double>> bonds{{}, {}};
    return Realization(box, std::move(geometry), std::move(deaths), std::move(bonds));
}

}  // namespace

TEST_CASE("sampling is a pure function of seed and trial") {
    const auto spec = EnvironmentSpec::uniform(1, 1.0, 1.0, 1.0);
    const SpaceTimeBox box{{0}, 2, 0.0, 20.0};
    const auto a = sample_realization(spec, box, 42, 7);
    const auto b = sample_realization(spec, box, 42, 7);
    CHECK(a.all_deaths() == b.all_deaths());
    CHECK(a.all_bonds() == b.all_bonds());
    CHECK(a.dump() == b.dump());

    const auto other_trial = sample_realization(spec, box, 42, 8);
    const auto other_seed = sample_realization(spec, box, 43, 7);
    CHECK(a.dump() != other_trial.dump());
    CHECK(a.dump() != other_seed.dump());

    // Passing a pre-built geometry changes nothing but the allocation.
    const EnvironmentRates rates(spec);
    const auto shared = sample_realization(rates, box, BoxGeometry::create({0}, 2), 42, 7);
    CHECK(shared.dump() == a.dump());
}

TEST_CASE("degenerate window produces the empty configuration") {
    const auto spec = EnvironmentSpec::uniform(2, 1.0, 1.0, 1.0);
    const auto r = sample_realization(spec, SpaceTimeBox{{0, 0}, 2, 3.5, 3.5}, 1, 0);
    CHECK(r.death_count() == 0);
    CHECK(r.bond_count() == 0);
    CHECK_THROWS_AS(sample_realization(spec, SpaceTimeBox{{0, 0}, 2, 1.0, 0.0}, 1, 0),
                    std::invalid_argument);
}

TEST_CASE("arrivals are sorted, strictly inside the window, globally distinct") {
    const auto spec = EnvironmentSpec::uniform(1, 2.0, 3.0, 1.0);
    const SpaceTimeBox box{{0}, 2, 0.0, 50.0};
    const auto r = sample_realization(spec, box, 9001, 3);
    REQUIRE(r.death_count() > 100);
    REQUIRE(r.bond_count() > 100);

    std::unordered_set<std::uint64_t> seen;
    const auto check_lines = [&](const std::vector<std::vector<double>>& lines) {
        for (const auto& line : lines) {
            double prev = box.t_lo;
            for (double t : line) {
                CHECK(t > prev);
                CHECK(t < box.t_hi);
                CHECK(seen.insert(bits_of(t)).second);
                prev = t;
            }
        }
    };
    check_lines(r.all_deaths());
    check_lines(r.all_bonds());
    CHECK(seen.size() == r.death_count() + r.bond_count());
}

TEST_CASE("per-line counts follow the scheduled intensity") {
    // Death lines run at delta/kappa, bond lines at kappa*lambda.
    const auto spec = EnvironmentSpec::uniform(1, 1.0, 4.0, 0.5);
    const SpaceTimeBox box{{0}, 1, 0.0, 10.0};
    auto geometry = BoxGeometry::create(box.center, box.radius);
    const EnvironmentRates rates(spec);

    const int n = 1000;
    double deaths = 0.0;
    double bonds = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto r = sample_realization(rates, box, geometry, 271828,
                                          static_cast<std::uint64_t>(i));
        deaths += static_cast<double>(r.death_count());
        bonds += static_cast<double>(r.bond_count());
    }
    // 3 death lines at rate 2, 2 bond lines at rate 2, window length 10.
    const double death_mean = 60.0;
    const double bond_mean = 40.0;
    CHECK(std::abs(deaths / n - death_mean) < 4.0 * std::sqrt(death_mean / n));
    CHECK(std::abs(bonds / n - bond_mean) < 4.0 * std::sqrt(bond_mean / n));
}

TEST_CASE("counts on one line pass a chi-squared goodness of fit") {
    const auto spec = EnvironmentSpec::uniform(1, 1.0, 0.0, 1.0);
    const SpaceTimeBox box{{0}, 0, 0.0, 2.0};  // mean 2 per trial
    auto geometry = BoxGeometry::create(box.center, box.radius);
    const EnvironmentRates rates(spec);

    const int n = 10000;
    const int tail = 8;
    std::vector<int> observed(static_cast<std::size_t>(tail) + 1, 0);
    for (int i = 0; i < n; ++i) {
        const auto r = sample_realization(rates, box, geometry, 5150,
                                          static_cast<std::uint64_t>(i));
        const std::size_t k = std::min<std::size_t>(r.death_count(), tail);
        ++observed[k];
    }

    const double mean = 2.0;
    double chi2 = 0.0;
    double cumulative = 0.0;
    double pk = std::exp(-mean);
    for (int k = 0; k <= tail; ++k) {
        const double expected =
            k < tail ? n * pk : n * (1.0 - cumulative);
        cumulative += pk;
        pk *= mean / (k + 1);
        const double diff = observed[static_cast<std::size_t>(k)] - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < testing_oracle::chi2_crit_999(tail));
}

TEST_CASE("gaps along one line pass a Kolmogorov-Smirnov test against the exponential") {
    const auto spec = EnvironmentSpec::uniform(1, 1.0, 0.0, 1.0);
    const SpaceTimeBox box{{0}, 0, 0.0, 10000.0};
    const auto r = sample_realization(spec, box, 1618, 0);
    const auto& line = r.deaths(0);
    REQUIRE(line.size() > 9000);

    std::vector<double> gaps;
    gaps.reserve(line.size());
    double prev = box.t_lo;
    for (double t : line) {
        gaps.push_back(t - prev);
        prev = t;
    }
    std::sort(gaps.begin(), gaps.end());
    const double n = static_cast<double>(gaps.size());
    double d_stat = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const double cdf = 1.0 - std::exp(-gaps[i]);
        d_stat = std::max(d_stat, std::abs((static_cast<double>(i) + 1.0) / n - cdf));
        d_stat = std::max(d_stat, std::abs(cdf - static_cast<double>(i) / n));
    }
    CHECK(std::sqrt(n) * d_stat < testing_oracle::kKolmogorovCrit1em3);
}

TEST_CASE("counts on distinct lines are uncorrelated") {
    const auto spec = EnvironmentSpec::uniform(1, 1.0, 0.0, 1.0);
    const SpaceTimeBox box{{0}, 1, 0.0, 5.0};
    auto geometry = BoxGeometry::create(box.center, box.radius);
    const EnvironmentRates rates(spec);

    const int n = 2000;
    double sx = 0.0, sy = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto r = sample_realization(rates, box, geometry, 31415,
                                          static_cast<std::uint64_t>(i));
        const double x = static_cast<double>(r.deaths(0).size());
        const double y = static_cast<double>(r.deaths(2).size());
        sx += x;
        sy += y;
        sxy += x * y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    // Var = 5 on both lines, so the covariance estimate has SE ~ 5/sqrt(n).
    CHECK(std::abs(cov) < 4.0 * 5.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("arrival insertion keeps lines sorted") {
    const auto r = two_death_fixture();
    const auto grown = add_death(r, {-1}, 0.5);
    CHECK(grown.deaths(0) == std::vector<double>{0.2, 0.5, 0.9});
    CHECK(r.deaths(0) == std::vector<double>{0.2, 0.9});  // original untouched

    const auto bonded = add_bond(r, EdgeId{{0}, 0}, 0.3);
    CHECK(bonded.bonds(1) == std::vector<double>{0.3});
    CHECK(bonded.bonds(0).empty());

    SUBCASE("rejections") {
        CHECK_THROWS_AS(add_death(r, {0}, 0.2), std::invalid_argument);   // cross-line tie
        CHECK_THROWS_AS(add_death(r, {-1}, 0.2), std::invalid_argument);  // same-line tie
        CHECK_THROWS_AS(add_death(r, {-1}, 0.0), std::invalid_argument);  // window is open
        CHECK_THROWS_AS(add_death(r, {-1}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(add_death(r, {7}, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(add_bond(r, EdgeId{{1}, 0}, 0.5), std::invalid_argument);
    }
}

TEST_CASE("construction enforces the line invariants") {
    const SpaceTimeBox box{{0}, 1, 0.0, 1.0};
    auto geometry = BoxGeometry::create(box.center, box.radius);
    using Lines = std::vector<std::vector<double>>;
    CHECK_THROWS_AS(Realization(box, geometry, Lines{{0.9, 0.2}, {}, {}}, Lines{{}, {}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Realization(box, geometry, Lines{{0.5}, {0.5}, {}}, Lines{{}, {}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Realization(box, geometry, Lines{{1.0}, {}, {}}, Lines{{}, {}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Realization(box, geometry, Lines{{}, {}}, Lines{{}, {}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Realization(box, BoxGeometry::create({1}, 1), Lines{{}, {}, {}},
                                Lines{{}, {}}),
                    std::invalid_argument);
}

TEST_CASE("text dump round-trips exactly") {
    const auto spec = EnvironmentSpec::uniform(2, 1.5, 0.7, 0.9);
    const SpaceTimeBox box{{1, -2}, 2, -1.0, 4.0};
    const auto r = sample_realization(spec, box, 777, 5);
    REQUIRE(r.death_count() + r.bond_count() > 50);

    const std::string text = r.dump();
    const auto back = Realization::parse(text);
    CHECK(back.box() == box);
    CHECK(back.all_deaths() == r.all_deaths());
    CHECK(back.all_bonds() == r.all_bonds());
    CHECK(back.dump() == text);
}

TEST_CASE("parse reports malformed records with line numbers") {
    CHECK_THROWS_WITH_AS(Realization::parse(""), "realization parse: empty input",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(Realization::parse("hello\n"), "realization parse: missing box header",
                         std::runtime_error);
    const std::string header = "# box center 0 radius 1 window 0 1\n";
    CHECK_THROWS_WITH_AS(Realization::parse(header + "X 0 0.5\n"),
                         "realization parse: unknown record kind at line 2", std::runtime_error);
    CHECK_THROWS_WITH_AS(Realization::parse(header + "D 5 0.5\n"),
                         "realization parse: vertex outside box at line 2", std::runtime_error);
    CHECK_THROWS_WITH_AS(Realization::parse(header + "D 0 0.5\n" + "B 1 0 0.7\n"),
                         "realization parse: edge outside box at line 3", std::runtime_error);
    CHECK_THROWS_WITH_AS(Realization::parse(header + "D 0\n"),
                         "realization parse: bad time at line 2", std::runtime_error);
}
