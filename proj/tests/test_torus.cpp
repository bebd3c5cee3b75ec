#include <cmath>

#include "doctest.h"
#include "qpperc/torus.hpp"

using namespace qpperc;

TEST_CASE("wrap_unit reduces into [0,1)") {
    CHECK(wrap_unit(0.0) == 0.0);
    CHECK(wrap_unit(1.0) == 0.0);
    CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
    CHECK(wrap_unit(3.5) == doctest::Approx(0.5));
    CHECK(wrap_unit(-7.0) == 0.0);
    for (double x : {-12.34, -1e-9, 0.999999, 17.77}) {
        const double w = wrap_unit(x);
        CHECK(w >= 0.0);
        CHECK(w < 1.0);
        CHECK(std::abs(std::remainder(w - x, 1.0)) < 1e-12);
    }
}

TEST_CASE("torus points reduce coordinates on construction") {
    const TorusPoint p(std::vector<double>{1.25, -0.5});
    CHECK(p.dimension() == 2);
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(0.5));
}

TEST_CASE("circle distance wraps around") {
    const TorusPoint a(std::vector<double>{0.1});
    const TorusPoint b(std::vector<double>{0.9});
    CHECK(torus_distance(a, b) == doctest::Approx(0.2));
    CHECK(torus_distance(a, a) == 0.0);
}

TEST_CASE("sup metric over coordinates") {
    const TorusPoint a(std::vector<double>{0.1, 0.4});
    const TorusPoint b(std::vector<double>{0.9, 0.5});
    CHECK(torus_distance(a, b) == doctest::Approx(0.2));
}

TEST_CASE("metric axioms on a deterministic sample") {
    // Fixed grid of points; checks symmetry, triangle inequality, and the 1/2 cap.
    std::vector<TorusPoint> pts;
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
            pts.push_back(TorusPoint(std::vector<double>{i / 7.0 + 0.013, j / 7.0 + 0.41}));
    for (const TorusPoint& a : pts)
        for (const TorusPoint& b : pts) {
            const double dab = torus_distance(a, b);
            CHECK(dab == torus_distance(b, a));
            CHECK(dab <= 0.5 + 1e-15);
            for (const TorusPoint& c : pts)
                CHECK(dab <= torus_distance(a, c) + torus_distance(c, b) + 1e-12);
        }
}
