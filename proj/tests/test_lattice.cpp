#include <algorithm>
#include <set>

#include "doctest.h"
#include "qpperc/lattice.hpp"

using namespace qpperc;

TEST_CASE("l1 distance") {
    CHECK(l1_distance({0}, {3}) == 3);
    CHECK(l1_distance({1, -2}, {-1, 1}) == 5);
    CHECK(l1_distance({0, 0, 0}, {0, 0, 0}) == 0);
}

TEST_CASE("edge endpoints and midpoint") {
    const EdgeId u{{2, -1}, 1};
    CHECK(u.other_endpoint() == LatticePoint{2, 0});
    CHECK(u.midpoint() == std::vector<double>{2.0, -0.5});
    CHECK(edge_l1_distance(u, {0, 0}) == doctest::Approx(2.5));
}

TEST_CASE("point formatting is comma-free") {
    CHECK(format_point({0, 1}) == "(0 1)");
    CHECK(format_point({-3}) == "(-3)");
}

TEST_CASE("ball enumeration: size, membership, canonical order") {
    SUBCASE("d=1") {
        const auto ball = enumerate_ball({0}, 3);
        CHECK(ball.size() == 7);
        CHECK(ball.front() == LatticePoint{-3});
        CHECK(ball.back() == LatticePoint{3});
    }
    SUBCASE("d=2") {
        const auto ball = enumerate_ball({1, -1}, 2);
        CHECK(ball.size() == 13);  // 2L^2 + 2L + 1
        for (const LatticePoint& p : ball) CHECK(l1_distance(p, {1, -1}) <= 2);
        CHECK(std::is_sorted(ball.begin(), ball.end()));
        CHECK(std::set<LatticePoint>(ball.begin(), ball.end()).size() == ball.size());
    }
    SUBCASE("d=3") {
        CHECK(enumerate_ball({0, 0, 0}, 1).size() == 7);
    }
}

TEST_CASE("edge set is exactly the edges with both endpoints in the ball") {
    // Equivalent characterization: the edge midpoint has l1 distance <= L
    // from the center iff both endpoints lie in the ball.
    const LatticePoint center{0, 0};
    const std::int64_t L = 3;
    const auto geometry = BoxGeometry::create(center, L);
    const auto ball = enumerate_ball(center, L);
    const std::set<LatticePoint> inside(ball.begin(), ball.end());

    std::set<std::pair<LatticePoint, int>> expected;
    for (const LatticePoint& v : ball)
        for (int axis = 0; axis < 2; ++axis) {
            LatticePoint w = v;
            w[axis] += 1;
            if (inside.count(w)) expected.insert({v, axis});
        }
    CHECK(geometry->edges().size() == expected.size());
    for (const auto& e : geometry->edges()) {
        CHECK(expected.count({e.edge.base, e.edge.axis}) == 1);
        CHECK(edge_l1_distance(e.edge, center) <= static_cast<double>(L));
        CHECK(geometry->vertices()[static_cast<std::size_t>(e.a)] == e.edge.base);
        CHECK(geometry->vertices()[static_cast<std::size_t>(e.b)] == e.edge.other_endpoint());
    }
    // ... and every edge with midpoint distance <= L is present
    for (const LatticePoint& v : ball)
        for (int axis = 0; axis < 2; ++axis) {
            const EdgeId down{[&] {
                LatticePoint b = v;
                b[axis] -= 1;
                return b;
            }(), axis};
            const EdgeId up{v, axis};
            if (edge_l1_distance(up, center) <= static_cast<double>(L))
                CHECK(geometry->edge_index(up) >= 0);
            if (edge_l1_distance(down, center) <= static_cast<double>(L))
                CHECK(geometry->edge_index(down) >= 0);
        }
}

TEST_CASE("box geometry counts in small cases") {
    SUBCASE("d=1 radius 2") {
        const auto g = BoxGeometry::create({0}, 2);
        CHECK(g->vertex_count() == 5);
        CHECK(g->edges().size() == 4);
        CHECK(g->boundary_edges().size() == 2);
    }
    SUBCASE("d=2 radius 1") {
        const auto g = BoxGeometry::create({0, 0}, 1);
        CHECK(g->vertex_count() == 5);
        CHECK(g->edges().size() == 4);
        CHECK(g->boundary_edges().size() == 12);
    }
    SUBCASE("d=1 radius 0") {
        const auto g = BoxGeometry::create({7}, 0);
        CHECK(g->vertex_count() == 1);
        CHECK(g->edges().empty());
        CHECK(g->boundary_edges().size() == 2);
    }
}

TEST_CASE("boundary edges have exactly one endpoint inside") {
    const auto g = BoxGeometry::create({2, -1}, 2);
    for (const BoundaryEdge& be : g->boundary_edges()) {
        const LatticePoint inner =
            g->vertices()[static_cast<std::size_t>(be.inner_vertex)];
        const bool inner_is_base = be.edge.base == inner;
        const LatticePoint outer = inner_is_base ? be.edge.other_endpoint() : be.edge.base;
        CHECK(l1_distance(inner, {2, -1}) <= 2);
        CHECK(l1_distance(outer, {2, -1}) == 3);
    }
}

TEST_CASE("index lookups round-trip") {
    const auto g = BoxGeometry::create({0, 0}, 2);
    for (std::size_t i = 0; i < g->vertex_count(); ++i) {
        CHECK(g->vertex_index(g->vertices()[i]) == static_cast<std::int32_t>(i));
        CHECK(g->shell(i) == l1_distance(g->vertices()[i], {0, 0}));
    }
    for (std::size_t e = 0; e < g->edges().size(); ++e)
        CHECK(g->edge_index(g->edges()[e].edge) == static_cast<std::int32_t>(e));
    CHECK(g->vertex_index({5, 5}) == -1);
    CHECK(g->edge_index(EdgeId{{2, 0}, 0}) == -1);
}
