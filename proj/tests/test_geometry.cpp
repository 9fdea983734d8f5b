#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "svset/hausdorff.hpp"
#include "svset/polytope.hpp"

using namespace svset;

namespace {

std::mt19937_64 rng(20240811);

Vec rand_point_2d(double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    return Vec{d(rng), d(rng)};
}

Polytope random_polygon(int npts) {
    std::vector<Vec> pts;
    for (int i = 0; i < npts; ++i) pts.push_back(rand_point_2d());
    return Polytope(pts);
}

// Brute-force Minkowski combination: enumerate all vertex tuples and hull.
Polytope minkowski_oracle(const std::vector<double>& w, const std::vector<Polytope>& ps) {
    std::vector<Vec> sums{Vec(ps[0].dim(), 0.0)};
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::vector<Vec> next;
        for (const Vec& acc : sums)
            for (const Vec& v : ps[i].vertices()) next.push_back(add(acc, scale(w[i], v)));
        sums = std::move(next);
    }
    return Polytope(sums);
}

}  // namespace

TEST_CASE("support function: axis-aligned and singleton cases") {
    Polytope square({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    CHECK(support_function(square, {1, 0}) == doctest::Approx(1.0));

    Polytope tri({{0, 0}, {4, 0}, {0, 4}});
    CHECK(support_function(tri, {1, 1}) == doctest::Approx(4.0));

    Polytope pt({{3, -2}});
    Vec dir{0.5, 2.0};
    CHECK(support_function(pt, dir) == doctest::Approx(dot(dir, pt.vertices()[0])));
}

TEST_CASE("polytope construction rejects malformed input") {
    CHECK_THROWS_AS(Polytope(std::vector<Vec>{}), MalformedInput);
    CHECK_THROWS_AS(Polytope({{0.0, 1.0}, {0.0}}), DimensionMismatch);
    CHECK_THROWS_AS(Polytope({{std::nan(""), 0.0}}), MalformedInput);
}

TEST_CASE("canonical form: hull removes interior and collinear points") {
    Polytope p({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0.0}});
    CHECK(p.vertex_count() == 4);
    // ccw from lexicographically smallest
    CHECK(p.vertices()[0] == Vec{0, 0});
    CHECK(p.vertices()[1] == Vec{1, 0});
    CHECK(p.vertices()[2] == Vec{1, 1});
    CHECK(p.vertices()[3] == Vec{0, 1});

    Polytope single({{0, 0}});
    CHECK(single.vertex_count() == 1);

    Polytope seg({{0, 0}, {1, 1}, {2, 2}});
    CHECK(seg.vertex_count() == 2);
}

TEST_CASE("point distance: collinear, membership, endpoint drop") {
    Polytope seg({{0, 0}, {1, 0}});
    CHECK(point_distance({2, 0}, seg) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(point_distance({0, 0}, seg) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(point_distance({1, 1}, seg) == doctest::Approx(1.0).epsilon(1e-9));

    // interior point of a square
    Polytope square({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    CHECK(point_distance({0.2, -0.3}, square) <= 1e-9);
    // outside along a diagonal
    CHECK(point_distance({2, 2}, square) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("nearest-point projection agrees with direct formulas in higher dimension") {
    // tetrahedron in 3D, query off one face
    std::vector<Vec> tet{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(distance_to_hull({0, 0, 2}, tet) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(distance_to_hull({0.25, 0.25, 0.25}, tet) <= 1e-9);
    Vec far{1, 1, 1};
    double expect = dist(far, Vec{1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(distance_to_hull(far, tet) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("hausdorff distance: identity, norm, shift") {
    Polytope square({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    CHECK(hausdorff_distance(square, square) == doctest::Approx(0.0));

    Polytope origin({{0, 0}});
    CHECK(hausdorff_distance(square, origin) == doctest::Approx(square.radius()).epsilon(1e-9));

    Polytope shifted = square.translated({1, 0});
    CHECK(hausdorff_distance(square, shifted) == doctest::Approx(1.0).epsilon(1e-9));

    Polytope seg({{0, 0, 0}});
    CHECK_THROWS_AS(hausdorff_distance(square, seg), DimensionMismatch);
}

TEST_CASE("minkowski average: singletons and the crossed-segments oracle") {
    Polytope a({{0, 0}});
    CHECK(same_vertices(minkowski_average({1.0}, {a}), a));

    Polytope b({{2, 2}});
    Polytope mid = minkowski_average({0.5, 0.5}, {a, b});
    REQUIRE(mid.vertex_count() == 1);
    CHECK(dist(mid.vertices()[0], {1, 1}) <= 1e-12);

    Polytope s1({{0, 0}, {2, 0}});
    Polytope s2({{0, 0}, {0, 2}});
    Polytope avg = minkowski_average({0.5, 0.5}, {s1, s2});
    Polytope expect({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    CHECK(same_vertices(avg, expect, 1e-12));

    CHECK_THROWS_AS(minkowski_average({0.5}, {s1, s2}), MalformedInput);
    CHECK_THROWS_AS(minkowski_average({-0.1, 1.1}, {s1, s2}), MalformedInput);
}

TEST_CASE("minkowski average matches tuple enumeration on random triples") {
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Polytope> ps{random_polygon(4), random_polygon(5), random_polygon(3)};
        std::uniform_real_distribution<double> wd(0.05, 1.0);
        std::vector<double> w{wd(rng), wd(rng), wd(rng)};
        double tot = w[0] + w[1] + w[2];
        for (double& x : w) x /= tot;
        Polytope got = minkowski_average(w, ps);
        Polytope want = minkowski_oracle(w, ps);
        CHECK(hausdorff_distance(got, want) <= 1e-9);
    }
}

TEST_CASE("support additivity of the minkowski average") {
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<Polytope> ps{random_polygon(4), random_polygon(4)};
        std::vector<double> w{0.3, 0.7};
        Polytope avg = minkowski_average(w, ps);
        Vec u{ud(rng), ud(rng)};
        if (norm(u) < 1e-3) continue;
        double lhs = support_function(avg, u);
        double rhs = w[0] * support_function(ps[0], u) + w[1] * support_function(ps[1], u);
        CHECK(std::fabs(lhs - rhs) <= 1e-9);
    }
}

TEST_CASE("containment: reflexivity and counterexamples") {
    Polytope square({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    CHECK(contains(square, square));
    CHECK(contains(square, Polytope({{0, 0}, {0.5, 0.5}})));
    CHECK_FALSE(contains(Polytope({{0, 0}, {1, 0}}), Polytope({{0, 1}})));
}

TEST_CASE("containment/support duality over facet normals") {
    for (int rep = 0; rep < 100; ++rep) {
        Polytope q = random_polygon(6);
        if (!q.is_full_dimensional_2d()) continue;
        Polytope p = random_polygon(4);
        Polytope qh = v_to_h_2d(q);
        bool by_projection = contains(q, p, 1e-9);
        bool by_support = true;
        for (const Facet& f : qh.facets())
            if (support_function(p, f.normal) > f.offset + 1e-9) by_support = false;
        CHECK(by_projection == by_support);
    }
}

TEST_CASE("v_to_h_2d: unit triangle and square") {
    Polytope tri({{0, 0}, {1, 0}, {0, 1}});
    Polytope h = v_to_h_2d(tri);
    REQUIRE(h.facets().size() == 3);
    CHECK(dist(h.facets()[0].normal, {0, -1}) <= 1e-12);
    CHECK(h.facets()[0].offset == doctest::Approx(0.0));
    CHECK(dist(h.facets()[1].normal, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}) <= 1e-12);
    CHECK(h.facets()[1].offset == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(dist(h.facets()[2].normal, {-1, 0}) <= 1e-12);
    CHECK(h.facets()[2].offset == doctest::Approx(0.0));

    Polytope square({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    Polytope hs = v_to_h_2d(square);
    REQUIRE(hs.facets().size() == 4);
    for (const Facet& f : hs.facets()) {
        CHECK(f.offset == doctest::Approx(1.0));
        CHECK(std::fabs(std::fabs(f.normal[0]) + std::fabs(f.normal[1]) - 1.0) <= 1e-12);
    }

    CHECK_THROWS_AS(v_to_h_2d(Polytope({{0, 0}, {1, 1}})), DegeneratePolytope);
}

TEST_CASE("v_to_h offsets are support values, on random polygons") {
    for (int rep = 0; rep < 100; ++rep) {
        Polytope p = random_polygon(7);
        if (!p.is_full_dimensional_2d()) continue;
        Polytope h = v_to_h_2d(p);
        for (const Facet& f : h.facets()) {
            CHECK(f.offset == doctest::Approx(support_function(p, f.normal)).epsilon(1e-12));
            CHECK(norm(f.normal) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("triangle family hull: eta = (1,1,1)") {
    Polytope tri = convex_hull_2d({{-1, -1}, {2, -1}, {-1, 2}});
    REQUIRE(tri.vertex_count() == 3);
    CHECK(dist(tri.vertices()[0], {-1, -1}) <= 1e-12);
    CHECK(dist(tri.vertices()[1], {2, -1}) <= 1e-12);
    CHECK(dist(tri.vertices()[2], {-1, 2}) <= 1e-12);

    Polytope h = v_to_h_2d(tri);
    CHECK(dist(h.facets()[0].normal, {0, -1}) <= 1e-12);
    CHECK(dist(h.facets()[1].normal, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}) <= 1e-12);
    CHECK(dist(h.facets()[2].normal, {-1, 0}) <= 1e-12);
}

TEST_CASE("direction grid invariants") {
    DirectionGrid g = DirectionGrid::circle(720);
    CHECK(g.count() == 720);
    for (const Vec& u : g.directions()) CHECK(std::fabs(norm(u) - 1.0) <= 1e-12);
    // symmetric under negation by construction
    for (int j = 0; j < 360; ++j)
        CHECK(dist(g.directions()[j + 360], scale(-1.0, g.directions()[j])) == 0.0);
    CHECK_THROWS_AS(DirectionGrid(2, 7), MalformedInput);

    DirectionGrid g3(3, 100);
    for (const Vec& u : g3.directions()) CHECK(std::fabs(norm(u) - 1.0) <= 1e-12);
    for (int j = 0; j < 50; ++j)
        CHECK(dist(g3.directions()[j + 50], scale(-1.0, g3.directions()[j])) == 0.0);
}

TEST_CASE("hausdorff two-oracle agreement on random polygon pairs") {
    DirectionGrid grid = DirectionGrid::circle(720);
    for (int rep = 0; rep < 200; ++rep) {
        Polytope p = random_polygon(5);
        Polytope q = random_polygon(5);
        double exact = hausdorff_distance(p, q);
        double by_support = hausdorff_support_estimate(p, q, grid);
        double bound = hausdorff_grid_bound(p, q, grid);
        CHECK(by_support <= exact + 1e-9);
        CHECK(exact - by_support <= bound + 1e-9);
        double by_points = hausdorff_point_estimate(p, q, probe_grid_2d(p, q, 7, 7));
        CHECK(by_points <= exact + 1e-9);
    }
}

TEST_CASE("hausdorff metric axioms on random triples") {
    for (int rep = 0; rep < 100; ++rep) {
        Polytope a = random_polygon(4), b = random_polygon(4), c = random_polygon(4);
        double ab = hausdorff_distance(a, b);
        double ba = hausdorff_distance(b, a);
        CHECK(std::fabs(ab - ba) <= 1e-9);
        CHECK(ab <= hausdorff_distance(a, c) + hausdorff_distance(c, b) + 1e-9);
        CHECK(hausdorff_distance(a, a) <= 1e-12);
    }
}

TEST_CASE("zero hausdorff distance implies equal canonical forms") {
    Polytope p({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    Polytope q({{1, 1}, {0, 1}, {0, 0}, {1, 0}, {0.5, 0.5}});
    CHECK(hausdorff_distance(p, q) <= 1e-12);
    CHECK(same_vertices(p, q, 1e-12));
}

TEST_CASE("scalar and hausdorff convergence go together on shrinking sequences") {
    DirectionGrid grid = DirectionGrid::circle(720);
    Polytope target({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    double prev_h = 1e9, prev_s = 1e9;
    for (int n = 1; n <= 64; n *= 4) {
        Polytope pn = target.scaled(1.0 + 1.0 / n);
        double h = hausdorff_distance(pn, target);
        double s = hausdorff_support_estimate(pn, target, grid);
        CHECK(h <= prev_h);
        CHECK(s <= prev_s);
        CHECK(s <= h + 1e-9);
        CHECK(h <= s + hausdorff_grid_bound(pn, target, grid) + 1e-9);
        prev_h = h;
        prev_s = s;
    }
    // a non-converging sequence keeps both metrics bounded away from zero
    Polytope far = target.translated({5, 0});
    CHECK(hausdorff_distance(far, target) > 1.0);
    CHECK(hausdorff_support_estimate(far, target, grid) > 1.0);
}

TEST_CASE("projection reports a certified failure instead of looping") {
    // Well-conditioned inputs converge; this merely pins the exception type
    // carried by the failure path.
    try {
        throw NumericalFailure("synthetic", 0.25, 0.5);
    } catch (const NumericalFailure& e) {
        CHECK(e.lower_bound == 0.25);
        CHECK(e.upper_bound == 0.5);
    }
}
