#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "svset/typecone.hpp"

using namespace svset;

namespace {

const double s2 = std::sqrt(2.0);

// Fan of the right-triangle family: rays (-1,0),(0,-1),(1,1) with maximal
// cones {0,1},{1,2},{0,2}. The third ray keeps its natural scaling so that
// offsets h measure the facet inequalities -x1<=h0, -x2<=h1, x1+x2<=h2.
Fan triangle_fan() {
    return make_fan({{-1, 0}, {0, -1}, {1, 1}}, {{0, 1}, {1, 2}, {0, 2}});
}

Fan square_fan() {
    return make_fan({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

std::mt19937_64 rng(777);

Polytope random_polygon(int npts) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::vector<Vec> pts;
    for (int i = 0; i < npts; ++i) pts.push_back(Vec{d(rng), d(rng)});
    return Polytope(pts);
}

// Least-squares oracle for the dependence row of one adjacent pair: solve
// the 3x3 system (two components of the ray sum, one normalization row).
std::vector<double> alpha_oracle(const Fan& f, const std::vector<int>& U, int j1, int j2) {
    std::vector<double> A(9, 0.0), b(3, 0.0);
    for (int c = 0; c < 3; ++c) {
        A[0 * 3 + c] = f.rays[U[c]][0];
        A[1 * 3 + c] = f.rays[U[c]][1];
        A[2 * 3 + c] = (U[c] == j1 || U[c] == j2) ? 1.0 : 0.0;
    }
    b[2] = 2.0;
    REQUIRE(solve_dense(A, b, 3));
    return b;
}

}  // namespace

TEST_CASE("normal cone at a vertex: square and triangle corners") {
    Polytope square({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    Cone c = normal_cone_at_vertex_2d(square, {1, 1});
    REQUIRE(c.generators.size() == 2);
    CHECK(dist(c.generators[0], {1, 0}) <= 1e-12);
    CHECK(dist(c.generators[1], {0, 1}) <= 1e-12);

    // right-angle corner of the eta=(1,1,1) triangle
    Polytope tri({{-1, -1}, {2, -1}, {-1, 2}});
    Cone c1 = normal_cone_at_vertex_2d(tri, {-1, -1});
    REQUIRE(c1.generators.size() == 2);
    CHECK(dist(c1.generators[0], {-1, 0}) <= 1e-12);
    CHECK(dist(c1.generators[1], {0, -1}) <= 1e-12);

    Cone c2 = normal_cone_at_vertex_2d(tri, {2, -1});
    REQUIRE(c2.generators.size() == 2);
    CHECK(dist(c2.generators[0], {0, -1}) <= 1e-12);
    CHECK(dist(c2.generators[1], {1.0 / s2, 1.0 / s2}) <= 1e-12);

    CHECK_THROWS_AS(normal_cone_at_vertex_2d(tri, {0, 0}), MalformedInput);
}

TEST_CASE("interior directions of a vertex normal cone pick that vertex uniquely") {
    DirectionGrid grid = DirectionGrid::circle(720);
    const double step = 2.0 * M_PI / grid.count();
    for (int rep = 0; rep < 40; ++rep) {
        Polytope p = random_polygon(6);
        if (!p.is_full_dimensional_2d()) continue;
        Fan f = normal_fan_2d(p);
        for (std::size_t k = 0; k < p.vertex_count(); ++k) {
            const auto& sec = f.sectors[k];
            for (const Vec& u : grid.directions()) {
                double a = std::atan2(u[1], u[0]);
                if (a < 0) a += 2 * M_PI;
                double rel = a - sec.start;
                while (rel < 0) rel += 2 * M_PI;
                if (rel <= step || rel >= sec.span - step) continue;  // need interior margin
                if (rel > sec.span) continue;
                const Vec& v = p.vertices()[k];
                for (std::size_t w = 0; w < p.vertex_count(); ++w) {
                    if (w == k) continue;
                    CHECK(dot(u, v) > dot(u, p.vertices()[w]));
                }
            }
        }
    }
}

TEST_CASE("normal fan of the triangle family matches the maximal index sets") {
    Polytope tri({{-1, -1}, {2, -1}, {-1, 2}});
    Fan f = normal_fan_2d(tri);
    CHECK(f.complete);
    CHECK(f.simplicial);
    CHECK(f.essential);
    REQUIRE(f.rays.size() == 3);
    CHECK(fans_equal(f, triangle_fan()));
}

TEST_CASE("normal fan of the square: four quadrants, translation/scale invariance") {
    Polytope square({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    Fan f = normal_fan_2d(square);
    CHECK(f.maximal.size() == 4);
    for (const auto& s : f.sectors) CHECK(s.span == doctest::Approx(M_PI / 2));
    CHECK(fans_equal(f, square_fan()));

    Fan ft = normal_fan_2d(square.translated({3.5, -1.25}));
    CHECK(fans_equal(f, ft));
    Fan fs = normal_fan_2d(square.scaled(2.0));
    CHECK(fans_equal(f, fs));

    CHECK_FALSE(fans_equal(f, triangle_fan()));
    CHECK_THROWS_AS(normal_fan_2d(Polytope({{0, 0}, {1, 1}})), DegeneratePolytope);
}

TEST_CASE("fan completeness: sector angles sum to 2pi on random polygons") {
    for (int rep = 0; rep < 60; ++rep) {
        Polytope p = random_polygon(7);
        if (!p.is_full_dimensional_2d()) continue;
        Fan f = normal_fan_2d(p);
        double total = 0.0;
        for (const auto& s : f.sectors) total += s.span;
        CHECK(std::fabs(total - 2 * M_PI) <= 1e-9);
        // dimension bookkeeping: every vertex cone is a true 2D sector and
        // every adjacent pair meets in a single ray
        for (const auto& s : f.sectors) {
            CHECK(s.span > 1e-9);
            CHECK(s.span < M_PI - 1e-9);
        }
        auto pairs = adjacent_maximal_pairs(f);
        CHECK(pairs.size() == f.maximal.size());
    }
}

TEST_CASE("adjacent pairs: triangle has 3, square has 4, plane-like fans are rejected") {
    CHECK(adjacent_maximal_pairs(triangle_fan()).size() == 3);
    CHECK(adjacent_maximal_pairs(square_fan()).size() == 4);

    // one maximal cone spanning the whole plane
    Fan plane = make_fan({{1, 0}, {-0.5, std::sqrt(3.0) / 2}, {-0.5, -std::sqrt(3.0) / 2}},
                         {{0, 1, 2}});
    CHECK_FALSE(plane.simplicial);
    CHECK_FALSE(plane.essential);
    CHECK_THROWS_AS(adjacent_maximal_pairs(plane), InvalidFan);
}

TEST_CASE("alpha coefficients: triangle fan gives the all-ones row") {
    Fan f = triangle_fan();
    for (const AdjacentPair& p : adjacent_maximal_pairs(f)) {
        AlphaRow row = alpha_coefficients(f, p.c1, p.c2);
        REQUIRE(row.alpha.size() == 3);
        for (int j = 0; j < 3; ++j) CHECK(row.alpha[j] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(row.alpha[row.j1] + row.alpha[row.j2] == doctest::Approx(2.0).epsilon(1e-12));
        Vec resid{0, 0};
        for (int j = 0; j < 3; ++j) resid = add(resid, scale(row.alpha[j], f.rays[j]));
        CHECK(norm(resid) <= 1e-10);
    }
}

TEST_CASE("alpha coefficients: square fan pair gives (1,0,1) against the oracle") {
    Fan f = square_fan();
    AlphaRow row = alpha_coefficients(f, 0, 1);  // cones {0,1} and {1,2}
    CHECK(row.j1 == 0);
    CHECK(row.j2 == 2);
    CHECK(row.alpha[0] == doctest::Approx(1.0));
    CHECK(row.alpha[1] == doctest::Approx(0.0));
    CHECK(row.alpha[2] == doctest::Approx(1.0));
    CHECK(row.alpha[3] == doctest::Approx(0.0));

    auto oracle = alpha_oracle(f, {0, 1, 2}, 0, 2);
    CHECK(row.alpha[0] == doctest::Approx(oracle[0]).epsilon(1e-12));
    CHECK(row.alpha[1] == doctest::Approx(oracle[1]).epsilon(1e-12));
    CHECK(row.alpha[2] == doctest::Approx(oracle[2]).epsilon(1e-12));

    CHECK_THROWS_AS(alpha_coefficients(f, 0, 2), InvalidFan);  // not adjacent
}

TEST_CASE("alpha rows are invariant under swapping the pair order") {
    for (Fan f : {triangle_fan(), square_fan()}) {
        for (const AdjacentPair& p : adjacent_maximal_pairs(f)) {
            AlphaRow fwd = alpha_coefficients(f, p.c1, p.c2);
            AlphaRow rev = alpha_coefficients(f, p.c2, p.c1);
            for (std::size_t j = 0; j < f.rays.size(); ++j)
                CHECK(fwd.alpha[j] == doctest::Approx(rev.alpha[j]).epsilon(1e-12));
            // the non-shared indices swap roles, the predicate is unchanged
            CHECK(fwd.j1 == rev.j2);
            CHECK(fwd.j2 == rev.j1);
        }
    }
}

TEST_CASE("alpha rows are invariant under uniform ray rescaling") {
    Fan doubled = make_fan({{-2, 0}, {0, -2}, {2, 2}}, {{0, 1}, {1, 2}, {0, 2}});
    Fan base = triangle_fan();
    for (const AdjacentPair& p : adjacent_maximal_pairs(base)) {
        AlphaRow a = alpha_coefficients(base, p.c1, p.c2);
        AlphaRow b = alpha_coefficients(doubled, p.c1, p.c2);
        for (int j = 0; j < 3; ++j) CHECK(a.alpha[j] == doctest::Approx(b.alpha[j]).epsilon(1e-12));
    }
}

TEST_CASE("type cone of the triangle fan reduces to a single row") {
    Fan f = triangle_fan();
    TypeCone tc = type_cone(f);
    CHECK(tc.rows.size() == 3);
    auto eff = effective_rows(tc);
    REQUIRE(eff.size() == 1);
    CHECK(is_admissible(f, {1, 1, 1}));
    CHECK_FALSE(is_admissible(f, {-1, -1, 1}));
    CHECK_FALSE(is_admissible(f, {0, 0, 0}));
}

TEST_CASE("triangle row membership equals the positive offset-sum condition") {
    // Offsets h = (eta1, eta2, eta3) describe the triangle
    // {-x1<=eta1, -x2<=eta2, x1+x2<=eta3}; the single effective row must
    // accept exactly when eta1+eta2+eta3 > 0.
    Fan f = triangle_fan();
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        double e1 = ud(rng), e2 = ud(rng), e3 = ud(rng);
        double sum = e1 + e2 + e3;
        if (std::fabs(sum) < 1e-6) continue;
        CHECK(is_admissible(f, {e1, e2, e3}) == (sum > 0));
    }
}

TEST_CASE("square fan type cone: opposite-ray rows") {
    TypeCone tc = type_cone(square_fan());
    CHECK(tc.rows.size() == 4);
    auto eff = effective_rows(tc);
    REQUIRE(eff.size() == 2);
    CHECK(is_admissible(square_fan(), {1, 1, 1, 1}));
    CHECK_FALSE(is_admissible(square_fan(), {1, 1, -1, 1}));  // h0 + h2 = 0
    CHECK(is_admissible(square_fan(), {2, 1, -1, 1}));        // shifted box is still a box
}

TEST_CASE("type cone round trip on random admissible offsets") {
    Fan f = triangle_fan();
    TypeCone tc = type_cone(f);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    int done = 0;
    while (done < 200) {
        std::vector<double> h{ud(rng), ud(rng), ud(rng)};
        if (!is_admissible(tc, h, 1e-3)) continue;  // sample clearly inside
        ++done;
        Polytope ph = polytope_from_offsets(f, h);
        REQUIRE(ph.vertex_count() == 3);
        Fan back = normal_fan_2d(ph);
        CHECK(fans_equal(f, back, 1e-8));
        // offsets are reproduced as support values along the rays
        for (int j = 0; j < 3; ++j)
            CHECK(support_function(ph, f.rays[j]) == doctest::Approx(h[j]).epsilon(1e-9));
    }
    int rejected = 0;
    while (rejected < 200) {
        std::vector<double> h{ud(rng), ud(rng), ud(rng)};
        double row = 0.0;
        for (int j = 0; j < 3; ++j) row += tc.rows[0].alpha[j] * h[j];
        if (row > -1e-3) continue;
        CHECK_FALSE(is_admissible(tc, h));
        ++rejected;
    }
}

TEST_CASE("deterministic fan test: fixed-fan family passes, rotation fails") {
    DirectionGrid grid = DirectionGrid::circle(720);
    std::uniform_real_distribution<double> ud(0.2, 2.0);

    std::vector<std::vector<Vec>> det_samples;
    for (int s = 0; s < 12; ++s) {
        double e1 = ud(rng), e2 = ud(rng), e3 = ud(rng);
        det_samples.push_back({{-e1, -e2}, {e2 + e3, -e2}, {-e1, e1 + e3}});
    }
    FanTestReport rep = deterministic_fan_test(det_samples, grid);
    CHECK(rep.argmax_ok);
    CHECK(rep.fans_ok);
    CHECK(rep.verdict);

    // single sample is vacuously deterministic
    FanTestReport one = deterministic_fan_test({det_samples[0]}, grid);
    CHECK(one.verdict);

    // a 90-degree rotation breaks both checks
    auto rot = [](const Vec& v) { return Vec{-v[1], v[0]}; };
    std::vector<std::vector<Vec>> mixed{det_samples[0], {}};
    for (const Vec& v : det_samples[1]) mixed[1].push_back(rot(v));
    FanTestReport bad = deterministic_fan_test(mixed, grid);
    CHECK_FALSE(bad.verdict);
    CHECK_FALSE(bad.argmax_ok);
    CHECK(bad.witness_direction >= 0);
    CHECK_FALSE(bad.fans_ok);

    CHECK_THROWS_AS(deterministic_fan_test({det_samples[0], {det_samples[0][0]}}, grid),
                    MalformedInput);
}

TEST_CASE("fan construction validation errors") {
    CHECK_THROWS_AS(make_fan({{0, 0}}, {{0}}), MalformedInput);
    CHECK_THROWS_AS(make_fan({{1, 0}, {1, 0}}, {{0, 1}}), InvalidFan);
    CHECK_THROWS_AS(make_fan({{1, 0}, {0, 1}}, {{0, 5}}), InvalidFan);
    // overlapping sectors violate the common-face axiom
    CHECK_THROWS_AS(make_fan({{1, 0}, {0, 1}, {-1, 1}}, {{0, 1}, {0, 2}}), InvalidFan);
}
