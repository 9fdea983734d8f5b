#pragma once

#include <sstream>

#include "svset/mc.hpp"
#include "svset/randomization.hpp"
#include "svset/tree.hpp"

namespace svset {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline Polytope random_polygon(Rand& rnd, int npts, double lo = -2.0, double hi = 2.0) {
    std::vector<Vec> pts;
    for (int i = 0; i < npts; ++i) pts.push_back(Vec{rnd.uniform(lo, hi), rnd.uniform(lo, hi)});
    return Polytope(pts);
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace detail

// One scenario-tree test case of the equivalence corpus: binary tree with
// right-triangle leaf tuples, optionally with rotated leaves injected.
struct TreeCase {
    ScenarioTree tree;
    std::vector<TreeVectorRV> selections;
    bool rotated = false;
};

inline TreeCase make_tree_case(Rand& rnd, int depth, bool rotated) {
    std::vector<int> branching;
    std::vector<std::vector<double>> probs;
    int width = 1;
    for (int k = 0; k < depth; ++k) {
        for (int i = 0; i < width; ++i) {
            branching.push_back(2);
            double p = rnd.uniform(0.25, 0.75);
            probs.push_back({p, 1.0 - p});
        }
        width *= 2;
    }
    ScenarioTree tree = ScenarioTree::from_branching(branching, probs);
    const int L = tree.leaf_count();
    std::vector<TreeVectorRV> sel(3, TreeVectorRV(L));
    for (int i = 0; i < L; ++i) {
        double e1 = rnd.uniform(0.2, 2.0), e2 = rnd.uniform(0.2, 2.0), e3 = rnd.uniform(0.2, 2.0);
        auto v = right_triangle_vertices(e1, e2, e3);
        for (int j = 0; j < 3; ++j) sel[j][i] = v[j];
    }
    if (rotated) {
        int count = 1 + rnd.uniform_int(0, std::max(0, L / 2 - 1));
        for (int r = 0; r < count; ++r) {
            int leaf = rnd.uniform_int(0, L - 1);
            for (auto& rv : sel) {
                Vec v = rv[leaf];
                rv[leaf] = Vec{-v[1], v[0]};
            }
        }
    }
    return TreeCase{std::move(tree), std::move(sel), rotated};
}

inline std::vector<TreeCase> equivalence_corpus(std::uint64_t seed, int deterministic_count,
                                                int rotated_count, int max_depth = 4) {
    Rand rnd(seed, 0x7453);
    std::vector<TreeCase> corpus;
    for (int i = 0; i < deterministic_count; ++i)
        corpus.push_back(make_tree_case(rnd, 1 + rnd.uniform_int(0, max_depth - 1), false));
    for (int i = 0; i < rotated_count; ++i)
        corpus.push_back(make_tree_case(rnd, 1 + rnd.uniform_int(0, max_depth - 1), true));
    return corpus;
}

inline std::vector<CheckResult> verify_geometry(std::uint64_t seed) {
    std::vector<CheckResult> out;
    Rand rnd(seed, 0x6701);

    {
        CheckResult c{"support-additivity", true, ""};
        double worst = 0.0;
        for (int rep = 0; rep < 200 && c.pass; ++rep) {
            Polytope a = detail::random_polygon(rnd, 4);
            Polytope b = detail::random_polygon(rnd, 5);
            double w = rnd.uniform(0.1, 0.9);
            Polytope avg = minkowski_average({w, 1.0 - w}, {a, b});
            Vec u{rnd.uniform(-1, 1), rnd.uniform(-1, 1)};
            if (norm(u) < 1e-3) continue;
            double gap = std::fabs(support_function(avg, u) - w * support_function(a, u) -
                                   (1.0 - w) * support_function(b, u));
            worst = std::max(worst, gap);
            if (gap > 1e-9) c.pass = false;
        }
        c.detail = "max deviation " + detail::fmt(worst);
        out.push_back(c);
    }
    {
        CheckResult c{"hausdorff-two-oracle", true, ""};
        DirectionGrid grid = DirectionGrid::circle(720);
        double worst = 0.0;
        for (int rep = 0; rep < 200 && c.pass; ++rep) {
            Polytope p = detail::random_polygon(rnd, 5);
            Polytope q = detail::random_polygon(rnd, 5);
            double exact = hausdorff_distance(p, q);
            double by_support = hausdorff_support_estimate(p, q, grid);
            double bound = hausdorff_grid_bound(p, q, grid);
            double by_points = hausdorff_point_estimate(p, q, probe_grid_2d(p, q, 7, 7));
            if (by_support > exact + 1e-9 || exact - by_support > bound + 1e-9 ||
                by_points > exact + 1e-9)
                c.pass = false;
            worst = std::max(worst, exact - by_support);
        }
        c.detail = "max grid shortfall " + detail::fmt(worst);
        out.push_back(c);
    }
    {
        CheckResult c{"metric-axioms", true, ""};
        for (int rep = 0; rep < 100 && c.pass; ++rep) {
            Polytope a = detail::random_polygon(rnd, 4);
            Polytope b = detail::random_polygon(rnd, 4);
            Polytope cc = detail::random_polygon(rnd, 4);
            double ab = hausdorff_distance(a, b);
            if (std::fabs(ab - hausdorff_distance(b, a)) > 1e-9) c.pass = false;
            if (ab > hausdorff_distance(a, cc) + hausdorff_distance(cc, b) + 1e-9) c.pass = false;
            if (hausdorff_distance(a, a) > 1e-12) c.pass = false;
        }
        out.push_back(c);
    }
    {
        CheckResult c{"containment-duality", true, ""};
        for (int rep = 0; rep < 100 && c.pass; ++rep) {
            Polytope q = detail::random_polygon(rnd, 6);
            if (!q.is_full_dimensional_2d()) continue;
            Polytope p = detail::random_polygon(rnd, 4);
            bool by_projection = contains(q, p, 1e-9);
            bool by_support = true;
            Polytope qh = v_to_h_2d(q);
            for (const Facet& f : qh.facets())
                if (support_function(p, f.normal) > f.offset + 1e-9) by_support = false;
            if (by_projection != by_support) c.pass = false;
        }
        out.push_back(c);
    }
    return out;
}

inline std::vector<CheckResult> verify_fan(std::uint64_t seed) {
    std::vector<CheckResult> out;
    Rand rnd(seed, 0x6702);
    Fan tri = right_triangle_fan();

    {
        CheckResult c{"triangle-alpha-rows", true, ""};
        TypeCone tc = type_cone(tri);
        if (tc.rows.size() != 3 || effective_rows(tc).size() != 1) c.pass = false;
        for (const AlphaRow& r : tc.rows)
            for (double a : r.alpha)
                if (std::fabs(a - 1.0) > 1e-12) c.pass = false;
        if (!is_admissible(tri, {1, 1, 1}) || is_admissible(tri, {-1, -1, 1}) ||
            is_admissible(tri, {0, 0, 0}))
            c.pass = false;
        out.push_back(c);
    }
    {
        CheckResult c{"alpha-residuals-random-polygons", true, ""};
        double worst = 0.0;
        for (int rep = 0; rep < 60; ++rep) {
            Polytope p = detail::random_polygon(rnd, 6);
            if (!p.is_full_dimensional_2d()) continue;
            Fan f = normal_fan_2d(p);
            double total = 0.0;
            for (const auto& s : f.sectors) total += s.span;
            if (std::fabs(total - 2 * M_PI) > 1e-9) c.pass = false;
            for (const AdjacentPair& pr : adjacent_maximal_pairs(f)) {
                AlphaRow row = alpha_coefficients(f, pr.c1, pr.c2);
                Vec resid{0, 0};
                for (std::size_t j = 0; j < f.rays.size(); ++j)
                    resid = add(resid, scale(row.alpha[j], f.rays[j]));
                worst = std::max(worst, norm(resid));
                if (norm(resid) > 1e-10) c.pass = false;
                if (std::fabs(row.alpha[row.j1] + row.alpha[row.j2] - 2.0) > 1e-12) c.pass = false;
            }
        }
        c.detail = "max residual " + detail::fmt(worst);
        out.push_back(c);
    }
    {
        CheckResult c{"typecone-round-trip", true, ""};
        TypeCone tc = type_cone(tri);
        int done = 0;
        while (done < 100) {
            std::vector<double> h{rnd.uniform(-1, 1), rnd.uniform(-1, 1), rnd.uniform(-1, 1)};
            if (!is_admissible(tc, h, 1e-3)) {
                if (h[0] + h[1] + h[2] < -1e-3 && is_admissible(tc, h)) c.pass = false;
                continue;
            }
            ++done;
            Polytope ph = polytope_from_offsets(tri, h);
            if (!fans_equal(tri, normal_fan_2d(ph), 1e-8)) c.pass = false;
            for (int j = 0; j < 3; ++j)
                if (std::fabs(support_function(ph, tri.rays[j]) - h[j]) > 1e-9) c.pass = false;
        }
        out.push_back(c);
    }
    {
        CheckResult c{"interior-direction-unique-maximizer", true, ""};
        DirectionGrid grid = DirectionGrid::circle(720);
        const double step = 2.0 * M_PI / grid.count();
        for (int rep = 0; rep < 10; ++rep) {
            Polytope p = detail::random_polygon(rnd, 5);
            if (!p.is_full_dimensional_2d()) continue;
            Fan f = normal_fan_2d(p);
            for (std::size_t k = 0; k < p.vertex_count(); ++k) {
                const auto& sec = f.sectors[k];
                for (const Vec& u : grid.directions()) {
                    double a = std::atan2(u[1], u[0]);
                    if (a < 0) a += 2 * M_PI;
                    double rel = a - sec.start;
                    while (rel < 0) rel += 2 * M_PI;
                    if (rel <= step || rel >= sec.span - step || rel > sec.span) continue;
                    for (std::size_t w = 0; w < p.vertex_count(); ++w)
                        if (w != k && dot(u, p.vertices()[k]) <= dot(u, p.vertices()[w]))
                            c.pass = false;
                }
            }
        }
        out.push_back(c);
    }
    return out;
}

inline std::vector<CheckResult> verify_tree(std::uint64_t seed) {
    std::vector<CheckResult> out;
    Rand rnd(seed, 0x6703);

    {
        CheckResult c{"scalarization-identity", true, ""};
        DirectionGrid grid = DirectionGrid::circle(64);
        for (int rep = 0; rep < 10 && c.pass; ++rep) {
            ScenarioTree t = ScenarioTree::uniform_binary(1 + rnd.uniform_int(0, 2));
            std::vector<Polytope> leaves;
            for (int i = 0; i < t.leaf_count(); ++i)
                leaves.push_back(detail::random_polygon(rnd, 4));
            auto nodes = cond_expect_polytope_all(t, leaves);
            MartingaleAudit audit = martingale_audit(t, nodes);
            if (audit.max_defect > 1e-9) c.pass = false;
            for (const Vec& u : grid.directions()) {
                double want = 0.0;
                for (int i = 0; i < t.leaf_count(); ++i)
                    want += t.prob(t.leaves()[i]) * support_function(leaves[i], u);
                if (std::fabs(support_function(nodes[0], u) - want) > 1e-9) c.pass = false;
            }
        }
        out.push_back(c);
    }
    {
        CheckResult c{"equivalence-corpus-200", true, ""};
        DirectionGrid grid = DirectionGrid::circle(720);
        auto corpus = equivalence_corpus(seed, 100, 100);
        int agreed = 0;
        double min_rot_gap = 1e300, max_det_gap = 0.0;
        for (const TreeCase& tc : corpus) {
            std::vector<std::vector<Vec>> tuples;
            for (int i = 0; i < tc.tree.leaf_count(); ++i)
                tuples.push_back({tc.selections[0][i], tc.selections[1][i], tc.selections[2][i]});
            bool fan_ok = deterministic_fan_test(tuples, grid).verdict;
            auto hv = hull_vs_conditional(tc.tree, tc.selections);
            if (!hv.inclusion_ok) c.pass = false;
            if (fan_ok != hv.martingale) c.pass = false;
            if (fan_ok == hv.martingale) ++agreed;
            if (tc.rotated) {
                if (hv.martingale) c.pass = false;
                min_rot_gap = std::min(min_rot_gap, hv.max_gap);
            } else {
                if (!hv.martingale) c.pass = false;
                max_det_gap = std::max(max_det_gap, hv.max_gap);
            }
        }
        if (min_rot_gap < 1e-3 || max_det_gap > 1e-9) c.pass = false;
        c.detail = std::to_string(agreed) + "/200 agreed, det gap <= " + detail::fmt(max_det_gap) +
                   ", rot gap >= " + detail::fmt(min_rot_gap);
        out.push_back(c);
    }
    {
        CheckResult c{"randomization-1000", true, ""};
        for (int rep = 0; rep < 1000 && c.pass; ++rep) {
            int n = rnd.uniform_int(1, 4), A = rnd.uniform_int(1, 8);
            std::vector<double> probs(A);
            double tot = 0.0;
            for (double& p : probs) {
                p = rnd.uniform(0.1, 1.0);
                tot += p;
            }
            for (double& p : probs) p /= tot;
            double s = 0.0;
            for (int a = 0; a + 1 < A; ++a) s += probs[a];
            probs[A - 1] = 1.0 - s;
            std::vector<std::vector<double>> zeta(n, std::vector<double>(A));
            for (auto& row : zeta)
                for (double& z : row) z = rnd.uniform(-3.0, 3.0);
            auto r = randomization_identity(probs, zeta);
            double best = -1e300;
            std::vector<int> pick(A, 0);
            while (true) {
                double val = 0.0;
                for (int a = 0; a < A; ++a) val += probs[a] * zeta[pick[a]][a];
                best = std::max(best, val);
                int a = 0;
                while (a < A) {
                    if (++pick[a] < n) break;
                    pick[a] = 0;
                    ++a;
                }
                if (a == A) break;
            }
            double scale_ = std::max(1.0, std::fabs(best));
            if (std::fabs(r.partition_value - best) > 1e-12 * scale_ ||
                std::fabs(r.expected_max - best) > 1e-12 * scale_ ||
                std::fabs(r.simplex_value - best) > 1e-12 * scale_)
                c.pass = false;
        }
        out.push_back(c);
    }
    {
        CheckResult c{"decomposable-hull", true, ""};
        std::vector<std::vector<Vec>> K2{{{0.0}, {0.0}}, {{1.0}, {1.0}}};
        if (decomposable_hull(K2).size() != 4) c.pass = false;
        std::vector<std::vector<Vec>> K1{{{1.0, 0.0}, {2.0, 0.0}}};
        if (decomposable_hull(K1).size() != 1) c.pass = false;
        out.push_back(c);
    }
    return out;
}

inline std::vector<CheckResult> verify_mc(std::uint64_t seed) {
    std::vector<CheckResult> out;

    DriverConfig cfg;
    cfg.m = 3;
    cfg.steps = 1024;
    cfg.horizon = 1.0;
    cfg.mode = DriverMode::Walk;
    cfg.seed = seed;
    cfg.samples = 20000;
    PathEnsemble paths(cfg);
    const int N = cfg.steps;

    {
        CheckResult c{"determinism-same-seed", true, ""};
        PathEnsemble again(cfg);
        std::vector<double> a, b;
        for (int s = 0; s < 4; ++s) {
            paths.increments(s, a);
            again.increments(s, b);
            if (a != b) c.pass = false;
        }
        out.push_back(c);
    }
    {
        CheckResult c{"exponential-martingale-mean", true, ""};
        double sum = 0.0, sumsq = 0.0;
        for (int s = 0; s < cfg.samples; ++s) {
            double v = exponential_martingale(paths, 0.5, 0, s, {N})[0];
            sum += v;
            sumsq += v * v;
        }
        double n = cfg.samples;
        double mean = sum / n;
        double se = std::sqrt(std::max(0.0, (sumsq - n * mean * mean) / (n - 1)) / n);
        c.pass = std::fabs(mean - 1.0) <= kStatThreshold * se + 1e-4;
        c.detail = "mean " + detail::fmt(mean) + " se " + detail::fmt(se);
        out.push_back(c);
    }
    {
        CheckResult c{"admissibility-along-paths", true, ""};
        std::vector<int> all(N + 1);
        for (int k = 0; k <= N; ++k) all[k] = k;
        for (int s = 0; s < 3; ++s) {
            try {
                auto tri = sample_triangle_trajectory(paths, 0.5, s, all);
                for (const auto& e : tri.eta)
                    if (!(e[0] + e[1] + e[2] > 0.0)) c.pass = false;
            } catch (const AdmissibilityError&) {
                c.pass = false;
            }
        }
        out.push_back(c);
    }
    {
        CheckResult c{"snapshot-matches-triangle-at-T", true, ""};
        std::vector<double> incr;
        double worst = 0.0;
        for (int s = 0; s < 5; ++s) {
            auto family = triangle_walk_integrands(paths, 0.5, s);
            paths.increments(s, incr);
            auto pts = snapshot_points(family, incr, N, paths.m(), N);
            auto tri = sample_triangle_trajectory(paths, 0.5, s, {N});
            double h = hausdorff_between_point_sets(
                pts, {tri.vertices[0][0], tri.vertices[0][1], tri.vertices[0][2]});
            worst = std::max(worst, h);
            if (h > 1e-9) c.pass = false;
        }
        c.detail = "max hausdorff " + detail::fmt(worst);
        out.push_back(c);
    }
    {
        CheckResult c{"vertex-martingality", true, ""};
        std::vector<int> cp{N};
        double max_z = 0.0;
        std::array<Vec, 3> target = right_triangle_vertices(1.0, 1.0, 1.0);
        std::vector<double> sum(6, 0.0), sumsq(6, 0.0);
        for (int s = 0; s < cfg.samples; ++s) {
            auto tri = sample_triangle_trajectory(paths, 0.5, s, cp);
            for (int i = 0; i < 3; ++i)
                for (int d = 0; d < 2; ++d) {
                    double v = tri.vertices[0][i][d];
                    sum[i * 2 + d] += v;
                    sumsq[i * 2 + d] += v * v;
                }
        }
        double n = cfg.samples;
        for (int i = 0; i < 3; ++i)
            for (int d = 0; d < 2; ++d) {
                double mean = sum[i * 2 + d] / n;
                double se =
                    std::sqrt(std::max(0.0, (sumsq[i * 2 + d] - n * mean * mean) / (n - 1)) / n);
                double z = se > 0 ? (mean - target[i][d]) / se : 0.0;
                max_z = std::max(max_z, std::fabs(z));
            }
        c.pass = max_z <= kStatThreshold;
        c.detail = "max |z| " + detail::fmt(max_z);
        out.push_back(c);
    }
    return out;
}

inline std::vector<CheckResult> verify_suite(const std::string& suite, std::uint64_t seed) {
    std::vector<CheckResult> out;
    if (suite == "geometry" || suite == "all") {
        auto r = verify_geometry(seed);
        out.insert(out.end(), r.begin(), r.end());
    }
    if (suite == "fan" || suite == "all") {
        auto r = verify_fan(seed);
        out.insert(out.end(), r.begin(), r.end());
    }
    if (suite == "tree" || suite == "all") {
        auto r = verify_tree(seed);
        out.insert(out.end(), r.begin(), r.end());
    }
    if (suite == "mc" || suite == "all") {
        auto r = verify_mc(seed);
        out.insert(out.end(), r.begin(), r.end());
    }
    if (out.empty()) throw MalformedInput("verify: unknown suite \"" + suite + "\"");
    return out;
}

}  // namespace svset
