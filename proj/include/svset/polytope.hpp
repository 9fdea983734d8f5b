#pragma once

#include <algorithm>
#include <optional>

#include "svset/common.hpp"
#include "svset/projection.hpp"

namespace svset {

struct Facet {
    Vec normal;     // outward, unit
    double offset;  // support value along the normal
};

namespace detail {

inline double cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Monotone chain with collinearity threshold measured as perpendicular
// distance (tol::canonical, absolute). Input must be deduplicated.
// Returns the hull counterclockwise starting at the lexicographically
// smallest point; collinear interior points are removed.
inline std::vector<Vec> hull_2d(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
    const std::size_t n = pts.size();
    if (n <= 2) return pts;

    auto keep_turn = [](const Vec& o, const Vec& a, const Vec& b) {
        // strict left turn, treating perpendicular offsets below the
        // canonical tolerance as collinear
        double c = cross2(o, a, b);
        return c > tol::canonical * dist(o, b);
    };

    std::vector<Vec> h;
    h.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {  // lower
        while (h.size() >= 2 && !keep_turn(h[h.size() - 2], h.back(), pts[i])) h.pop_back();
        h.push_back(pts[i]);
    }
    const std::size_t lower = h.size() + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper
        while (h.size() >= lower && !keep_turn(h[h.size() - 2], h.back(), pts[i])) h.pop_back();
        h.push_back(pts[i]);
    }
    h.pop_back();  // first point repeated
    return h;
}

inline std::vector<Vec> dedup_points(std::vector<Vec> pts) {
    std::vector<Vec> out;
    for (auto& p : pts) {
        bool seen = false;
        for (const auto& q : out)
            if (dist(p, q) <= tol::canonical) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(std::move(p));
    }
    return out;
}

}  // namespace detail

// Compact convex polytope in minimal vertex representation. Canonical
// ordering: counterclockwise from the lexicographically smallest vertex in
// d=2, plain lexicographic in other dimensions. Values are immutable after
// construction and safe to share across threads.
class Polytope {
  public:
    explicit Polytope(std::vector<Vec> points) {
        if (points.empty()) throw MalformedInput("Polytope: empty vertex list");
        dim_ = static_cast<int>(points[0].size());
        if (dim_ < 1) throw MalformedInput("Polytope: dimension must be >= 1");
        for (const Vec& p : points) {
            check_vector(p, "Polytope vertex");
            if (static_cast<int>(p.size()) != dim_)
                throw DimensionMismatch("Polytope: mixed vertex dimensions");
        }
        canonicalize(std::move(points));
    }

    int dim() const { return dim_; }
    const std::vector<Vec>& vertices() const { return verts_; }
    std::size_t vertex_count() const { return verts_.size(); }

    bool has_facets() const { return !facets_.empty(); }
    const std::vector<Facet>& facets() const { return facets_; }

    // ||C|| = h(C, {0}), the radius of the smallest origin-centered ball
    // containing the set.
    double radius() const {
        double r = 0.0;
        for (const Vec& v : verts_) r = std::max(r, norm(v));
        return r;
    }

    bool is_full_dimensional_2d() const {
        return dim_ == 2 && verts_.size() >= 3;
    }

    Polytope translated(const Vec& t) const {
        std::vector<Vec> pts;
        pts.reserve(verts_.size());
        for (const Vec& v : verts_) pts.push_back(add(v, t));
        return Polytope(std::move(pts));
    }

    Polytope scaled(double c) const {
        std::vector<Vec> pts;
        pts.reserve(verts_.size());
        for (const Vec& v : verts_) pts.push_back(scale(c, v));
        return Polytope(std::move(pts));
    }

  private:
    friend Polytope v_to_h_2d(const Polytope& p);

    void canonicalize(std::vector<Vec> points) {
        points = detail::dedup_points(std::move(points));
        if (dim_ == 2) {
            verts_ = detail::hull_2d(std::move(points));
        } else if (dim_ == 1) {
            auto [lo, hi] = std::minmax_element(
                points.begin(), points.end(),
                [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
            verts_ = {*lo};
            if (dist(*lo, *hi) > tol::canonical) verts_.push_back(*hi);
        } else {
            // Minimal V-rep by dropping points lying in the hull of the rest.
            std::vector<Vec> kept = std::move(points);
            for (std::size_t i = kept.size(); i-- > 0 && kept.size() > 1;) {
                std::vector<Vec> rest;
                rest.reserve(kept.size() - 1);
                for (std::size_t j = 0; j < kept.size(); ++j)
                    if (j != i) rest.push_back(kept[j]);
                if (distance_to_hull(kept[i], rest) <= tol::canonical)
                    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
            }
            std::sort(kept.begin(), kept.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
            verts_ = std::move(kept);
        }
    }

    int dim_ = 0;
    std::vector<Vec> verts_;
    std::vector<Facet> facets_;
};

// s(x*, P) = max over vertices of <x*, v>; exact for polytopes.
inline double support_function(const Polytope& p, const Vec& xstar) {
    if (static_cast<int>(xstar.size()) != p.dim())
        throw DimensionMismatch("support_function: direction dimension mismatch");
    const auto& vs = p.vertices();
    if (vs.empty()) throw MalformedInput("support_function: empty vertex list");
    double best = dot(xstar, vs[0]);
    for (std::size_t i = 1; i < vs.size(); ++i) best = std::max(best, dot(xstar, vs[i]));
    return best;
}

inline double point_distance(const Vec& x, const Polytope& p, double tol_ = tol::projection) {
    if (static_cast<int>(x.size()) != p.dim())
        throw DimensionMismatch("point_distance: dimension mismatch");
    return distance_to_hull(x, p.vertices(), tol_);
}

inline Polytope convex_hull_2d(const std::vector<Vec>& points) {
    if (points.empty()) throw MalformedInput("convex_hull_2d: no points");
    if (points[0].size() != 2) throw DimensionMismatch("convex_hull_2d: expects d=2");
    return Polytope(points);
}

// true iff P subseteq Q within tol. Exact route: every vertex of P projects
// into Q within tol.
inline bool contains(const Polytope& q, const Polytope& p, double tol_ = tol::canonical) {
    if (q.dim() != p.dim()) throw DimensionMismatch("contains: dimension mismatch");
    const double ptol = std::min(tol_ * 0.1, tol::projection);
    for (const Vec& v : p.vertices())
        if (distance_to_hull(v, q.vertices(), ptol) > tol_) return false;
    return true;
}

// Weighted Minkowski combination sum_i w_i P_i with nonnegative weights
// summing to one. Computed by pairwise vertex sums with hull reduction, which
// agrees with the all-tuples enumeration. Support functions add:
// s(x*, result) = sum_i w_i s(x*, P_i).
inline Polytope minkowski_average(const std::vector<double>& weights,
                                  const std::vector<Polytope>& polys) {
    if (weights.size() != polys.size() || polys.empty())
        throw MalformedInput("minkowski_average: weight/polytope count mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw MalformedInput("minkowski_average: negative weight");
        total += w;
    }
    if (std::fabs(total - 1.0) > tol::weight_sum)
        throw MalformedInput("minkowski_average: weights must sum to 1");
    const int d = polys[0].dim();
    for (const Polytope& p : polys)
        if (p.dim() != d) throw DimensionMismatch("minkowski_average: dimension mismatch");

    std::vector<Vec> acc;
    for (const Vec& v : polys[0].vertices()) acc.push_back(scale(weights[0], v));
    acc = Polytope(acc).vertices();
    for (std::size_t i = 1; i < polys.size(); ++i) {
        std::vector<Vec> next;
        next.reserve(acc.size() * polys[i].vertex_count());
        for (const Vec& u : acc)
            for (const Vec& v : polys[i].vertices()) next.push_back(add(u, scale(weights[i], v)));
        acc = Polytope(next).vertices();
    }
    return Polytope(acc);
}

// H-representation of a full-dimensional polygon: outward unit facet
// normals, counterclockwise in edge order, offsets h_j = s(normal_j, P).
inline Polytope v_to_h_2d(const Polytope& p) {
    if (p.dim() != 2) throw DimensionMismatch("v_to_h_2d: expects d=2");
    if (!p.is_full_dimensional_2d())
        throw DegeneratePolytope("v_to_h_2d: polytope is not full-dimensional");
    Polytope out = p;
    const auto& vs = p.vertices();
    const std::size_t m = vs.size();
    out.facets_.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Vec& a = vs[k];
        const Vec& b = vs[(k + 1) % m];
        Vec e = sub(b, a);
        double len = norm(e);
        if (len <= tol::canonical) throw DegeneratePolytope("v_to_h_2d: zero-length edge");
        Vec n{e[1] / len, -e[0] / len};  // outward for ccw boundary
        out.facets_.push_back(Facet{n, dot(n, a)});
    }
    return out;
}

// Hausdorff distance for compact polytopes. d(., Q) is convex, so each
// one-sided supremum is attained at a vertex; both sides evaluated by
// nearest-point projection.
inline double hausdorff_distance(const Polytope& p, const Polytope& q,
                                 double tol_ = tol::projection) {
    if (p.dim() != q.dim()) throw DimensionMismatch("hausdorff_distance: dimension mismatch");
    double h = 0.0;
    for (const Vec& v : p.vertices()) h = std::max(h, distance_to_hull(v, q.vertices(), tol_));
    for (const Vec& v : q.vertices()) h = std::max(h, distance_to_hull(v, p.vertices(), tol_));
    return h;
}

// One-sided Hausdorff deviation sup_{x in P} d(x, Q).
inline double hausdorff_one_sided(const Polytope& p, const Polytope& q,
                                  double tol_ = tol::projection) {
    if (p.dim() != q.dim()) throw DimensionMismatch("hausdorff_one_sided: dimension mismatch");
    double h = 0.0;
    for (const Vec& v : p.vertices()) h = std::max(h, distance_to_hull(v, q.vertices(), tol_));
    return h;
}

inline bool same_vertices(const Polytope& p, const Polytope& q, double tol_ = tol::canonical) {
    if (p.dim() != q.dim() || p.vertex_count() != q.vertex_count()) return false;
    for (std::size_t i = 0; i < p.vertex_count(); ++i)
        if (dist(p.vertices()[i], q.vertices()[i]) > tol_) return false;
    return true;
}

}  // namespace svset
