#pragma once

#include <algorithm>
#include <cmath>

#include "svset/polytope.hpp"

namespace svset {

// Convex conic hull of finitely many nonzero generators. Canonical form in
// d=2: unit generators, deduplicated, minimal (at most two for a pointed
// cone), counterclockwise.
struct Cone {
    std::vector<Vec> generators;
};

namespace detail {

inline double angle_of(const Vec& u) {
    double a = std::atan2(u[1], u[0]);
    if (a < 0.0) a += 2.0 * M_PI;
    return a;
}

inline Vec unit_or_throw(const Vec& g, const char* what) {
    double n = norm(g);
    if (!(n > 1e-12)) throw MalformedInput(std::string(what) + ": zero generator");
    return scale(1.0 / n, g);
}

// Circular-gap classification of a 2D generator set.
enum class ConeKind { Ray, Sector, Line, Halfplane, Plane };

struct ConeShape {
    ConeKind kind;
    double start = 0.0;  // sector start angle
    double span = 0.0;   // sector interior angle
    int first = -1;      // local index of the start generator
    int last = -1;       // local index of the end generator
};

inline ConeShape classify_cone_2d(const std::vector<Vec>& gens) {
    const double atol = 1e-12;
    std::vector<std::pair<double, int>> ang;
    for (int i = 0; i < static_cast<int>(gens.size()); ++i) {
        double a = angle_of(gens[i]);
        bool dup = false;
        for (auto& [b, j] : ang)
            if (std::fabs(a - b) <= atol || std::fabs(std::fabs(a - b) - 2.0 * M_PI) <= atol) {
                dup = true;
                break;
            }
        if (!dup) ang.push_back({a, i});
    }
    std::sort(ang.begin(), ang.end());
    const int k = static_cast<int>(ang.size());
    if (k == 1) return ConeShape{ConeKind::Ray, ang[0].first, 0.0, ang[0].second, ang[0].second};
    // widest circular gap between consecutive generator angles
    double best_gap = -1.0;
    int gap_at = 0;
    for (int i = 0; i < k; ++i) {
        double next = (i + 1 < k) ? ang[i + 1].first : ang[0].first + 2.0 * M_PI;
        double g = next - ang[i].first;
        if (g > best_gap) {
            best_gap = g;
            gap_at = i;
        }
    }
    const double span = 2.0 * M_PI - best_gap;
    const int first = (gap_at + 1) % k;
    const int last = gap_at;
    if (best_gap > M_PI + atol)
        return ConeShape{ConeKind::Sector, ang[first].first, span, ang[first].second, ang[last].second};
    if (std::fabs(best_gap - M_PI) <= atol) {
        if (k == 2) return ConeShape{ConeKind::Line, ang[first].first, span, ang[first].second, ang[last].second};
        return ConeShape{ConeKind::Halfplane, ang[first].first, span, ang[first].second, ang[last].second};
    }
    return ConeShape{ConeKind::Plane, 0.0, 2.0 * M_PI, -1, -1};
}

}  // namespace detail

inline Cone make_cone_2d(const std::vector<Vec>& generators) {
    if (generators.empty()) throw MalformedInput("make_cone_2d: no generators");
    std::vector<Vec> gens;
    for (const Vec& g : generators) {
        if (g.size() != 2) throw DimensionMismatch("make_cone_2d: expects d=2");
        gens.push_back(detail::unit_or_throw(g, "make_cone_2d"));
    }
    auto shape = detail::classify_cone_2d(gens);
    if (shape.kind == detail::ConeKind::Ray) return Cone{{gens[shape.first]}};
    if (shape.kind != detail::ConeKind::Sector)
        throw InvalidFan("make_cone_2d: generators do not span a pointed cone");
    return Cone{{gens[shape.first], gens[shape.last]}};
}

inline bool cones_equal(const Cone& a, const Cone& b, double angtol = tol::angular) {
    if (a.generators.size() != b.generators.size()) return false;
    for (std::size_t i = 0; i < a.generators.size(); ++i)
        if (dist(a.generators[i], b.generators[i]) > angtol) return false;
    return true;
}

// Finite collection of cones given by generating rays and maximal-cone index
// sets; the face closure is implied. The flags follow the fan axioms for
// planar fans. Rays keep the scaling they were given with: the dependence
// coefficients of the offset system are stated relative to these vectors
// and are invariant only under uniform rescaling. Angular structure is
// computed on normalized copies.
struct Fan {
    std::vector<Vec> rays;                   // as given, pairwise distinct directions
    std::vector<Vec> unit_rays;              // normalized copies
    std::vector<std::vector<int>> maximal;   // index sets into rays
    bool complete = false;
    bool simplicial = false;
    bool essential = false;

    // per-maximal sector data (valid when the cone is a pointed sector)
    struct Sector {
        double start;
        double span;
        int first_ray;
        int last_ray;
        bool pointed;
    };
    std::vector<Sector> sectors;
};

inline Fan make_fan(std::vector<Vec> rays, std::vector<std::vector<int>> maximal) {
    if (rays.empty() || maximal.empty()) throw InvalidFan("make_fan: empty ray or cone list");
    Fan f;
    for (Vec& r : rays) {
        if (r.size() != 2) throw InvalidFan("make_fan: fans are planar (d=2) in this library");
        f.unit_rays.push_back(detail::unit_or_throw(r, "make_fan"));
    }
    for (std::size_t i = 0; i < rays.size(); ++i)
        for (std::size_t j = i + 1; j < rays.size(); ++j)
            if (dist(f.unit_rays[i], f.unit_rays[j]) <= 1e-10)
                throw InvalidFan("make_fan: duplicate ray directions in the ray list");
    f.rays = std::move(rays);

    const int l = static_cast<int>(f.rays.size());
    bool all_sectors = true;
    for (auto& idx : maximal) {
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        if (idx.empty()) throw InvalidFan("make_fan: empty maximal cone");
        for (int j : idx)
            if (j < 0 || j >= l) throw InvalidFan("make_fan: ray index out of range");
        std::vector<Vec> gens;
        for (int j : idx) gens.push_back(f.unit_rays[j]);
        auto shape = detail::classify_cone_2d(gens);
        Fan::Sector s{};
        s.pointed = shape.kind == detail::ConeKind::Sector || shape.kind == detail::ConeKind::Ray;
        if (shape.kind == detail::ConeKind::Sector) {
            s.start = shape.start;
            s.span = shape.span;
            s.first_ray = idx[shape.first];
            s.last_ray = idx[shape.last];
        } else if (shape.kind == detail::ConeKind::Ray) {
            s.start = detail::angle_of(f.rays[idx[shape.first]]);
            s.span = 0.0;
            s.first_ray = s.last_ray = idx[shape.first];
        } else {
            all_sectors = false;
            s.start = shape.start;
            s.span = shape.span;
            s.first_ray = s.last_ray = -1;
        }
        f.sectors.push_back(s);
        f.maximal.push_back(std::move(idx));
    }

    // Pairwise intersections must be common faces: for pointed sectors this
    // means arcs overlap at most in endpoints.
    const double atol = 1e-9;
    if (all_sectors) {
        const int m = static_cast<int>(f.maximal.size());
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                const auto& A = f.sectors[i];
                const auto& B = f.sectors[j];
                // circular interval overlap length
                double a0 = A.start, a1 = A.start + A.span;
                for (int shift = -1; shift <= 1; ++shift) {
                    double b0 = B.start + 2.0 * M_PI * shift;
                    double b1 = b0 + B.span;
                    double ov = std::min(a1, b1) - std::max(a0, b0);
                    if (ov > atol) throw InvalidFan("make_fan: maximal cones overlap");
                }
            }
        double total = 0.0;
        for (const auto& s : f.sectors) total += s.span;
        f.complete = std::fabs(total - 2.0 * M_PI) <= 1e-9;
    } else {
        f.complete = false;
    }

    f.simplicial = true;
    f.essential = true;
    for (std::size_t i = 0; i < f.maximal.size(); ++i) {
        const auto& s = f.sectors[i];
        if (!s.pointed) {
            f.simplicial = false;
            f.essential = false;
            continue;
        }
        if (f.maximal[i].size() != 2 || s.span <= 1e-12 || s.span >= M_PI - 1e-12)
            f.simplicial = false;
    }
    return f;
}

// Normal cone of a polygon at a vertex: generated by the outward normals of
// the two facets meeting there. Every direction strictly inside it is
// maximized over P at that vertex alone.
inline Cone normal_cone_at_vertex_2d(const Polytope& p, const Vec& v,
                                     double tol_ = tol::canonical) {
    if (p.dim() != 2) throw DimensionMismatch("normal_cone_at_vertex_2d: expects d=2");
    if (!p.is_full_dimensional_2d())
        throw DegeneratePolytope("normal_cone_at_vertex_2d: polytope is not full-dimensional");
    const auto& vs = p.vertices();
    int k = -1;
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (dist(vs[i], v) <= tol_) {
            k = static_cast<int>(i);
            break;
        }
    if (k < 0) throw MalformedInput("normal_cone_at_vertex_2d: point is not a vertex");
    Polytope h = v_to_h_2d(p);
    const int m = static_cast<int>(h.facets().size());
    const Vec& n_in = h.facets()[(k - 1 + m) % m].normal;
    const Vec& n_out = h.facets()[k].normal;
    return make_cone_2d({n_in, n_out});
}

// Normal fan of a full-dimensional polygon: rays are the facet normals in
// boundary order, maximal cones are the vertex normal cones. Complete by
// construction; completeness is re-checked on the sector angles.
inline Fan normal_fan_2d(const Polytope& p) {
    if (p.dim() != 2) throw DimensionMismatch("normal_fan_2d: expects d=2");
    if (!p.is_full_dimensional_2d())
        throw DegeneratePolytope("normal_fan_2d: polytope is not full-dimensional");
    Polytope h = v_to_h_2d(p);
    std::vector<Vec> rays;
    for (const Facet& f : h.facets()) rays.push_back(f.normal);
    const int m = static_cast<int>(rays.size());
    std::vector<std::vector<int>> maximal;
    for (int k = 0; k < m; ++k) maximal.push_back({(k - 1 + m) % m, k});
    Fan f = make_fan(std::move(rays), std::move(maximal));
    if (!f.complete) throw NumericalFailure("normal_fan_2d: sector angles do not close up", 0.0, 0.0);
    return f;
}

// Ray-wise matching of two fans up to angtol, then comparison of the maximal
// index sets under the induced permutation.
inline bool fans_equal(const Fan& a, const Fan& b, double angtol = tol::angular) {
    if (a.rays.size() != b.rays.size() || a.maximal.size() != b.maximal.size()) return false;
    const int l = static_cast<int>(a.rays.size());
    std::vector<int> match(l, -1);
    std::vector<bool> used(l, false);
    for (int i = 0; i < l; ++i) {
        for (int j = 0; j < l; ++j) {
            if (used[j]) continue;
            double ang = std::atan2(std::fabs(a.rays[i][0] * b.rays[j][1] - a.rays[i][1] * b.rays[j][0]),
                                    dot(a.rays[i], b.rays[j]));
            if (ang <= angtol) {
                match[i] = j;
                used[j] = true;
                break;
            }
        }
        if (match[i] < 0) return false;
    }
    auto canon = [](std::vector<std::vector<int>> sets) {
        for (auto& s : sets) std::sort(s.begin(), s.end());
        std::sort(sets.begin(), sets.end());
        return sets;
    };
    std::vector<std::vector<int>> mapped = a.maximal;
    for (auto& s : mapped)
        for (int& j : s) j = match[j];
    return canon(std::move(mapped)) == canon(b.maximal);
}

struct AdjacentPair {
    int c1;
    int c2;
    int shared_ray;
};

// Adjacent maximal cones of a complete planar fan: consecutive sectors,
// sharing exactly one ray each.
inline std::vector<AdjacentPair> adjacent_maximal_pairs(const Fan& f) {
    if (!f.complete) throw InvalidFan("adjacent_maximal_pairs: fan is not complete");
    const int m = static_cast<int>(f.maximal.size());
    if (m < 2) throw InvalidFan("adjacent_maximal_pairs: fan has a single maximal cone");
    for (const auto& s : f.sectors)
        if (!s.pointed || s.span <= 1e-12)
            throw InvalidFan("adjacent_maximal_pairs: maximal cone is not a pointed sector");
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return f.sectors[i].start < f.sectors[j].start; });
    std::vector<AdjacentPair> pairs;
    for (int k = 0; k < m; ++k) {
        int i = order[k];
        int j = order[(k + 1) % m];
        int shared = f.sectors[i].last_ray;
        if (shared != f.sectors[j].first_ray)
            throw InvalidFan("adjacent_maximal_pairs: sectors do not abut at a common ray");
        pairs.push_back(AdjacentPair{i, j, shared});
    }
    return pairs;
}

}  // namespace svset
