#pragma once

#include "svset/direction_grid.hpp"
#include "svset/polytope.hpp"

namespace svset {

// Support-function estimate of the Hausdorff distance over a finite
// direction family: sup |s(x*,P) - s(x*,Q)|. Bounds the true value from
// below; the shortfall is at most (||P|| + ||Q||) * resolution.
inline double hausdorff_support_estimate(const Polytope& p, const Polytope& q,
                                         const DirectionGrid& grid) {
    if (p.dim() != q.dim() || p.dim() != grid.dim())
        throw DimensionMismatch("hausdorff_support_estimate: dimension mismatch");
    double best = 0.0;
    for (const Vec& u : grid.directions())
        best = std::max(best, std::fabs(support_function(p, u) - support_function(q, u)));
    return best;
}

// Analytic slack of the direction-grid estimate: support differences are
// Lipschitz in the direction with constant ||P|| + ||Q||.
inline double hausdorff_grid_bound(const Polytope& p, const Polytope& q,
                                   const DirectionGrid& grid) {
    return (p.radius() + q.radius()) * grid.resolution_2d();
}

// Distance-function estimate sup_x |d(x,P) - d(x,Q)| over a finite point
// family; a lower bound on the Hausdorff distance for any choice of points.
inline double hausdorff_point_estimate(const Polytope& p, const Polytope& q,
                                       const std::vector<Vec>& points,
                                       double tol_ = tol::projection) {
    double best = 0.0;
    for (const Vec& x : points)
        best = std::max(best, std::fabs(distance_to_hull(x, p.vertices(), tol_) -
                                        distance_to_hull(x, q.vertices(), tol_)));
    return best;
}

// Regular nx-by-ny probe grid over the joint bounding box of two polygons,
// inflated by the given margin.
inline std::vector<Vec> probe_grid_2d(const Polytope& p, const Polytope& q, int nx, int ny,
                                      double margin = 0.5) {
    if (p.dim() != 2 || q.dim() != 2) throw DimensionMismatch("probe_grid_2d: expects d=2");
    double lo[2], hi[2];
    for (int c = 0; c < 2; ++c) {
        lo[c] = p.vertices()[0][c];
        hi[c] = p.vertices()[0][c];
    }
    for (const Polytope* poly : {&p, &q})
        for (const Vec& v : poly->vertices())
            for (int c = 0; c < 2; ++c) {
                lo[c] = std::min(lo[c], v[c]);
                hi[c] = std::max(hi[c], v[c]);
            }
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double fx = nx == 1 ? 0.5 : static_cast<double>(i) / (nx - 1);
            double fy = ny == 1 ? 0.5 : static_cast<double>(j) / (ny - 1);
            pts.push_back(Vec{lo[0] - margin + fx * (hi[0] - lo[0] + 2 * margin),
                              lo[1] - margin + fy * (hi[1] - lo[1] + 2 * margin)});
        }
    return pts;
}

}  // namespace svset
