#pragma once

#include "svset/brownian.hpp"
#include "svset/polytope.hpp"

namespace svset {

// One realized integrand pair: an initial point x and a piecewise-constant
// d x m matrix process on the step grid. z holds either one matrix
// (constant) or one per step.
struct Integrand {
    Vec x;
    std::vector<Mat> z;

    int dim() const { return static_cast<int>(x.size()); }

    const Mat& z_at(int step) const {
        if (z.size() == 1) return z[0];
        return z.at(static_cast<std::size_t>(step));
    }
};

inline void check_integrand(const Integrand& ig, int steps, int m) {
    check_vector(ig.x, "Integrand x");
    if (ig.z.size() != 1 && ig.z.size() != static_cast<std::size_t>(steps))
        throw MalformedInput("Integrand: z must be constant or one matrix per step");
    for (const Mat& zk : ig.z) {
        if (zk.rows != ig.dim() || zk.cols != m)
            throw DimensionMismatch("Integrand: z must be d x m");
        for (double v : zk.a)
            if (!std::isfinite(v)) throw MalformedInput("Integrand: non-finite z entry");
    }
}

// Left-point stochastic sum x + sum_{k < j} z_k dB_k evaluated at the given
// step checkpoints. increments is the row-major steps x m array of the
// driving path.
inline std::vector<Vec> trajectory_values(const Integrand& ig, const std::vector<double>& increments,
                                          int steps, int m, const std::vector<int>& checkpoints) {
    check_integrand(ig, steps, m);
    if (increments.size() != static_cast<std::size_t>(steps) * m)
        throw MalformedInput("trajectory_values: increment grid mismatch");
    const int d = ig.dim();
    std::vector<Vec> out;
    out.reserve(checkpoints.size());
    Vec y = ig.x;
    int k = 0;
    for (int cp : checkpoints) {
        if (cp < 0 || cp > steps) throw MalformedInput("trajectory_values: checkpoint out of range");
        for (; k < cp; ++k) {
            const Mat& zk = ig.z_at(k);
            for (int r = 0; r < d; ++r) {
                double s = 0.0;
                for (int c = 0; c < m; ++c)
                    s += zk(r, c) * increments[static_cast<std::size_t>(k) * m + c];
                y[r] += s;
            }
        }
        out.push_back(y);
    }
    return out;
}

inline std::vector<Vec> trajectory_series(const Integrand& ig, const std::vector<double>& increments,
                                          int steps, int m) {
    std::vector<int> all(steps + 1);
    for (int k = 0; k <= steps; ++k) all[k] = k;
    return trajectory_values(ig, increments, steps, m, all);
}

// Point family {J_t(x^i, z^i)} of a finite integrand list on one path at one
// step; convex hull when requested.
inline std::vector<Vec> snapshot_points(const std::vector<Integrand>& family,
                                        const std::vector<double>& increments, int steps, int m,
                                        int step) {
    if (family.empty()) throw MalformedInput("snapshot_points: empty integrand family");
    std::vector<Vec> pts;
    pts.reserve(family.size());
    for (const Integrand& ig : family)
        pts.push_back(trajectory_values(ig, increments, steps, m, {step})[0]);
    return pts;
}

inline Polytope finite_integral_snapshot(const std::vector<Integrand>& family,
                                         const std::vector<double>& increments, int steps, int m,
                                         int step, bool convexify = true) {
    std::vector<Vec> pts = snapshot_points(family, increments, steps, m, step);
    (void)convexify;  // the polytope value is canonical either way; the raw
                      // point set is available through snapshot_points
    return Polytope(pts);
}

}  // namespace svset
