#pragma once

#include <algorithm>
#include <limits>

#include "svset/common.hpp"

namespace svset {

struct ProjectionResult {
    double distance = 0.0;  // certified within the requested tolerance
    Vec point;              // nearest point in the hull
    std::vector<double> weights;  // convex weights over the input points (sparse support)
    std::vector<int> support;     // indices carrying the weights
    int iterations = 0;
};

namespace detail {

// Affine minimization step of Wolfe's method: minimize ||sum mu_i w_i||^2
// subject to sum mu_i = 1 over the points indexed by S. Solves the KKT
// system through the Gram matrix. Returns false when the system is singular.
inline bool affine_minimizer(const std::vector<Vec>& w, const std::vector<int>& S,
                             std::vector<double>& mu) {
    const int k = static_cast<int>(S.size());
    const int n = k + 1;
    std::vector<double> A(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> b(n, 0.0);
    // [0 1^T; 1 G] [nu; mu] = [1; 0]
    b[0] = 1.0;
    for (int i = 0; i < k; ++i) {
        A[static_cast<std::size_t>(0) * n + (i + 1)] = 1.0;
        A[static_cast<std::size_t>(i + 1) * n + 0] = 1.0;
        for (int j = 0; j < k; ++j)
            A[static_cast<std::size_t>(i + 1) * n + (j + 1)] = dot(w[S[i]], w[S[j]]);
    }
    // Scale-aware pivot threshold: Gram entries grow with ||w||^2.
    double scale = 1.0;
    for (int i = 0; i < k; ++i) scale = std::max(scale, norm2(w[S[i]]));
    if (!solve_dense(A, b, n, tol::pivot * scale)) return false;
    mu.assign(b.begin() + 1, b.end());
    return true;
}

}  // namespace detail

// Nearest point in co{points} to x, by Wolfe's nearest-point algorithm over
// the vertex set. The returned distance q satisfies |q - d(x, co{points})| <= tol,
// certified by the duality gap ||p||^2 - min_i <p, w_i>. Throws
// NumericalFailure with the best bracket after 10*n^2 iterations.
inline ProjectionResult project_to_hull(const Vec& x, const std::vector<Vec>& points,
                                        double tol_ = tol::projection) {
    if (points.empty()) throw MalformedInput("project_to_hull: empty point set");
    if (tol_ <= 0.0) throw MalformedInput("project_to_hull: tol must be positive");
    const int n = static_cast<int>(points.size());
    const std::size_t d = x.size();

    std::vector<Vec> w(n);
    for (int i = 0; i < n; ++i) {
        if (points[i].size() != d) throw DimensionMismatch("project_to_hull: point dimension mismatch");
        w[i] = sub(points[i], x);
    }

    // Start from the closest input point.
    int start = 0;
    double best0 = norm2(w[0]);
    for (int i = 1; i < n; ++i) {
        double v = norm2(w[i]);
        if (v < best0) {
            best0 = v;
            start = i;
        }
    }

    std::vector<int> S{start};
    std::vector<double> lam{1.0};
    Vec q = w[start];

    const int max_iters = std::max(16, 10 * n * n);
    double best_upper = norm(q);
    double best_lower = 0.0;

    auto finish = [&](int iters) {
        ProjectionResult r;
        r.distance = norm(q);
        r.point = add(q, x);
        r.weights = lam;
        r.support = S;
        r.iterations = iters;
        return r;
    };

    for (int iter = 0; iter < max_iters; ++iter) {
        const double qq = norm2(q);
        const double qn = std::sqrt(qq);
        // Most negative correlation identifies the improving vertex.
        int jstar = 0;
        double mindot = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            double v = dot(q, w[j]);
            if (v < mindot) {
                mindot = v;
                jstar = j;
            }
        }
        const double gap = qq - mindot;
        best_upper = std::min(best_upper, qn);
        if (qn > 0.0) best_lower = std::max(best_lower, std::max(0.0, mindot / qn));

        if (qq <= tol_ * tol_ || gap <= tol_ * qn) return finish(iter);
        // Floating-point floor: the gap cannot be resolved below roundoff of
        // the Gram entries.
        double wmax = 0.0;
        for (const Vec& wi : w) wmax = std::max(wmax, norm2(wi));
        if (gap <= 64.0 * std::numeric_limits<double>::epsilon() * wmax) return finish(iter);

        if (std::find(S.begin(), S.end(), jstar) == S.end()) {
            S.push_back(jstar);
            lam.push_back(0.0);
        }

        // Minor cycle: move to the affine minimizer, trimming points whose
        // weight would turn nonpositive.
        bool ok = true;
        for (std::size_t guard = 0; guard <= S.size() + 1; ++guard) {
            std::vector<double> mu;
            if (!detail::affine_minimizer(w, S, mu)) {
                // Affinely dependent support; drop the smallest-weight member.
                if (S.size() <= 1) {
                    ok = false;
                    break;
                }
                std::size_t drop = 0;
                for (std::size_t i = 1; i < lam.size(); ++i)
                    if (lam[i] < lam[drop]) drop = i;
                S.erase(S.begin() + static_cast<std::ptrdiff_t>(drop));
                lam.erase(lam.begin() + static_cast<std::ptrdiff_t>(drop));
                double tot = 0.0;
                for (double l : lam) tot += l;
                if (tot <= 0.0) {
                    lam.assign(lam.size(), 1.0 / static_cast<double>(lam.size()));
                } else {
                    for (double& l : lam) l /= tot;
                }
                continue;
            }
            const double wtol = 1e-12;
            bool interior = true;
            for (double m : mu)
                if (m <= wtol) {
                    interior = false;
                    break;
                }
            if (interior) {
                lam = mu;
                break;
            }
            double theta = 1.0;
            for (std::size_t i = 0; i < mu.size(); ++i) {
                if (mu[i] <= wtol) {
                    double denom = lam[i] - mu[i];
                    if (denom > 0.0) theta = std::min(theta, lam[i] / denom);
                }
            }
            for (std::size_t i = 0; i < mu.size(); ++i)
                lam[i] = (1.0 - theta) * lam[i] + theta * mu[i];
            // Remove zeroed members (keep at least one).
            for (std::size_t i = lam.size(); i-- > 0 && lam.size() > 1;) {
                if (lam[i] <= wtol) {
                    lam.erase(lam.begin() + static_cast<std::ptrdiff_t>(i));
                    S.erase(S.begin() + static_cast<std::ptrdiff_t>(i));
                }
            }
            double tot = 0.0;
            for (double l : lam) tot += l;
            for (double& l : lam) l /= tot;
        }
        if (!ok) return finish(iter);

        q.assign(d, 0.0);
        for (std::size_t i = 0; i < S.size(); ++i)
            for (std::size_t c = 0; c < d; ++c) q[c] += lam[i] * w[S[i]][c];
    }

    throw NumericalFailure("project_to_hull: no convergence within 10*n^2 iterations",
                           best_lower, best_upper);
}

inline double distance_to_hull(const Vec& x, const std::vector<Vec>& points,
                               double tol_ = tol::projection) {
    return project_to_hull(x, points, tol_).distance;
}

}  // namespace svset
