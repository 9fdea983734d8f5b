#pragma once

#include <limits>

#include "svset/integrand.hpp"
#include "svset/parallel.hpp"
#include "svset/right_triangle.hpp"

namespace svset {

inline constexpr double kStatThreshold = 4.0;  // stderr multiples for pass/fail

// Discretized set-valued trajectory: per sample, per stored time, the point
// set whose hull is the slice.
struct PolytopeTrajectory {
    std::vector<double> times;
    std::vector<std::vector<std::vector<Vec>>> slices;  // [sample][time][point]
};

// Hausdorff distance between the hulls of two point sets; each one-sided
// deviation is attained at an input point.
inline double hausdorff_between_point_sets(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double h = 0.0;
    for (const Vec& p : a) h = std::max(h, distance_to_hull(p, b));
    for (const Vec& p : b) h = std::max(h, distance_to_hull(p, a));
    return h;
}

// Path-regularity diagnostics: per-sample maximum one-step Hausdorff
// increment and an empirical modulus table over dyadic lags. Diagnostics
// only; there is no pass/fail. The summability field is filled by callers
// that know the generating family.
struct RegularityReport {
    std::vector<double> sample_max_increment;
    double max_increment = 0.0;
    std::vector<double> lag_times;
    std::vector<double> lag_max;
    std::vector<double> lag_mean;
    double summability = std::numeric_limits<double>::quiet_NaN();
};

inline RegularityReport path_regularity_report(const PolytopeTrajectory& traj) {
    const std::size_t nt = traj.times.size();
    if (nt < 2) throw MalformedInput("path_regularity_report: need at least two time points");
    for (std::size_t j = 1; j < nt; ++j)
        if (!(traj.times[j] > traj.times[j - 1]))
            throw MalformedInput("path_regularity_report: time grid must be strictly increasing");
    RegularityReport rep;
    rep.sample_max_increment.reserve(traj.slices.size());
    for (const auto& path : traj.slices) {
        if (path.size() != nt)
            throw MalformedInput("path_regularity_report: slice count mismatch");
        double mx = 0.0;
        for (std::size_t j = 0; j + 1 < nt; ++j)
            mx = std::max(mx, hausdorff_between_point_sets(path[j], path[j + 1]));
        rep.sample_max_increment.push_back(mx);
        rep.max_increment = std::max(rep.max_increment, mx);
    }
    for (std::size_t lag = 1; lag < nt; lag *= 2) {
        double mx = 0.0, sum = 0.0;
        std::size_t count = 0;
        for (const auto& path : traj.slices)
            for (std::size_t j = 0; j + lag < nt; ++j) {
                double h = hausdorff_between_point_sets(path[j], path[j + lag]);
                mx = std::max(mx, h);
                sum += h;
                ++count;
            }
        rep.lag_times.push_back(traj.times[lag] - traj.times[0]);
        rep.lag_max.push_back(mx);
        rep.lag_mean.push_back(count ? sum / count : 0.0);
    }
    return rep;
}

// Summability statistic sum_i (|x^i|^2 + E-hat[integral |z^i|^2 dt]) of a
// family generator, estimated over the given sample indices.
template <class FamilyFn>
inline double summability_statistic(FamilyFn&& family_of, const std::vector<int>& sample_ids,
                                    int steps, double dt) {
    if (sample_ids.empty()) throw MalformedInput("summability_statistic: no samples");
    double total = 0.0;
    for (int s : sample_ids) {
        std::vector<Integrand> fam = family_of(s);
        double val = 0.0;
        for (const Integrand& ig : fam) {
            val += norm2(ig.x);
            double zint = 0.0;
            for (int k = 0; k < steps; ++k) zint += frobenius2(ig.z_at(k)) * dt;
            val += zint;
        }
        total += val;
    }
    return total / static_cast<double>(sample_ids.size());
}

// Per-direction comparison of the Monte Carlo estimate of E[max_i <u, xi^i>]
// against max_i <u, x^i>.
struct DirectionStat {
    double lhs = 0.0;     // MC estimate
    double rhs = 0.0;     // max over targets
    double se = 0.0;      // standard error of lhs
    double z = 0.0;
};

enum class SupremumVerdict { ConsistentMartingale, StrictSubmartingale, Anomalous };

struct SupremumReport {
    std::vector<DirectionStat> stats;
    SupremumVerdict verdict = SupremumVerdict::ConsistentMartingale;
    double max_z = 0.0;
    double min_z = 0.0;
    int worst_direction = -1;
};

// terminal_of(sample, out) fills out with the n terminal points of that
// sample. Reductions run over fixed-size chunks combined in chunk order, so
// the result is independent of the worker count.
template <class TerminalFn>
inline SupremumReport mc_supremum_test(TerminalFn&& terminal_of, int samples, int n, int d,
                                       const std::vector<Vec>& targets, const DirectionGrid& grid) {
    if (samples < 2) throw MalformedInput("mc_supremum_test: need at least two samples");
    if (static_cast<int>(targets.size()) != n)
        throw MalformedInput("mc_supremum_test: target count mismatch");
    const auto& dirs = grid.directions();
    const std::size_t G = dirs.size();
    const std::int64_t chunk = kDefaultChunk;
    const std::int64_t nchunks = (samples + chunk - 1) / chunk;
    std::vector<double> sum(static_cast<std::size_t>(nchunks) * G, 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(nchunks) * G, 0.0);

    parallel_chunks(samples, chunk, [&](std::int64_t ci, std::int64_t begin, std::int64_t end) {
        std::vector<Vec> pts(n, Vec(d, 0.0));
        double* s = &sum[static_cast<std::size_t>(ci) * G];
        double* s2 = &sumsq[static_cast<std::size_t>(ci) * G];
        for (std::int64_t smp = begin; smp < end; ++smp) {
            terminal_of(static_cast<int>(smp), pts);
            for (std::size_t g = 0; g < G; ++g) {
                double mx = dot(dirs[g], pts[0]);
                for (int i = 1; i < n; ++i) mx = std::max(mx, dot(dirs[g], pts[i]));
                s[g] += mx;
                s2[g] += mx * mx;
            }
        }
    });

    SupremumReport rep;
    rep.stats.resize(G);
    bool any_high = false, any_low = false;
    rep.min_z = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < G; ++g) {
        double s = 0.0, s2 = 0.0;
        for (std::int64_t ci = 0; ci < nchunks; ++ci) {
            s += sum[static_cast<std::size_t>(ci) * G + g];
            s2 += sumsq[static_cast<std::size_t>(ci) * G + g];
        }
        DirectionStat& st = rep.stats[g];
        const double nn = static_cast<double>(samples);
        st.lhs = s / nn;
        double var = std::max(0.0, (s2 - nn * st.lhs * st.lhs) / (nn - 1.0));
        st.se = std::sqrt(var / nn);
        double rhs = dot(dirs[g], targets[0]);
        for (int i = 1; i < n; ++i) rhs = std::max(rhs, dot(dirs[g], targets[i]));
        st.rhs = rhs;
        st.z = st.se > 0.0 ? (st.lhs - st.rhs) / st.se : 0.0;
        if (std::fabs(st.z) > std::fabs(rep.max_z)) {
            rep.max_z = st.z;
            rep.worst_direction = static_cast<int>(g);
        }
        rep.min_z = std::min(rep.min_z, st.z);
        if (st.z > kStatThreshold) any_high = true;
        if (st.z < -kStatThreshold) any_low = true;
    }
    rep.verdict = any_high ? SupremumVerdict::StrictSubmartingale
                           : (any_low ? SupremumVerdict::Anomalous
                                      : SupremumVerdict::ConsistentMartingale);
    return rep;
}

// Monotonicity check of t -> E[s(u, co-snapshot_t)] for a constant-z family:
// paired differences between consecutive checkpoints must not be negative
// beyond the stated stderr multiple, at any direction.
struct TrendReport {
    std::vector<double> diff_mean;  // (pair-major) [pair * dirs + g]
    std::vector<double> diff_se;
    int checkpoints = 0;
    double min_z = 0.0;
    int worst_direction = -1;
    int worst_pair = -1;
    bool nondecreasing = false;
};

inline TrendReport support_trend_test(const PathEnsemble& paths,
                                      const std::vector<Integrand>& family,
                                      const std::vector<int>& checkpoint_steps,
                                      const DirectionGrid& grid) {
    const int n = static_cast<int>(family.size());
    if (n < 1) throw MalformedInput("support_trend_test: empty family");
    for (const Integrand& ig : family) {
        check_integrand(ig, paths.steps(), paths.m());
        if (ig.z.size() != 1)
            throw MalformedInput("support_trend_test: family must have constant z");
    }
    const std::size_t C = checkpoint_steps.size();
    if (C < 2) throw MalformedInput("support_trend_test: need at least two checkpoints");
    const auto& dirs = grid.directions();
    const std::size_t G = dirs.size();
    const std::size_t P = C - 1;
    const std::int64_t chunk = kDefaultChunk;
    const std::int64_t nchunks = (paths.samples() + chunk - 1) / chunk;
    std::vector<double> dsum(static_cast<std::size_t>(nchunks) * G * P, 0.0);
    std::vector<double> dsumsq(static_cast<std::size_t>(nchunks) * G * P, 0.0);

    parallel_chunks(paths.samples(), chunk, [&](std::int64_t ci, std::int64_t begin, std::int64_t end) {
        std::vector<double> b;
        std::vector<double> sup(G * C);
        double* ds = &dsum[static_cast<std::size_t>(ci) * G * P];
        double* ds2 = &dsumsq[static_cast<std::size_t>(ci) * G * P];
        const int d = family[0].dim();
        Vec y(d);
        for (std::int64_t smp = begin; smp < end; ++smp) {
            paths.values_at(static_cast<int>(smp), checkpoint_steps, b);
            for (std::size_t j = 0; j < C; ++j)
                for (std::size_t g = 0; g < G; ++g) sup[g * C + j] = -1e300;
            for (int i = 0; i < n; ++i) {
                const Mat& z = family[i].z[0];
                for (std::size_t j = 0; j < C; ++j) {
                    for (int r = 0; r < d; ++r) {
                        double s = family[i].x[r];
                        for (int c = 0; c < paths.m(); ++c)
                            s += z(r, c) * b[static_cast<std::size_t>(c) * C + j];
                        y[r] = s;
                    }
                    for (std::size_t g = 0; g < G; ++g) {
                        double v = dot(dirs[g], y);
                        if (v > sup[g * C + j]) sup[g * C + j] = v;
                    }
                }
            }
            for (std::size_t g = 0; g < G; ++g)
                for (std::size_t p = 0; p < P; ++p) {
                    double diff = sup[g * C + p + 1] - sup[g * C + p];
                    ds[p * G + g] += diff;
                    ds2[p * G + g] += diff * diff;
                }
        }
    });

    TrendReport rep;
    rep.checkpoints = static_cast<int>(C);
    rep.diff_mean.assign(G * P, 0.0);
    rep.diff_se.assign(G * P, 0.0);
    rep.min_z = std::numeric_limits<double>::infinity();
    const double nn = static_cast<double>(paths.samples());
    for (std::size_t p = 0; p < P; ++p)
        for (std::size_t g = 0; g < G; ++g) {
            double s = 0.0, s2 = 0.0;
            for (std::int64_t ci = 0; ci < nchunks; ++ci) {
                s += dsum[static_cast<std::size_t>(ci) * G * P + p * G + g];
                s2 += dsumsq[static_cast<std::size_t>(ci) * G * P + p * G + g];
            }
            double mean = s / nn;
            double var = std::max(0.0, (s2 - nn * mean * mean) / (nn - 1.0));
            double se = std::sqrt(var / nn);
            rep.diff_mean[p * G + g] = mean;
            rep.diff_se[p * G + g] = se;
            double z = se > 0.0 ? mean / se : (mean >= 0.0 ? 0.0 : -1e300);
            if (z < rep.min_z) {
                rep.min_z = z;
                rep.worst_direction = static_cast<int>(g);
                rep.worst_pair = static_cast<int>(p);
            }
        }
    rep.nondecreasing = rep.min_z >= -kStatThreshold;
    return rep;
}

}  // namespace svset
