#pragma once

#include <array>

#include "svset/integrand.hpp"
#include "svset/typecone.hpp"

namespace svset {

// The right-triangle family {x : -x1 <= e1, -x2 <= e2, x1+x2 <= e3} with
// offsets e, admissible exactly when e1+e2+e3 > 0. Its normal fan is fixed;
// the three vertices are affine in the offsets.
inline Fan right_triangle_fan() {
    return make_fan({{-1, 0}, {0, -1}, {1, 1}}, {{0, 1}, {1, 2}, {0, 2}});
}

inline std::array<Vec, 3> right_triangle_vertices(double e1, double e2, double e3) {
    return {Vec{-e1, -e2}, Vec{e2 + e3, -e2}, Vec{-e1, e1 + e3}};
}

inline double hypotenuse_length(const std::array<Vec, 3>& v) { return dist(v[1], v[2]); }

// Per-time triangle slices driven by three offset series. Checks strict
// positivity of each series (the precondition that guarantees admissibility)
// and the admissibility sum itself at every step.
struct TriangleTrajectory {
    std::vector<double> times;
    std::vector<std::array<double, 3>> eta;     // per time
    std::vector<std::array<Vec, 3>> vertices;   // per time
};

inline TriangleTrajectory triangle_process(const std::vector<double>& times,
                                           const std::array<std::vector<double>, 3>& eta_series) {
    const std::size_t n = times.size();
    if (n == 0) throw MalformedInput("triangle_process: empty time grid");
    for (const auto& s : eta_series)
        if (s.size() != n) throw MalformedInput("triangle_process: series length mismatch");
    TriangleTrajectory out;
    out.times = times;
    out.eta.reserve(n);
    out.vertices.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        double e1 = eta_series[0][k], e2 = eta_series[1][k], e3 = eta_series[2][k];
        if (!(e1 > 0.0 && e2 > 0.0 && e3 > 0.0))
            throw AdmissibilityError("triangle_process: offset series not strictly positive",
                                     static_cast<int>(k));
        if (!(e1 + e2 + e3 > 0.0))
            throw AdmissibilityError("triangle_process: admissibility sum violated",
                                     static_cast<int>(k));
        out.eta.push_back({e1, e2, e3});
        out.vertices.push_back(right_triangle_vertices(e1, e2, e3));
    }
    return out;
}

// Triangle trajectory of one sample, with offsets given by the exponential
// martingales of the three driver components at the checkpoint steps.
inline TriangleTrajectory sample_triangle_trajectory(const PathEnsemble& paths, double alpha,
                                                     int sample,
                                                     const std::vector<int>& checkpoints) {
    if (paths.m() < 3) throw MalformedInput("sample_triangle_trajectory: needs a 3-component driver");
    std::array<std::vector<double>, 3> eta;
    for (int c = 0; c < 3; ++c) eta[c] = exponential_martingale(paths, alpha, c, sample, checkpoints);
    std::vector<double> times(checkpoints.size());
    for (std::size_t j = 0; j < checkpoints.size(); ++j) times[j] = checkpoints[j] * paths.dt();
    return triangle_process(times, eta);
}

// Exact discrete martingale representation of the terminal triangle vertices
// on the binary walk: the conditional expectation of e^{alpha B_T - alpha^2 T/2}
// given step k is pre(k) = e^{alpha B_k - alpha^2 T/2} cosh(alpha sqrt(dt))^{N-k},
// whose one-step difference is pre(k) tanh(alpha sqrt(dt)) dB_{k+1} / sqrt(dt).
// The returned family therefore satisfies J_t(x^i, z^i) = E[xi^i(T) | F_t]
// exactly, and J_T reproduces the time-T triangle slice.
inline std::vector<Integrand> triangle_walk_integrands(const PathEnsemble& paths, double alpha,
                                                       int sample) {
    if (paths.mode() != DriverMode::Walk)
        throw MalformedInput("triangle_walk_integrands: exact representation needs walk mode");
    if (paths.m() < 3) throw MalformedInput("triangle_walk_integrands: needs a 3-component driver");
    const int N = paths.steps();
    const double sdt = paths.sqrt_dt();
    const double T = paths.horizon();
    const double ch = std::cosh(alpha * sdt);
    const double gain = std::tanh(alpha * sdt) / sdt;

    std::vector<int> all(N + 1);
    for (int k = 0; k <= N; ++k) all[k] = k;
    std::vector<double> b;
    paths.values_at(sample, all, b);

    // predictable per-step gains for each offset component
    std::vector<std::array<double, 3>> pre(N);
    std::array<double, 3> pre0{};
    for (int c = 0; c < 3; ++c) {
        double logch = std::log(ch);
        for (int k = 0; k < N; ++k)
            pre[k][c] = std::exp(alpha * b[static_cast<std::size_t>(c) * (N + 1) + k] -
                                 0.5 * alpha * alpha * T + (N - k) * logch);
        pre0[c] = std::exp(-0.5 * alpha * alpha * T + N * logch);
    }

    // vertex maps: xi^1 = (-e1, -e2), xi^2 = (e2+e3, -e2), xi^3 = (-e1, e1+e3)
    const std::array<std::array<std::array<double, 3>, 2>, 3> A{{
        {{{-1, 0, 0}, {0, -1, 0}}},
        {{{0, 1, 1}, {0, -1, 0}}},
        {{{-1, 0, 0}, {1, 0, 1}}},
    }};

    std::vector<Integrand> family;
    for (int i = 0; i < 3; ++i) {
        Integrand ig;
        ig.x = Vec(2);
        for (int r = 0; r < 2; ++r) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += A[i][r][c] * pre0[c];
            ig.x[r] = s;
        }
        ig.z.reserve(N);
        for (int k = 0; k < N; ++k) {
            Mat zk(2, paths.m(), 0.0);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 3; ++c) zk(r, c) = A[i][r][c] * pre[k][c] * gain;
            ig.z.push_back(std::move(zk));
        }
        family.push_back(std::move(ig));
    }
    return family;
}

// Integrand family of the triangle vertices for either driver mode. Walk
// mode uses the exact binary representation above; Gaussian mode uses the
// left-point discretization of the continuous representation
// dM = alpha M dB of the exponential martingale.
inline std::vector<Integrand> triangle_integrands(const PathEnsemble& paths, double alpha,
                                                  int sample) {
    if (paths.mode() == DriverMode::Walk) return triangle_walk_integrands(paths, alpha, sample);
    if (paths.m() < 3) throw MalformedInput("triangle_integrands: needs a 3-component driver");
    const int N = paths.steps();
    std::vector<int> all(N + 1);
    for (int k = 0; k <= N; ++k) all[k] = k;
    std::vector<double> b;
    paths.values_at(sample, all, b);

    const std::array<std::array<std::array<double, 3>, 2>, 3> A{{
        {{{-1, 0, 0}, {0, -1, 0}}},
        {{{0, 1, 1}, {0, -1, 0}}},
        {{{-1, 0, 0}, {1, 0, 1}}},
    }};
    std::vector<Integrand> family;
    for (int i = 0; i < 3; ++i) {
        Integrand ig;
        ig.x = Vec(2);
        for (int r = 0; r < 2; ++r) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += A[i][r][c];
            ig.x[r] = s;
        }
        ig.z.reserve(N);
        for (int k = 0; k < N; ++k) {
            Mat zk(2, paths.m(), 0.0);
            for (int c = 0; c < 3; ++c) {
                double t = k * paths.dt();
                double eta = std::exp(alpha * b[static_cast<std::size_t>(c) * (N + 1) + k] -
                                      0.5 * alpha * alpha * t);
                for (int r = 0; r < 2; ++r) zk(r, c) = A[i][r][c] * alpha * eta;
            }
            ig.z.push_back(std::move(zk));
        }
        family.push_back(std::move(ig));
    }
    return family;
}

}  // namespace svset
