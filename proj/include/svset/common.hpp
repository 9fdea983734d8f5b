#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace svset {

// d-dimensional point or direction. Dimension is dynamic; all operations
// below require matching sizes.
using Vec = std::vector<double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedInput : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct DegeneratePolytope : Error {
    using Error::Error;
};

struct InvalidFan : Error {
    using Error::Error;
};

struct AdmissibilityError : Error {
    int time_index;
    AdmissibilityError(const std::string& msg, int t) : Error(msg), time_index(t) {}
};

struct GuardExceeded : Error {
    using Error::Error;
};

// Thrown when an iterative solver stalls; carries the certified bracket on
// the quantity it was computing.
struct NumericalFailure : Error {
    double lower_bound;
    double upper_bound;
    NumericalFailure(const std::string& msg, double lo, double hi)
        : Error(msg), lower_bound(lo), upper_bound(hi) {}
};

namespace tol {
inline constexpr double canonical = 1e-9;       // vertex dedup / collinearity
inline constexpr double projection = 1e-10;     // nearest-point default
inline constexpr double angular = 1e-8;         // ray matching (radians)
inline constexpr double alpha_residual = 1e-10; // linear-dependence rows
inline constexpr double pivot = 1e-12;          // elimination pivots
inline constexpr double weight_sum = 1e-12;     // probability / weight sums
inline constexpr double gap_verdict = 1e-7;     // martingale vs submartingale
}  // namespace tol

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("add: size mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("sub: size mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scale(double c, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline double dist(const Vec& a, const Vec& b) { return norm(sub(a, b)); }

inline bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

inline void check_vector(const Vec& a, const char* what) {
    if (a.empty()) throw MalformedInput(std::string(what) + ": empty vector");
    if (!all_finite(a)) throw MalformedInput(std::string(what) + ": non-finite coordinate");
}

// Lexicographic comparison with an absolute tolerance per coordinate.
inline bool lex_less(const Vec& a, const Vec& b, double eps = 0.0) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i] - eps) return true;
        if (a[i] > b[i] + eps) return false;
    }
    return a.size() < b.size();
}

// Dense row-major matrix, sized for integrands (d x m) and small solves.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}

    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

inline Vec matvec(const Mat& m, const Vec& v) {
    if (static_cast<int>(v.size()) != m.cols) throw DimensionMismatch("matvec: size mismatch");
    Vec r(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline double frobenius2(const Mat& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return s;
}

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// Returns false if a pivot falls below ptol (singular system).
inline bool solve_dense(std::vector<double>& A, std::vector<double>& b, int n, double ptol = tol::pivot) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::fabs(A[static_cast<std::size_t>(col) * n + col]);
        for (int r = col + 1; r < n; ++r) {
            double v = std::fabs(A[static_cast<std::size_t>(r) * n + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= ptol) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(A[static_cast<std::size_t>(piv) * n + c], A[static_cast<std::size_t>(col) * n + c]);
            std::swap(b[piv], b[col]);
        }
        double d = A[static_cast<std::size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            double f = A[static_cast<std::size_t>(r) * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                A[static_cast<std::size_t>(r) * n + c] -= f * A[static_cast<std::size_t>(col) * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        double s = b[col];
        for (int c = col + 1; c < n; ++c) s -= A[static_cast<std::size_t>(col) * n + c] * b[c];
        b[col] = s / A[static_cast<std::size_t>(col) * n + col];
    }
    return true;
}

}  // namespace svset
