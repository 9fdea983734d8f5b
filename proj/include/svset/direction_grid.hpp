#pragma once

#include <cmath>

#include "svset/common.hpp"

namespace svset {

namespace detail {

// Acklam's rational approximation to the standard normal quantile,
// relative error below 1.2e-9, ample for direction sampling.
inline double inverse_normal_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p <= 0.0 || p >= 1.0) throw MalformedInput("inverse_normal_cdf: p must be in (0,1)");
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Finite symmetric family of unit directions standing in for a dense set of
// test directions. d=2: equally spaced angles. d>=3: a Kronecker
// low-discrepancy sequence pushed through the normal quantile and
// normalized. Half the directions are generated, the other half are exact
// negations, so the grid is symmetric under negation and excludes 0.
class DirectionGrid {
  public:
    DirectionGrid(int dim, int count) : dim_(dim), count_(count) {
        if (dim < 1) throw MalformedInput("DirectionGrid: dimension must be >= 1");
        if (count < 2 || count % 2 != 0)
            throw MalformedInput("DirectionGrid: count must be even and >= 2");
        dirs_.reserve(count);
        const int half = count / 2;
        if (dim == 1) {
            if (half != 1) throw MalformedInput("DirectionGrid: d=1 admits exactly 2 directions");
            dirs_.push_back(Vec{1.0});
        } else if (dim == 2) {
            for (int j = 0; j < half; ++j) {
                double th = M_PI * static_cast<double>(j) / half;
                dirs_.push_back(Vec{std::cos(th), std::sin(th)});
            }
        } else {
            // generalized golden-ratio (R_d) sequence
            double phi = 2.0;
            for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
            std::vector<double> alpha(dim);
            double ap = 1.0;
            for (int c = 0; c < dim; ++c) {
                ap /= phi;
                alpha[c] = ap;
            }
            std::vector<double> u(dim, 0.5);
            int made = 0;
            while (made < half) {
                for (int c = 0; c < dim; ++c) {
                    u[c] += alpha[c];
                    u[c] -= std::floor(u[c]);
                }
                Vec g(dim);
                for (int c = 0; c < dim; ++c)
                    g[c] = detail::inverse_normal_cdf(std::min(std::max(u[c], 1e-12), 1.0 - 1e-12));
                double n = norm(g);
                if (n < 1e-6) continue;
                for (double& v : g) v /= n;
                dirs_.push_back(std::move(g));
                ++made;
            }
        }
        for (int j = 0; j < half; ++j) {
            Vec neg(dim_);
            for (int c = 0; c < dim_; ++c) neg[c] = -dirs_[j][c];
            dirs_.push_back(std::move(neg));
        }
    }

    static DirectionGrid circle(int k = 720) { return DirectionGrid(2, k); }

    int dim() const { return dim_; }
    int count() const { return count_; }
    const std::vector<Vec>& directions() const { return dirs_; }

    // Largest chord distance from any unit vector to the grid (d=2).
    double resolution_2d() const {
        if (dim_ != 2) throw DimensionMismatch("resolution_2d: grid is not planar");
        return 2.0 * std::sin(M_PI / (2.0 * count_));
    }

  private:
    int dim_;
    int count_;
    std::vector<Vec> dirs_;
};

}  // namespace svset
