#pragma once

#include <bit>

#include "svset/common.hpp"
#include "svset/rng.hpp"

namespace svset {

enum class DriverMode { Walk, Gauss };

struct DriverConfig {
    int m = 3;
    int steps = 10000;
    double horizon = 1.0;
    DriverMode mode = DriverMode::Walk;
    std::uint64_t seed = 1;
    int samples = 100000;
    // optional correlation of the Gaussian increments (row-major m x m,
    // symmetric positive definite); identity when empty
    std::vector<double> corr;
};

// Seeded ensemble of discretized Brownian drivers. Paths are never stored:
// every accessor regenerates from the (seed, component, sample) substream, so
// any subset of samples reproduces identically and the memory footprint is
// flat. Walk mode keeps integer up-counts so a path value is a single
// rounding of (2*ups - k) * sqrt(dt); Gauss mode accumulates increments in
// step order.
class PathEnsemble {
  public:
    explicit PathEnsemble(DriverConfig cfg) : cfg_(cfg) {
        if (cfg_.m < 1 || cfg_.steps < 1 || cfg_.samples < 1 || !(cfg_.horizon > 0.0))
            throw MalformedInput("PathEnsemble: m, steps, samples must be >= 1 and T > 0");
        dt_ = cfg_.horizon / cfg_.steps;
        sqrt_dt_ = std::sqrt(dt_);
        if (!cfg_.corr.empty()) {
            if (cfg_.mode != DriverMode::Gauss)
                throw MalformedInput("PathEnsemble: correlated increments need Gaussian mode");
            if (cfg_.corr.size() != static_cast<std::size_t>(cfg_.m) * cfg_.m)
                throw MalformedInput("PathEnsemble: correlation matrix must be m x m");
            chol_ = cholesky(cfg_.corr, cfg_.m);
        }
    }

    const DriverConfig& config() const { return cfg_; }
    int m() const { return cfg_.m; }
    int steps() const { return cfg_.steps; }
    int samples() const { return cfg_.samples; }
    double horizon() const { return cfg_.horizon; }
    double dt() const { return dt_; }
    double sqrt_dt() const { return sqrt_dt_; }
    DriverMode mode() const { return cfg_.mode; }

    // Path values B at the given sorted step indices (entries in [0, steps]),
    // for every component: out[c * checkpoints.size() + j].
    void values_at(int sample, const std::vector<int>& checkpoints,
                   std::vector<double>& out) const {
        check_sample(sample);
        for (std::size_t j = 0; j < checkpoints.size(); ++j) {
            if (checkpoints[j] < 0 || checkpoints[j] > cfg_.steps)
                throw MalformedInput("PathEnsemble: checkpoint out of range");
            if (j > 0 && checkpoints[j] <= checkpoints[j - 1])
                throw MalformedInput("PathEnsemble: checkpoints must be strictly increasing");
        }
        out.assign(static_cast<std::size_t>(cfg_.m) * checkpoints.size(), 0.0);
        if (cfg_.mode == DriverMode::Walk) {
            for (int c = 0; c < cfg_.m; ++c) walk_values(sample, c, checkpoints,
                                                         &out[static_cast<std::size_t>(c) * checkpoints.size()]);
        } else {
            gauss_values(sample, checkpoints, out);
        }
    }

    Vec terminal(int sample) const {
        std::vector<double> out;
        values_at(sample, {cfg_.steps}, out);
        Vec b(cfg_.m);
        for (int c = 0; c < cfg_.m; ++c) b[c] = out[c];
        return b;
    }

    // Increment matrix, row-major steps x m.
    void increments(int sample, std::vector<double>& out) const {
        check_sample(sample);
        out.assign(static_cast<std::size_t>(cfg_.steps) * cfg_.m, 0.0);
        if (cfg_.mode == DriverMode::Walk) {
            for (int c = 0; c < cfg_.m; ++c) {
                Substream ss(cfg_.seed, static_cast<std::uint32_t>(c),
                             static_cast<std::uint32_t>(sample));
                std::uint64_t w = 0;
                for (int k = 0; k < cfg_.steps; ++k) {
                    if (k % 64 == 0) w = ss.next_u64();
                    bool up = (w >> (k % 64)) & 1u;
                    out[static_cast<std::size_t>(k) * cfg_.m + c] = up ? sqrt_dt_ : -sqrt_dt_;
                }
            }
        } else {
            std::vector<Substream> ss = gauss_streams(sample);
            std::vector<double> g(cfg_.m);
            for (int k = 0; k < cfg_.steps; ++k) {
                for (int c = 0; c < cfg_.m; ++c) g[c] = ss[c].next_normal();
                mix(g, &out[static_cast<std::size_t>(k) * cfg_.m]);
            }
        }
    }

  private:
    void check_sample(int sample) const {
        if (sample < 0 || sample >= cfg_.samples)
            throw MalformedInput("PathEnsemble: sample index out of range");
    }

    static std::vector<double> cholesky(const std::vector<double>& a, int n) {
        std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                double s = a[static_cast<std::size_t>(i) * n + j];
                for (int k = 0; k < j; ++k)
                    s -= L[static_cast<std::size_t>(i) * n + k] * L[static_cast<std::size_t>(j) * n + k];
                if (i == j) {
                    if (!(s > 0.0))
                        throw MalformedInput("PathEnsemble: correlation matrix is not positive definite");
                    L[static_cast<std::size_t>(i) * n + j] = std::sqrt(s);
                } else {
                    L[static_cast<std::size_t>(i) * n + j] = s / L[static_cast<std::size_t>(j) * n + j];
                }
            }
        }
        return L;
    }

    void mix(const std::vector<double>& g, double* out) const {
        if (chol_.empty()) {
            for (int c = 0; c < cfg_.m; ++c) out[c] = sqrt_dt_ * g[c];
            return;
        }
        for (int i = 0; i < cfg_.m; ++i) {
            double s = 0.0;
            for (int j = 0; j <= i; ++j) s += chol_[static_cast<std::size_t>(i) * cfg_.m + j] * g[j];
            out[i] = sqrt_dt_ * s;
        }
    }

    std::vector<Substream> gauss_streams(int sample) const {
        std::vector<Substream> ss;
        ss.reserve(cfg_.m);
        for (int c = 0; c < cfg_.m; ++c)
            ss.emplace_back(cfg_.seed, static_cast<std::uint32_t>(c),
                            static_cast<std::uint32_t>(sample));
        return ss;
    }

    void walk_values(int sample, int comp, const std::vector<int>& checkpoints,
                     double* out) const {
        Substream ss(cfg_.seed, static_cast<std::uint32_t>(comp),
                     static_cast<std::uint32_t>(sample));
        std::size_t cp = 0;
        long long ups = 0;
        int k = 0;
        while (cp < checkpoints.size() && checkpoints[cp] == 0) {
            out[cp] = 0.0;
            ++cp;
        }
        const int last = checkpoints.empty() ? 0 : checkpoints.back();
        while (k < last) {
            std::uint64_t w = ss.next_u64();
            int avail = std::min(64, last - k);
            while (cp < checkpoints.size() && checkpoints[cp] <= k + avail) {
                int need = checkpoints[cp] - k;
                std::uint64_t mask = need >= 64 ? ~0ull : ((1ull << need) - 1ull);
                ups += std::popcount(w & mask);
                w = need >= 64 ? 0 : (w >> need);
                k += need;
                avail -= need;
                out[cp] = static_cast<double>(2 * ups - k) * sqrt_dt_;
                ++cp;
            }
            if (avail > 0) {
                std::uint64_t mask = avail >= 64 ? ~0ull : ((1ull << avail) - 1ull);
                ups += std::popcount(w & mask);
                k += avail;
            }
        }
    }

    void gauss_values(int sample, const std::vector<int>& checkpoints,
                      std::vector<double>& out) const {
        std::vector<Substream> ss = gauss_streams(sample);
        std::vector<double> b(cfg_.m, 0.0), g(cfg_.m), db(cfg_.m);
        std::size_t cp = 0;
        while (cp < checkpoints.size() && checkpoints[cp] == 0) {
            for (int c = 0; c < cfg_.m; ++c) out[static_cast<std::size_t>(c) * checkpoints.size() + cp] = 0.0;
            ++cp;
        }
        const int last = checkpoints.empty() ? 0 : checkpoints.back();
        for (int k = 0; k < last; ++k) {
            for (int c = 0; c < cfg_.m; ++c) g[c] = ss[c].next_normal();
            mix(g, db.data());
            for (int c = 0; c < cfg_.m; ++c) b[c] += db[c];
            while (cp < checkpoints.size() && checkpoints[cp] == k + 1) {
                for (int c = 0; c < cfg_.m; ++c)
                    out[static_cast<std::size_t>(c) * checkpoints.size() + cp] = b[c];
                ++cp;
            }
        }
    }

    DriverConfig cfg_;
    double dt_ = 0.0;
    double sqrt_dt_ = 0.0;
    std::vector<double> chol_;
};

// Exponential martingale of one driver component along given checkpoints:
// e^{alpha * B_t - alpha^2 t / 2}, equal to 1 at t = 0.
inline std::vector<double> exponential_martingale(const PathEnsemble& paths, double alpha,
                                                  int component, int sample,
                                                  const std::vector<int>& checkpoints) {
    if (component < 0 || component >= paths.m())
        throw MalformedInput("exponential_martingale: component out of range");
    std::vector<double> b;
    paths.values_at(sample, checkpoints, b);
    std::vector<double> out(checkpoints.size());
    for (std::size_t j = 0; j < checkpoints.size(); ++j) {
        double t = checkpoints[j] * paths.dt();
        out[j] = std::exp(alpha * b[static_cast<std::size_t>(component) * checkpoints.size() + j] -
                          0.5 * alpha * alpha * t);
    }
    return out;
}

}  // namespace svset
