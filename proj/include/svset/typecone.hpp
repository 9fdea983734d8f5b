#pragma once

#include "svset/direction_grid.hpp"
#include "svset/fan.hpp"

namespace svset {

// One linear-dependence row of the offset-space inequality system: the
// unique coefficients with sum_{j} alpha(j) x^{*,j} = 0 over the rays of an
// adjacent maximal pair, normalized by alpha(j1) + alpha(j2) = 2 on the two
// non-shared rays.
struct AlphaRow {
    std::vector<double> alpha;  // length = ray count, zero off the pair's rays
    int c1 = -1;
    int c2 = -1;
    int j1 = -1;  // ray exclusive to c1
    int j2 = -1;  // ray exclusive to c2
};

struct TypeCone {
    std::vector<AlphaRow> rows;  // one per adjacent maximal pair
};

namespace detail {

// Kernel vector of a d x (d+1) matrix with full row rank, by elimination
// with partial pivoting. Returns false when the rank drops (pivot below
// ptol), i.e. the generating set is not simplicial.
inline bool kernel_of(std::vector<double> A, int d, std::vector<double>& beta,
                      double ptol = tol::pivot) {
    const int u = d + 1;
    std::vector<int> pivot_col(d, -1);
    int row = 0;
    for (int col = 0; col < u && row < d; ++col) {
        int piv = row;
        double best = std::fabs(A[static_cast<std::size_t>(row) * u + col]);
        for (int r = row + 1; r < d; ++r) {
            double v = std::fabs(A[static_cast<std::size_t>(r) * u + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= ptol) continue;
        if (piv != row)
            for (int c = 0; c < u; ++c)
                std::swap(A[static_cast<std::size_t>(piv) * u + c],
                          A[static_cast<std::size_t>(row) * u + c]);
        for (int r = 0; r < d; ++r) {
            if (r == row) continue;
            double f = A[static_cast<std::size_t>(r) * u + col] /
                       A[static_cast<std::size_t>(row) * u + col];
            if (f == 0.0) continue;
            for (int c = 0; c < u; ++c)
                A[static_cast<std::size_t>(r) * u + c] -= f * A[static_cast<std::size_t>(row) * u + c];
        }
        pivot_col[row] = col;
        ++row;
    }
    if (row < d) return false;
    int free_col = -1;
    for (int col = 0; col < u; ++col) {
        bool is_pivot = false;
        for (int r = 0; r < d; ++r)
            if (pivot_col[r] == col) is_pivot = true;
        if (!is_pivot) {
            free_col = col;
            break;
        }
    }
    beta.assign(u, 0.0);
    beta[free_col] = 1.0;
    for (int r = 0; r < d; ++r) {
        int pc = pivot_col[r];
        beta[pc] = -A[static_cast<std::size_t>(r) * u + free_col] /
                   A[static_cast<std::size_t>(r) * u + pc];
    }
    return true;
}

}  // namespace detail

// Solves the dependence system for one adjacent pair of a simplicial,
// essential, complete fan.
inline AlphaRow alpha_coefficients(const Fan& f, int c1, int c2) {
    const int m = static_cast<int>(f.maximal.size());
    if (c1 < 0 || c1 >= m || c2 < 0 || c2 >= m || c1 == c2)
        throw MalformedInput("alpha_coefficients: bad maximal cone indices");
    const auto& J1 = f.maximal[c1];
    const auto& J2 = f.maximal[c2];
    const int d = 2;
    if (static_cast<int>(J1.size()) != d || static_cast<int>(J2.size()) != d)
        throw InvalidFan("alpha_coefficients: fan is not simplicial");
    std::vector<int> shared, only1, only2;
    for (int j : J1)
        (std::find(J2.begin(), J2.end(), j) != J2.end() ? shared : only1).push_back(j);
    for (int j : J2)
        if (std::find(J1.begin(), J1.end(), j) == J1.end()) only2.push_back(j);
    if (shared.size() != static_cast<std::size_t>(d - 1) || only1.size() != 1 || only2.size() != 1)
        throw InvalidFan("alpha_coefficients: cones are not adjacent");

    std::vector<int> U;  // sorted ray indices of the union
    U.insert(U.end(), J1.begin(), J1.end());
    for (int j : only2) U.push_back(j);
    std::sort(U.begin(), U.end());

    std::vector<double> A(static_cast<std::size_t>(d) * (d + 1));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d + 1; ++c)
            A[static_cast<std::size_t>(r) * (d + 1) + c] = f.rays[U[c]][r];
    std::vector<double> beta;
    if (!detail::kernel_of(std::move(A), d, beta))
        throw InvalidFan("alpha_coefficients: singular dependence system");

    auto pos_of = [&](int ray) {
        return static_cast<int>(std::find(U.begin(), U.end(), ray) - U.begin());
    };
    const int p1 = pos_of(only1[0]);
    const int p2 = pos_of(only2[0]);
    double bmax = 0.0;
    for (double b : beta) bmax = std::max(bmax, std::fabs(b));
    const double s = beta[p1] + beta[p2];
    if (std::fabs(s) <= tol::pivot * std::max(1.0, bmax))
        throw InvalidFan("alpha_coefficients: normalization is singular");

    AlphaRow row;
    row.alpha.assign(f.rays.size(), 0.0);
    for (int c = 0; c < d + 1; ++c) row.alpha[U[c]] = 2.0 * beta[c] / s;
    row.c1 = c1;
    row.c2 = c2;
    row.j1 = only1[0];
    row.j2 = only2[0];

    Vec residual(d, 0.0);
    for (std::size_t j = 0; j < f.rays.size(); ++j)
        for (int c = 0; c < d; ++c) residual[c] += row.alpha[j] * f.rays[j][c];
    if (norm(residual) > tol::alpha_residual)
        throw NumericalFailure("alpha_coefficients: residual above tolerance", 0.0, norm(residual));
    return row;
}

inline TypeCone type_cone(const Fan& f) {
    if (!f.complete || !f.simplicial || !f.essential)
        throw InvalidFan("type_cone: fan must be complete, simplicial, and essential");
    TypeCone tc;
    for (const AdjacentPair& p : adjacent_maximal_pairs(f))
        tc.rows.push_back(alpha_coefficients(f, p.c1, p.c2));
    return tc;
}

// Distinct inequality rows up to the stated tolerance. Rows defining the
// same halfspace (positive multiples of each other) count as one; each class
// is represented by its first member in the Eq-normalized form.
inline std::vector<std::vector<double>> effective_rows(const TypeCone& tc, double tol_ = 1e-10) {
    auto unit = [](const std::vector<double>& a) {
        double n = 0.0;
        for (double v : a) n += v * v;
        n = std::sqrt(n);
        std::vector<double> out(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] / n;
        return out;
    };
    std::vector<std::vector<double>> reps, dirs;
    for (const AlphaRow& r : tc.rows) {
        std::vector<double> dir = unit(r.alpha);
        bool dup = false;
        for (const auto& s : dirs) {
            double diff = 0.0;
            for (std::size_t j = 0; j < s.size(); ++j)
                diff = std::max(diff, std::fabs(s[j] - dir[j]));
            if (diff <= tol_) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            dirs.push_back(std::move(dir));
            reps.push_back(r.alpha);
        }
    }
    return reps;
}

inline bool is_admissible(const TypeCone& tc, const std::vector<double>& h,
                          double strict_tol = 1e-12) {
    for (const AlphaRow& r : tc.rows) {
        if (h.size() != r.alpha.size())
            throw MalformedInput("is_admissible: offset length mismatch");
        double s = 0.0;
        for (std::size_t j = 0; j < h.size(); ++j) s += r.alpha[j] * h[j];
        if (!(s > strict_tol)) return false;
    }
    return true;
}

inline bool is_admissible(const Fan& f, const std::vector<double>& h,
                          double strict_tol = 1e-12) {
    if (h.size() != f.rays.size()) throw MalformedInput("is_admissible: offset length mismatch");
    return is_admissible(type_cone(f), h, strict_tol);
}

// Vertex construction of the offset polytope P_h = {x : <x^{*,j}, x> <= h_j}
// for a complete simplicial planar fan: one vertex per maximal sector, from
// the two facet equalities.
inline Polytope polytope_from_offsets(const Fan& f, const std::vector<double>& h) {
    if (h.size() != f.rays.size()) throw MalformedInput("polytope_from_offsets: offset length mismatch");
    if (!f.complete) throw InvalidFan("polytope_from_offsets: fan must be complete");
    std::vector<Vec> verts;
    for (const auto& J : f.maximal) {
        if (J.size() != 2) throw InvalidFan("polytope_from_offsets: fan is not simplicial");
        const Vec& a = f.rays[J[0]];
        const Vec& b = f.rays[J[1]];
        double det = a[0] * b[1] - a[1] * b[0];
        if (std::fabs(det) <= tol::pivot)
            throw InvalidFan("polytope_from_offsets: dependent rays in a maximal cone");
        double ha = h[J[0]], hb = h[J[1]];
        verts.push_back(Vec{(ha * b[1] - hb * a[1]) / det, (a[0] * hb - b[0] * ha) / det});
    }
    return Polytope(std::move(verts));
}

// Verdict of the deterministic-normal-fan test over a family of vertex
// tuples: (a) for every grid direction some index attains the maximum in
// every sample; (b) in d=2, the normal fans of the sample hulls coincide.
struct FanTestReport {
    bool argmax_ok = true;
    bool fans_ok = true;
    bool verdict = false;
    int witness_direction = -1;  // grid index of a failing direction
    Vec witness_dir;
    int witness_sample = -1;  // sample whose fan differs (or hull degenerates)
    std::string note;
};

inline FanTestReport deterministic_fan_test(const std::vector<std::vector<Vec>>& samples,
                                            const DirectionGrid& grid,
                                            double argtol = 1e-9,
                                            double angtol = tol::angular) {
    if (samples.empty()) throw MalformedInput("deterministic_fan_test: no samples");
    const std::size_t n = samples[0].size();
    const int d = grid.dim();
    for (const auto& s : samples) {
        if (s.size() != n) throw MalformedInput("deterministic_fan_test: inconsistent tuple sizes");
        for (const Vec& v : s)
            if (static_cast<int>(v.size()) != d)
                throw DimensionMismatch("deterministic_fan_test: dimension mismatch");
    }

    FanTestReport rep;
    std::vector<int> count(n);
    const auto& dirs = grid.directions();
    for (std::size_t g = 0; g < dirs.size(); ++g) {
        std::fill(count.begin(), count.end(), 0);
        for (const auto& s : samples) {
            double best = dot(dirs[g], s[0]);
            for (std::size_t i = 1; i < n; ++i) best = std::max(best, dot(dirs[g], s[i]));
            for (std::size_t i = 0; i < n; ++i)
                if (dot(dirs[g], s[i]) >= best - argtol) ++count[i];
        }
        bool hit = false;
        for (std::size_t i = 0; i < n; ++i)
            if (count[i] == static_cast<int>(samples.size())) hit = true;
        if (!hit) {
            rep.argmax_ok = false;
            rep.witness_direction = static_cast<int>(g);
            rep.witness_dir = dirs[g];
            break;
        }
    }

    if (d == 2) {
        try {
            Fan base = normal_fan_2d(Polytope(samples[0]));
            for (std::size_t s = 1; s < samples.size(); ++s) {
                Fan fs = normal_fan_2d(Polytope(samples[s]));
                if (!fans_equal(base, fs, angtol)) {
                    rep.fans_ok = false;
                    rep.witness_sample = static_cast<int>(s);
                    break;
                }
            }
        } catch (const DegeneratePolytope&) {
            rep.fans_ok = false;
            rep.note = "degenerate sample hull";
        }
    }
    rep.verdict = rep.argmax_ok && rep.fans_ok;
    return rep;
}

}  // namespace svset
