#pragma once

#include <limits>

#include "svset/common.hpp"

namespace svset {

// The three equal quantities of the randomization identity on a finite
// space: the value of the argmax partition, the expectation of the pointwise
// maximum, and the supremum over measurable simplex weights.
struct RandomizationResult {
    double partition_value = 0.0;
    double expected_max = 0.0;
    double simplex_value = 0.0;
    std::vector<int> partition;  // atom -> selection index (lowest-index tie break)
};

// zeta[i][a] = value of selection i on atom a. The attaining partition is
// built sequentially, A_i = B_i \ (A_1 u ... u A_{i-1}) with
// B_i = {zeta_i = max_j zeta_j}, which on atoms is the lowest attaining
// index. The three values must agree to 1e-12; a violation is raised as a
// numerical failure, since on a finite space the identity is exact.
inline RandomizationResult randomization_identity(const std::vector<double>& atom_probs,
                                                  const std::vector<std::vector<double>>& zeta) {
    if (zeta.empty()) throw MalformedInput("randomization_identity: no selections");
    const std::size_t A = atom_probs.size();
    if (A == 0) throw MalformedInput("randomization_identity: no atoms");
    double total = 0.0;
    for (double p : atom_probs) {
        if (!(p > 0.0)) throw MalformedInput("randomization_identity: atom probabilities must be positive");
        total += p;
    }
    if (std::fabs(total - 1.0) > tol::weight_sum)
        throw MalformedInput("randomization_identity: atom probabilities must sum to 1");
    const std::size_t n = zeta.size();
    for (const auto& row : zeta)
        if (row.size() != A) throw MalformedInput("randomization_identity: zeta row length mismatch");

    RandomizationResult r;
    r.partition.assign(A, 0);
    for (std::size_t a = 0; a < A; ++a) {
        // lowest index attaining the maximum on this atom
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (zeta[i][a] > zeta[best][a]) best = i;
        r.partition[a] = static_cast<int>(best);
        r.partition_value += atom_probs[a] * zeta[best][a];
        double mx = zeta[0][a];
        for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, zeta[i][a]);
        r.expected_max += atom_probs[a] * mx;
        // supremum of the linear form over the probability simplex, attained
        // at one of its vertices e_i
        double sup = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            double val = 0.0;
            for (std::size_t j = 0; j < n; ++j) val += (i == j ? 1.0 : 0.0) * zeta[j][a];
            sup = std::max(sup, val);
        }
        r.simplex_value += atom_probs[a] * sup;
    }
    const double scale = std::max({1.0, std::fabs(r.expected_max)});
    if (std::fabs(r.partition_value - r.expected_max) > 1e-12 * scale ||
        std::fabs(r.simplex_value - r.expected_max) > 1e-12 * scale)
        throw NumericalFailure("randomization_identity: three-way equality violated",
                               std::min({r.partition_value, r.expected_max, r.simplex_value}),
                               std::max({r.partition_value, r.expected_max, r.simplex_value}));
    return r;
}

// Exact decomposable hull on a finite space: all atom-wise mixtures of the
// given family, deduplicated. K[j][a] is the value of family member j on
// atom a; the output lists every distinct atom-indexed mixture. Enumeration
// is guarded at |K|^#atoms <= guard.
inline std::vector<std::vector<Vec>> decomposable_hull(const std::vector<std::vector<Vec>>& K,
                                                       std::size_t guard = 1000000) {
    if (K.empty()) throw MalformedInput("decomposable_hull: empty family");
    const std::size_t A = K[0].size();
    for (const auto& k : K)
        if (k.size() != A) throw MalformedInput("decomposable_hull: atom count mismatch");
    double count = 1.0;
    for (std::size_t a = 0; a < A; ++a) {
        count *= static_cast<double>(K.size());
        if (count > static_cast<double>(guard))
            throw GuardExceeded("decomposable_hull: enumeration guard exceeded");
    }

    std::vector<std::vector<Vec>> out;
    std::vector<std::size_t> pick(A, 0);
    while (true) {
        std::vector<Vec> mix(A);
        for (std::size_t a = 0; a < A; ++a) mix[a] = K[pick[a]][a];
        bool dup = false;
        for (const auto& seen : out) {
            bool same = true;
            for (std::size_t a = 0; a < A && same; ++a)
                if (seen[a] != mix[a]) same = false;
            if (same) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(std::move(mix));
        std::size_t a = 0;
        while (a < A) {
            if (++pick[a] < K.size()) break;
            pick[a] = 0;
            ++a;
        }
        if (a == A) break;
    }
    return out;
}

}  // namespace svset
