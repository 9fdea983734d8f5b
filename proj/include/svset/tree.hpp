#pragma once

#include <numeric>

#include "svset/direction_grid.hpp"
#include "svset/hausdorff.hpp"
#include "svset/polytope.hpp"

namespace svset {

// Finite filtered probability space: a rooted tree with one level per time
// step, conditional probabilities on edges, and all leaves on the last
// level. Nodes are numbered breadth-first, the root is node 0. Immutable
// after construction.
class ScenarioTree {
  public:
    // branching[i] = child count of the i-th internal node in BFS order;
    // the array must cover whole levels. probs, when nonempty, gives the
    // conditional child probabilities per internal node in the same order.
    static ScenarioTree from_branching(const std::vector<int>& branching,
                                       const std::vector<std::vector<double>>& probs = {}) {
        ScenarioTree t;
        t.parent_ = {-1};
        t.level_ = {0};
        t.cond_prob_ = {1.0};
        std::vector<int> frontier{0};
        std::size_t next_entry = 0;
        int level = 0;
        while (next_entry < branching.size()) {
            if (branching.size() - next_entry < frontier.size())
                throw MalformedInput("ScenarioTree: branching array stops mid-level");
            std::vector<int> next_frontier;
            ++level;
            for (int node : frontier) {
                int nb = branching[next_entry];
                const std::vector<double>* p =
                    probs.empty() ? nullptr : &probs.at(next_entry);
                if (nb < 1) throw MalformedInput("ScenarioTree: node needs at least one child");
                if (p) {
                    if (static_cast<int>(p->size()) != nb)
                        throw MalformedInput("ScenarioTree: probability row length mismatch");
                    double s = 0.0;
                    for (double q : *p) {
                        if (!(q > 0.0) || q > 1.0)
                            throw MalformedInput("ScenarioTree: conditional probabilities must be in (0,1]");
                        s += q;
                    }
                    if (std::fabs(s - 1.0) > tol::weight_sum)
                        throw MalformedInput("ScenarioTree: conditional probabilities must sum to 1");
                }
                t.children_.resize(t.parent_.size());
                for (int c = 0; c < nb; ++c) {
                    int id = static_cast<int>(t.parent_.size());
                    t.parent_.push_back(node);
                    t.level_.push_back(level);
                    t.cond_prob_.push_back(p ? (*p)[c] : 1.0 / nb);
                    t.children_[node].push_back(id);
                }
                ++next_entry;
            }
            next_frontier.clear();
            for (int node : frontier)
                for (int c : t.children_[node]) next_frontier.push_back(c);
            frontier = std::move(next_frontier);
        }
        t.children_.resize(t.parent_.size());
        t.depth_ = level;
        t.leaves_ = frontier;
        t.prob_.assign(t.parent_.size(), 0.0);
        t.prob_[0] = 1.0;
        for (std::size_t i = 1; i < t.parent_.size(); ++i)
            t.prob_[i] = t.prob_[t.parent_[i]] * t.cond_prob_[i];
        double leaf_total = 0.0;
        for (int l : t.leaves_) leaf_total += t.prob_[l];
        if (std::fabs(leaf_total - 1.0) > 1e-12)
            throw MalformedInput("ScenarioTree: leaf probabilities do not sum to 1");
        return t;
    }

    static ScenarioTree uniform_binary(int depth) {
        if (depth < 0) throw MalformedInput("ScenarioTree: negative depth");
        std::vector<int> branching;
        int width = 1;
        for (int k = 0; k < depth; ++k) {
            for (int i = 0; i < width; ++i) branching.push_back(2);
            width *= 2;
        }
        return from_branching(branching);
    }

    int node_count() const { return static_cast<int>(parent_.size()); }
    int leaf_count() const { return static_cast<int>(leaves_.size()); }
    int depth() const { return depth_; }
    int parent(int i) const { return parent_.at(i); }
    int level(int i) const { return level_.at(i); }
    const std::vector<int>& children(int i) const { return children_.at(i); }
    bool is_leaf(int i) const { return children_.at(i).empty(); }
    double cond_prob(int i) const { return cond_prob_.at(i); }
    double prob(int i) const { return prob_.at(i); }
    const std::vector<int>& leaves() const { return leaves_; }

    // position of a leaf node id in the canonical leaf order
    int leaf_index(int node) const {
        auto it = std::find(leaves_.begin(), leaves_.end(), node);
        if (it == leaves_.end()) throw MalformedInput("ScenarioTree: node is not a leaf");
        return static_cast<int>(it - leaves_.begin());
    }

    std::vector<int> nodes_at_level(int k) const {
        if (k < 0 || k > depth_) throw MalformedInput("ScenarioTree: level out of range");
        std::vector<int> out;
        for (int i = 0; i < node_count(); ++i)
            if (level_[i] == k) out.push_back(i);
        return out;
    }

  private:
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::vector<int> level_;
    std::vector<double> cond_prob_;
    std::vector<double> prob_;
    std::vector<int> leaves_;
    int depth_ = 0;
};

// Leaf-indexed random vector on a tree.
using TreeVectorRV = std::vector<Vec>;

// Conditional expectation of a vector-valued variable at every node,
// accumulated child-by-child so the tower property holds exactly by
// construction.
inline std::vector<Vec> cond_expect_vector_all(const ScenarioTree& t, const TreeVectorRV& rv) {
    if (static_cast<int>(rv.size()) != t.leaf_count())
        throw MalformedInput("cond_expect_vector: leaf count mismatch");
    const std::size_t d = rv.empty() ? 0 : rv[0].size();
    std::vector<Vec> val(t.node_count());
    for (int i = 0; i < t.leaf_count(); ++i) {
        if (rv[i].size() != d) throw DimensionMismatch("cond_expect_vector: mixed dimensions");
        val[t.leaves()[i]] = rv[i];
    }
    for (int node = t.node_count(); node-- > 0;) {
        if (t.is_leaf(node)) continue;
        Vec acc(d, 0.0);
        for (int c : t.children(node))
            for (std::size_t k = 0; k < d; ++k) acc[k] += t.cond_prob(c) * val[c][k];
        val[node] = std::move(acc);
    }
    return val;
}

inline std::vector<Vec> cond_expect_vector(const ScenarioTree& t, const TreeVectorRV& rv, int level) {
    auto all = cond_expect_vector_all(t, rv);
    std::vector<Vec> out;
    for (int n : t.nodes_at_level(level)) out.push_back(all[n]);
    return out;
}

// Set-valued conditional expectation: node value is the Minkowski average of
// the children under the conditional probabilities. The support function of
// every node value equals the conditional expectation of the leaf support
// functions, exactly, at every direction.
inline std::vector<Polytope> cond_expect_polytope_all(const ScenarioTree& t,
                                                      const std::vector<Polytope>& leaf_polys) {
    if (static_cast<int>(leaf_polys.size()) != t.leaf_count())
        throw MalformedInput("cond_expect_polytope: leaf count mismatch");
    std::vector<Polytope> store;
    store.reserve(t.node_count());
    std::vector<int> where(t.node_count(), -1);
    for (int i = 0; i < t.leaf_count(); ++i) {
        store.push_back(leaf_polys[i]);
        where[t.leaves()[i]] = static_cast<int>(store.size()) - 1;
    }
    for (int node = t.node_count(); node-- > 0;) {
        if (t.is_leaf(node)) continue;
        std::vector<double> w;
        std::vector<Polytope> kids;
        for (int c : t.children(node)) {
            w.push_back(t.cond_prob(c));
            kids.push_back(store[where[c]]);
        }
        store.push_back(minkowski_average(w, kids));
        where[node] = static_cast<int>(store.size()) - 1;
    }
    std::vector<Polytope> out;
    out.reserve(t.node_count());
    for (int node = 0; node < t.node_count(); ++node) out.push_back(store[where[node]]);
    return out;
}

inline std::vector<Polytope> cond_expect_polytope(const ScenarioTree& t,
                                                  const std::vector<Polytope>& leaf_polys,
                                                  int level) {
    auto all = cond_expect_polytope_all(t, leaf_polys);
    std::vector<Polytope> out;
    for (int n : t.nodes_at_level(level)) out.push_back(all[n]);
    return out;
}

// Defect report of a node-indexed set-valued process against the one-step
// conditional expectations. A martingale has Hausdorff defect ~0 at every
// internal node; a strict submartingale sits inside its one-step average.
struct MartingaleAudit {
    double max_defect = 0.0;            // Hausdorff
    double max_sub_violation = 0.0;     // sup over nodes of h-bar(proc, avg)
    double max_super_violation = 0.0;   // sup over nodes of h-bar(avg, proc)
    std::vector<double> node_defect;    // indexed by node (0 on leaves)
    bool martingale = false;
    bool submartingale = false;
    bool submartingale_only = false;
    int worst_node = -1;
};

inline MartingaleAudit martingale_audit(const ScenarioTree& t, const std::vector<Polytope>& proc,
                                        double tol_ = tol::gap_verdict) {
    if (static_cast<int>(proc.size()) != t.node_count())
        throw MalformedInput("martingale_audit: process must be node-indexed");
    MartingaleAudit rep;
    rep.node_defect.assign(t.node_count(), 0.0);
    for (int node = 0; node < t.node_count(); ++node) {
        if (t.is_leaf(node)) continue;
        std::vector<double> w;
        std::vector<Polytope> kids;
        for (int c : t.children(node)) {
            w.push_back(t.cond_prob(c));
            kids.push_back(proc[c]);
        }
        Polytope avg = minkowski_average(w, kids);
        double defect = hausdorff_distance(proc[node], avg);
        double sub_v = hausdorff_one_sided(proc[node], avg);
        double super_v = hausdorff_one_sided(avg, proc[node]);
        rep.node_defect[node] = defect;
        if (defect > rep.max_defect) {
            rep.max_defect = defect;
            rep.worst_node = node;
        }
        rep.max_sub_violation = std::max(rep.max_sub_violation, sub_v);
        rep.max_super_violation = std::max(rep.max_super_violation, super_v);
    }
    rep.martingale = rep.max_defect <= tol_;
    rep.submartingale = rep.max_sub_violation <= tol_;
    rep.submartingale_only = rep.submartingale && !rep.martingale;
    return rep;
}

// Per-node comparison of G = co{E[xi^i | node]} against M = E[co{xi^i} | node].
// The inclusion G subseteq M holds always; the process G is a set-valued
// martingale precisely when the gaps vanish.
struct HullVsConditionalReport {
    std::vector<double> node_gap;   // h(G, M) per node
    double max_gap = 0.0;
    int worst_node = -1;
    bool inclusion_ok = true;       // contains(M, G) at every node
    bool martingale = false;        // all gaps below the verdict tolerance
    std::vector<Polytope> hull_of_expectations;   // G, node-indexed
    std::vector<Polytope> conditional_of_hull;    // M, node-indexed
};

inline HullVsConditionalReport hull_vs_conditional(const ScenarioTree& t,
                                                   const std::vector<TreeVectorRV>& selections,
                                                   double verdict_tol = tol::gap_verdict,
                                                   double inclusion_tol = 1e-9) {
    if (selections.empty()) throw MalformedInput("hull_vs_conditional: no selections");
    const int n = static_cast<int>(selections.size());
    const int L = t.leaf_count();
    for (const auto& s : selections)
        if (static_cast<int>(s.size()) != L)
            throw MalformedInput("hull_vs_conditional: selection leaf count mismatch");

    std::vector<Polytope> leaf_hulls;
    leaf_hulls.reserve(L);
    for (int i = 0; i < L; ++i) {
        std::vector<Vec> pts;
        for (int j = 0; j < n; ++j) pts.push_back(selections[j][i]);
        leaf_hulls.push_back(Polytope(pts));
    }

    std::vector<std::vector<Vec>> expect(n);
    for (int j = 0; j < n; ++j) expect[j] = cond_expect_vector_all(t, selections[j]);

    HullVsConditionalReport rep;
    rep.conditional_of_hull = cond_expect_polytope_all(t, leaf_hulls);
    rep.node_gap.assign(t.node_count(), 0.0);
    rep.hull_of_expectations.reserve(t.node_count());
    for (int node = 0; node < t.node_count(); ++node) {
        std::vector<Vec> pts;
        for (int j = 0; j < n; ++j) pts.push_back(expect[j][node]);
        rep.hull_of_expectations.push_back(Polytope(pts));
        const Polytope& G = rep.hull_of_expectations.back();
        const Polytope& M = rep.conditional_of_hull[node];
        if (!contains(M, G, inclusion_tol)) rep.inclusion_ok = false;
        double gap = hausdorff_one_sided(M, G);
        rep.node_gap[node] = gap;
        if (gap > rep.max_gap) {
            rep.max_gap = gap;
            rep.worst_node = node;
        }
    }
    rep.martingale = rep.max_gap <= verdict_tol;
    return rep;
}

}  // namespace svset
