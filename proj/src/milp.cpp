#include "dpd/milp.hpp"

#include <cmath>
#include <queue>

namespace dpd {

void MILPInstance::check() const {
  lp.check();
  for (int j : int_idx) {
    if (j < 0 || j >= lp.num_vars()) throw InvalidInput("milp: integer index out of range");
    if (!std::isfinite(lp.lo[j]) || !std::isfinite(lp.hi[j]))
      throw InvalidInput("milp: integer variable " + std::to_string(j) + " has an infinite bound");
  }
}

const char* to_string(MILPStatus s) {
  switch (s) {
    case MILPStatus::optimal: return "optimal";
    case MILPStatus::infeasible: return "infeasible";
    case MILPStatus::unbounded: return "unbounded";
  }
  return "?";
}

namespace {

bool within_tolerance(const MILPInstance& inst, const Vector& x) {
  const LinearProgram& lp = inst.lp;
  if (x.size() != lp.num_vars()) return false;
  if (((x - lp.hi).array() > kTol.feasibility).any() || ((lp.lo - x).array() > kTol.feasibility).any()) return false;
  if (lp.num_ineq() > 0 && ((lp.G * x - lp.h).array() > kTol.feasibility).any()) return false;
  if (lp.num_eq() > 0 && ((lp.E * x - lp.f).cwiseAbs().array() > kTol.feasibility).any()) return false;
  for (int j : inst.int_idx)
    if (std::abs(x[j] - std::round(x[j])) > kTol.integrality) return false;
  return true;
}

struct Node {
  double bound;
  std::size_t seq;
  Vector lo;  // integer-variable bounds, indexed like int_idx
  Vector hi;
  Vector x;   // LP optimum at this node
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MILPInstance& inst, const MILPOptions& opts) : inst_(inst), opts_(opts), lp_(inst.lp) {
    const auto k = static_cast<Eigen::Index>(inst.int_idx.size());
    root_lo_.resize(k);
    root_hi_.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      // Integer variables can be tightened to the integer hull of their box.
      root_lo_[i] = std::ceil(inst.lp.lo[inst.int_idx[i]] - kTol.integrality);
      root_hi_[i] = std::floor(inst.lp.hi[inst.int_idx[i]] + kTol.integrality);
    }
    if (opts.incumbent && within_tolerance(inst, *opts.incumbent)) {
      incumbent_ = *opts.incumbent;
      incumbent_obj_ = inst.lp.objective.dot(*opts.incumbent);
      have_incumbent_ = true;
    }
  }

  MILPSolution solve() {
    MILPSolution out;
    for (Eigen::Index i = 0; i < root_lo_.size(); ++i) {
      if (root_lo_[i] > root_hi_[i]) return out;  // empty integer range
    }
    const LPSolution root = relax(root_lo_, root_hi_);
    if (root.status == LPStatus::infeasible) {
      out.nodes = nodes_;
      return out;
    }
    if (root.status == LPStatus::unbounded) {
      out.status = MILPStatus::unbounded;
      out.nodes = nodes_;
      return out;
    }
    consider(root.obj, root_lo_, root_hi_, root.x);

    while (!open_.empty()) {
      Node node = open_.top();
      open_.pop();
      if (pruned(node.bound)) continue;
      const int k = most_fractional(node.x);
      const int j = inst_.int_idx[k];
      ++branched_;
      {
        Vector hi = node.hi;
        hi[k] = std::floor(node.x[j]);
        child(node.lo, hi);
      }
      {
        Vector lo = node.lo;
        lo[k] = std::ceil(node.x[j]);
        child(lo, node.hi);
      }
    }

    out.nodes = nodes_;
    out.branched = branched_;
    if (have_incumbent_) {
      out.status = MILPStatus::optimal;
      out.x = incumbent_;
      out.obj = incumbent_obj_;
    }
    return out;
  }

 private:
  LPSolution relax(const Vector& lo, const Vector& hi) {
    if (++nodes_ > opts_.node_limit) throw CapExceeded("milp: node budget exceeded");
    for (std::size_t i = 0; i < inst_.int_idx.size(); ++i) {
      lp_.lo[inst_.int_idx[i]] = lo[static_cast<Eigen::Index>(i)];
      lp_.hi[inst_.int_idx[i]] = hi[static_cast<Eigen::Index>(i)];
    }
    return solve_lp(lp_);
  }

  bool pruned(double bound) const {
    return have_incumbent_ && bound >= incumbent_obj_ - opts_.gap * (1.0 + std::abs(incumbent_obj_));
  }

  void child(const Vector& lo, const Vector& hi) {
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (lo[i] > hi[i]) return;
    const LPSolution sol = relax(lo, hi);
    if (sol.status != LPStatus::optimal) return;
    consider(sol.obj, lo, hi, sol.x);
  }

  void consider(double bound, const Vector& lo, const Vector& hi, const Vector& x) {
    if (pruned(bound)) return;
    if (most_fractional(x) < 0) {
      // Rounding moves the point by up to tol_int; re-solve the continuous part
      // with the integers fixed so the incumbent is feasible to LP accuracy.
      Vector fixed(lo.size());
      for (std::size_t i = 0; i < inst_.int_idx.size(); ++i)
        fixed[static_cast<Eigen::Index>(i)] = std::round(x[inst_.int_idx[i]]);
      const LPSolution sol = relax(fixed, fixed);
      if (sol.status != LPStatus::optimal) return;
      Vector snapped = sol.x;
      for (int j : inst_.int_idx) snapped[j] = std::round(snapped[j]);
      if (!within_tolerance(inst_, snapped)) return;
      const double obj = inst_.lp.objective.dot(snapped);
      if (have_incumbent_ && obj >= incumbent_obj_) return;
      incumbent_ = snapped;
      incumbent_obj_ = obj;
      have_incumbent_ = true;
      return;
    }
    open_.push(Node{bound, seq_++, lo, hi, x});
  }

  int most_fractional(const Vector& x) const {
    int best = -1;
    double best_frac = kTol.integrality;
    for (std::size_t i = 0; i < inst_.int_idx.size(); ++i) {
      const double v = x[inst_.int_idx[i]];
      const double frac = std::abs(v - std::round(v));
      if (frac > best_frac) {
        best_frac = frac;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  const MILPInstance& inst_;
  const MILPOptions& opts_;
  LinearProgram lp_;
  Vector root_lo_, root_hi_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
  std::size_t seq_ = 0;
  std::size_t nodes_ = 0;
  std::size_t branched_ = 0;
  bool have_incumbent_ = false;
  Vector incumbent_;
  double incumbent_obj_ = kInf;
};

}  // namespace

MILPSolution solve_milp(const MILPInstance& inst, const MILPOptions& opts) {
  inst.check();
  return BranchAndBound(inst, opts).solve();
}

}  // namespace dpd
