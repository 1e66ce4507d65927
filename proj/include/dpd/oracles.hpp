#pragma once

// Brute-force references for desk-scale verification.  Nothing here is used by
// the distributed algorithm itself.

#include "dpd/model.hpp"

#include <iterator>

namespace dpd {

struct EnumerationCaps {
  std::size_t max_int_vars = 12;
  std::size_t max_points = 1'000'000;
};

// Range over every integer assignment of a block's integer coordinates within
// [lo, hi] ∩ Z, in odometer order (last coordinate fastest).  Each value has one
// entry per element of int_idx.  Construction throws CapExceeded past the caps.
class IntegerAssignments {
 public:
  explicit IntegerAssignments(const AgentBlock& block, const EnumerationCaps& caps = {});

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Vector;
    using difference_type = std::ptrdiff_t;
    using pointer = const Vector*;
    using reference = const Vector&;

    iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(const iterator& o) const { return done_ == o.done_; }

   private:
    friend class IntegerAssignments;
    const IntegerAssignments* owner_ = nullptr;
    Vector current_;
    bool done_ = true;
  };

  iterator begin() const;
  iterator end() const { return iterator{}; }
  std::size_t size() const { return count_; }

 private:
  Vector lo_;
  Vector hi_;
  std::size_t count_ = 1;
};

struct OracleMin {
  double value = 0.0;
  MixedIntegerPoint argmin;
};

// Exact min_{x in X_i} w^T x by enumerating integer assignments and solving the
// continuous completion LP for each.  Throws InfeasibleBlock when X_i is empty.
OracleMin oracle_min_over_X(const AgentBlock& block, const Vector& w, const EnumerationCaps& caps = {});

// Every point of X_i that is a vertex of its integer slice; their convex hull is conv(X_i).
std::vector<Vector> enumerate_hull_points(const AgentBlock& block, const EnumerationCaps& caps = {});

struct OracleSubproblem {
  double cost = 0.0;
  Vector z;
  double v = 0.0;
};

// Relaxed local problem  min c^T z + M v  s.t.  A z <= y + v 1,  z in conv(X_i),  v >= 0,
// solved as one LP over all enumerated hull points.
OracleSubproblem oracle_subproblem(const AgentBlock& block, const Vector& y, double M,
                                   const EnumerationCaps& caps = {});

struct OracleRestrictedLP {
  bool feasible = false;
  double value = 0.0;
  std::vector<Vector> z;
};

// Restricted convexified problem  min sum c_i^T z_i  s.t.  sum A_i z_i <= b - sigma,
// z_i in conv(X_i), as a single LP over all enumerated hull points.
OracleRestrictedLP oracle_restricted_lp(const CoupledProblem& problem, const Vector& sigma,
                                        const EnumerationCaps& caps = {});

struct OracleGlobal {
  MILPStatus status = MILPStatus::infeasible;
  double value = 0.0;
  std::vector<Vector> x;
};

// J^MILP by joint branch-and-bound on the stacked problem (N <= max_agents).
OracleGlobal oracle_global_milp(const CoupledProblem& problem, std::size_t max_agents = 8);

// J^MILP by exhaustive enumeration of the joint integer grid with one LP over the
// continuous coordinates per joint assignment.
OracleGlobal oracle_global_enumerate(const CoupledProblem& problem, const EnumerationCaps& caps = {});

}  // namespace dpd
