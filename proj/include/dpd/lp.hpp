#pragma once

#include "dpd/config.hpp"

namespace dpd {

// min objective^T x  s.t.  G x <= h,  E x = f,  lo <= x <= hi  (bounds may be infinite).
struct LinearProgram {
  Vector objective;
  Matrix G;
  Vector h;
  Matrix E;
  Vector f;
  Vector lo;
  Vector hi;

  // Sizes the program for n variables with no rows and free bounds.
  static LinearProgram with_variables(Eigen::Index n);

  Eigen::Index num_vars() const { return objective.size(); }
  Eigen::Index num_ineq() const { return G.rows(); }
  Eigen::Index num_eq() const { return E.rows(); }

  // Throws InvalidInput on inconsistent dimensions or lo > hi.
  void check() const;
};

enum class LPStatus { optimal, infeasible, unbounded };

const char* to_string(LPStatus s);

// Dual convention: objective + G^T dual_ineq + E^T dual_eq = dual_bounds, with
// dual_ineq >= 0.  dual_ineq[s] is the sensitivity -d(obj)/d(h_s).
struct LPSolution {
  LPStatus status = LPStatus::infeasible;
  Vector x;
  double obj = 0.0;
  Vector dual_ineq;
  Vector dual_eq;
  Vector dual_bounds;
  Vector ray;  // improving direction when unbounded
  int iterations = 0;
};

// Dense revised simplex, two phases, Dantzig pricing with lowest-index ties and
// a switch to Bland's rule after a run of degenerate pivots.
LPSolution solve_lp(const LinearProgram& lp);

// Residuals used both internally (self-certification) and by tests.
struct LPCertificate {
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;
  double duality_gap = 0.0;
  double dual_objective = 0.0;
};

LPCertificate certify(const LinearProgram& lp, const LPSolution& sol);

}  // namespace dpd
