#pragma once

#include "dpd/model.hpp"

#include <optional>
#include <vector>

namespace dpd {

// Points of X_i generated so far; their convex hull is an inner approximation of
// conv(X_i).  Integer coordinates are stored as exact integers.
class ColumnPool {
 public:
  // Returns false (and leaves the pool unchanged) when x is already present.
  bool add(const Vector& x);
  bool contains(const Vector& x) const;
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Vector& operator[](std::size_t k) const { return points_[k]; }
  const std::vector<Vector>& points() const { return points_; }

 private:
  std::vector<Vector> points_;
};

struct SubproblemResult {
  double cost = 0.0;  // c^T z + M v
  Vector z;           // point of conv(X_i)
  double v = 0.0;     // allocation violation, >= 0
  Vector mu;          // multiplier of A z <= y + v 1
  std::vector<double> lambda;  // convex weights over the pool (same order)
  int pricing_rounds = 0;
};

struct SubproblemOptions {
  int max_pricing_rounds = 500;
  double reduced_cost_tol = kTol.reduced_cost;
};

// Solves  min c^T z + M v  s.t.  A z <= y + v 1,  z in conv(X_i),  v >= 0  exactly by
// column generation: a master LP over pool points, priced with a local MILP
// min_{x in X_i} (c + A^T mu)^T x.  New columns are appended to `pool`.
SubproblemResult evaluate(const AgentBlock& block, const Vector& y, double M, ColumnPool& pool,
                          const SubproblemOptions& opts = {});

// Default penalty: 10 * max_i (||c_i||_1 + 1).
double default_penalty(const CoupledProblem& problem);

struct GradientReport {
  double max_abs_error = 0.0;  // max_s | -mu_s - finite difference_s |
  bool kink = false;           // one-sided slopes disagree at the accepted point
  int resamples = 0;
  Vector y;                    // point the comparison was made at
  Vector mu;
  Vector fd_slope;
};

struct GradientCheckOptions {
  double step = 1e-4;
  int max_resamples = 5;
  double resample_radius = 1e-2;
  std::uint64_t seed = 1;
};

// Compares -mu against central finite differences of evaluate(...).cost in every
// coordinate of y.  When the one-sided slopes disagree (a kink) y is resampled
// nearby; if all attempts sit on kinks the report is flagged.
GradientReport gradient_check(const AgentBlock& block, const Vector& y, double M, ColumnPool& pool,
                              const GradientCheckOptions& opts = {});

// Centralized column-generation solve of the restricted convexified problem
// min sum c_i^T z_i  s.t.  sum A_i z_i <= b - sigma, z_i in conv(X_i).  A phase-1
// minimizes the uniform violation (a negative value is a margin); the problem is
// reported infeasible when that minimum exceeds kTol.feasibility.  Used for feasibility prechecks and q*.
struct RestrictedLPResult {
  bool feasible = false;
  double value = 0.0;        // q*
  double min_violation = 0.0;
  // Largest uniform slack achievable under sigma and a point attaining it.
  double max_margin = 0.0;
  std::vector<Vector> margin_point;
  std::vector<Vector> z;
  Vector mu;                 // coupling multipliers
};

RestrictedLPResult solve_restricted_lp(const CoupledProblem& problem, const Vector& sigma,
                                       std::vector<ColumnPool>* pools = nullptr,
                                       const SubproblemOptions& opts = {});

}  // namespace dpd
