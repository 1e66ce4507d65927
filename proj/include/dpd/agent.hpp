#pragma once

#include "dpd/model.hpp"
#include "dpd/subproblem.hpp"

#include <vector>

namespace dpd {

enum class StepKind { harmonic, power };

// alpha^t = alpha0 / (t+1)^e with e = 1 for the harmonic kind.  Exponents outside
// (0.5, 1] violate square-summability or divergence and are rejected.
class StepSize {
 public:
  StepSize() = default;
  static StepSize harmonic(double alpha0 = 1.0);
  static StepSize power(double alpha0 = 1.0, double exponent = 0.8);

  double operator()(int t) const;
  StepKind kind() const { return kind_; }
  double alpha0() const { return alpha0_; }
  double exponent() const { return exponent_; }

 private:
  StepSize(StepKind kind, double alpha0, double exponent);
  StepKind kind_ = StepKind::power;
  double alpha0_ = 1.0;
  double exponent_ = 0.8;
};

// y_i^0 = (b - sigma)/N, the last agent absorbing the rounding so that the
// allocations sum to b - sigma exactly as computed in floating point.
std::vector<Vector> init_allocation(const CoupledProblem& problem, const Vector& sigma);

// y + alpha * sum_j (mu_self - mu_j)
Vector allocation_update(const Vector& y, const Vector& mu_self, const std::vector<Vector>& neighbor_mus,
                         double alpha);

struct Recovery {
  Vector x;
  double rho = 0.0;
  double cost = 0.0;
};

// Two-stage recovery: minimal uniform violation rho of A x <= y + rho 1 over X_i,
// then minimal cost with rho relaxed by 1e-9.  `hint` (a point of X_i) only seeds
// branch-and-bound pruning.
Recovery recover_mixed_integer(const AgentBlock& block, const Vector& y, const Vector* hint = nullptr);

struct AgentState {
  int id = 0;
  const AgentBlock* block = nullptr;
  Vector y;
  Vector mu;
  Vector z;
  double v = 0.0;
  double lp_cost = 0.0;
  ColumnPool pool;
  Recovery recovered;
  bool has_recovery = false;

  // Solves the local subproblem at the current allocation.
  void evaluate(double M, const SubproblemOptions& opts = {});
  void recover();
};

}  // namespace dpd
