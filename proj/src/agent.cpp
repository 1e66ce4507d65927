#include "dpd/agent.hpp"

#include <cmath>

namespace dpd {

StepSize::StepSize(StepKind kind, double alpha0, double exponent)
    : kind_(kind), alpha0_(alpha0), exponent_(exponent) {
  if (!(alpha0 > 0.0)) throw InvalidInput("step size: alpha0 must be positive");
  if (!(exponent > 0.5 && exponent <= 1.0)) throw InvalidInput("step size: exponent must lie in (0.5, 1]");
}

StepSize StepSize::harmonic(double alpha0) { return {StepKind::harmonic, alpha0, 1.0}; }

StepSize StepSize::power(double alpha0, double exponent) { return {StepKind::power, alpha0, exponent}; }

double StepSize::operator()(int t) const {
  const double k = static_cast<double>(t) + 1.0;
  return kind_ == StepKind::harmonic ? alpha0_ / k : alpha0_ / std::pow(k, exponent_);
}

std::vector<Vector> init_allocation(const CoupledProblem& problem, const Vector& sigma) {
  if (sigma.size() != problem.S()) throw InvalidInput("init_allocation: sigma has wrong length");
  if ((sigma.array() < 0.0).any()) throw InvalidInput("init_allocation: sigma must be nonnegative");
  const std::size_t N = problem.N();
  const Vector total = problem.b - sigma;
  std::vector<Vector> y(N, total / static_cast<double>(N));
  Vector rest = total;
  for (std::size_t i = 0; i + 1 < N; ++i) rest -= y[i];
  y[N - 1] = rest;
  return y;
}

Vector allocation_update(const Vector& y, const Vector& mu_self, const std::vector<Vector>& neighbor_mus,
                         double alpha) {
  Vector step = Vector::Zero(y.size());
  for (const Vector& mj : neighbor_mus) step += mu_self - mj;
  return y + alpha * step;
}

Recovery recover_mixed_integer(const AgentBlock& block, const Vector& y, const Vector* hint) {
  const Eigen::Index n = block.n();
  MILPOptions opts;
  if (hint) {
    Vector seed(n + 1);
    seed << *hint, std::max(0.0, (block.A * *hint - y).maxCoeff());
    opts.incumbent = seed;
  }
  const MILPSolution s1 = solve_milp(block.milp_with_slack(Vector::Zero(n), 1.0, y), opts);
  if (s1.status != MILPStatus::optimal) throw InfeasibleBlock("recovery: X_i is empty");
  const double rho = std::max(0.0, s1.obj);

  MILPOptions opts2;
  if (hint && (block.A * *hint - y).maxCoeff() <= rho) {
    Vector seed(n + 1);
    seed << *hint, std::max(0.0, (block.A * *hint - y).maxCoeff());
    opts2.incumbent = seed;
  }
  MILPSolution s2 = solve_milp(block.milp_with_slack(block.c, 0.0, y, rho + 1e-9), opts2);
  Recovery out;
  out.rho = rho;
  if (s2.status == MILPStatus::optimal) {
    out.x = s2.x.head(n);
  } else {
    out.x = s1.x.head(n);
  }
  out.cost = block.c.dot(out.x);
  return out;
}

void AgentState::evaluate(double M, const SubproblemOptions& opts) {
  const SubproblemResult r = dpd::evaluate(*block, y, M, pool, opts);
  mu = r.mu;
  z = r.z;
  v = r.v;
  lp_cost = r.cost;
}

void AgentState::recover() {
  recovered = recover_mixed_integer(*block, y, has_recovery ? &recovered.x : nullptr);
  has_recovery = true;
}

}  // namespace dpd
