#include "dpd/subproblem.hpp"

#include <algorithm>
#include <cmath>

namespace dpd {

bool ColumnPool::contains(const Vector& x) const {
  return std::any_of(points_.begin(), points_.end(),
                     [&x](const Vector& p) { return p.size() == x.size() && p == x; });
}

bool ColumnPool::add(const Vector& x) {
  if (contains(x)) return false;
  points_.push_back(x);
  return true;
}

double default_penalty(const CoupledProblem& problem) {
  double m = 0.0;
  for (const AgentBlock& b : problem.blocks) m = std::max(m, b.c.lpNorm<1>() + 1.0);
  return 10.0 * m;
}

namespace {

// Solves the pricing MILP, seeding the incumbent with the best pool point.
MILPSolution price(MILPInstance& pricing, const Vector& objective, const ColumnPool& pool) {
  pricing.lp.objective = objective;
  MILPOptions opts;
  double best = kInf;
  for (const Vector& p : pool.points()) {
    const double v = objective.dot(p);
    if (v < best) {
      best = v;
      opts.incumbent = p;
    }
  }
  return solve_milp(pricing, opts);
}

void bootstrap(const AgentBlock& block, MILPInstance& pricing, ColumnPool& pool) {
  if (!pool.empty()) return;
  const MILPSolution first = price(pricing, block.c, pool);
  if (first.status != MILPStatus::optimal) throw InfeasibleBlock("subproblem: X_i is empty");
  pool.add(first.x);
}

}  // namespace

SubproblemResult evaluate(const AgentBlock& block, const Vector& y, double M, ColumnPool& pool,
                          const SubproblemOptions& opts) {
  const Eigen::Index S = block.num_coupling();
  if (y.size() != S) throw InvalidInput("subproblem: allocation has wrong length");
  if (!(M > 0.0)) throw InvalidInput("subproblem: penalty M must be positive");

  MILPInstance pricing = block.milp(block.c);
  bootstrap(block, pricing, pool);

  for (int round = 1; round <= opts.max_pricing_rounds; ++round) {
    const auto K = static_cast<Eigen::Index>(pool.size());
    LinearProgram master = LinearProgram::with_variables(K + 1);
    master.G.resize(S, K + 1);
    master.E = Matrix::Zero(1, K + 1);
    for (Eigen::Index k = 0; k < K; ++k) {
      master.objective[k] = block.c.dot(pool[k]);
      master.G.col(k) = block.A * pool[k];
      master.E(0, k) = 1.0;
    }
    master.objective[K] = M;
    master.G.col(K).setConstant(-1.0);
    master.h = y;
    master.f = Vector::Ones(1);
    master.lo.setZero();
    const LPSolution sol = solve_lp(master);
    if (sol.status != LPStatus::optimal) throw NumericalFailure("subproblem: master LP not optimal");

    const Vector& mu = sol.dual_ineq;
    const MILPSolution col = price(pricing, block.c + block.A.transpose() * mu, pool);
    if (col.status != MILPStatus::optimal) throw InfeasibleBlock("subproblem: pricing infeasible");
    const double reduced = col.obj + sol.dual_eq[0];
    if (reduced >= -opts.reduced_cost_tol || !pool.add(col.x)) {
      SubproblemResult out;
      out.cost = sol.obj;
      out.v = sol.x[K];
      out.mu = mu;
      out.z = Vector::Zero(block.n());
      out.lambda.resize(static_cast<std::size_t>(K));
      for (Eigen::Index k = 0; k < K; ++k) {
        out.lambda[static_cast<std::size_t>(k)] = sol.x[k];
        out.z += sol.x[k] * pool[k];
      }
      out.pricing_rounds = round;
      return out;
    }
  }
  throw CapExceeded("subproblem: pricing round cap reached");
}

GradientReport gradient_check(const AgentBlock& block, const Vector& y, double M, ColumnPool& pool,
                              const GradientCheckOptions& opts) {
  Rng rng(opts.seed);
  const Eigen::Index S = y.size();
  GradientReport rep;
  Vector at = y;
  for (int attempt = 0; attempt <= opts.max_resamples; ++attempt) {
    const SubproblemResult base = evaluate(block, at, M, pool);
    Vector slope(S);
    bool kink = false;
    for (Eigen::Index s = 0; s < S; ++s) {
      Vector yp = at, ym = at;
      yp[s] += opts.step;
      ym[s] -= opts.step;
      const double fp = evaluate(block, yp, M, pool).cost;
      const double fm = evaluate(block, ym, M, pool).cost;
      const double fwd = (fp - base.cost) / opts.step;
      const double bwd = (base.cost - fm) / opts.step;
      slope[s] = (fp - fm) / (2.0 * opts.step);
      if (std::abs(fwd - bwd) > 1e-5 * (1.0 + std::abs(fwd) + std::abs(bwd))) kink = true;
    }
    rep.y = at;
    rep.mu = base.mu;
    rep.fd_slope = slope;
    rep.kink = kink;
    rep.max_abs_error = (-base.mu - slope).cwiseAbs().maxCoeff();
    if (!kink) return rep;
    ++rep.resamples;
    at = y;
    for (Eigen::Index s = 0; s < S; ++s) at[s] += rng.uniform(-opts.resample_radius, opts.resample_radius);
  }
  return rep;
}

RestrictedLPResult solve_restricted_lp(const CoupledProblem& problem, const Vector& sigma,
                                       std::vector<ColumnPool>* pools, const SubproblemOptions& opts) {
  const std::size_t N = problem.N();
  const Eigen::Index S = problem.S();
  std::vector<ColumnPool> local;
  if (!pools) pools = &local;
  pools->resize(N);
  std::vector<MILPInstance> pricing;
  pricing.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    pricing.push_back(problem.blocks[i].milp(problem.blocks[i].c));
    bootstrap(problem.blocks[i], pricing.back(), (*pools)[i]);
  }

  RestrictedLPResult out;
  LPSolution sol;
  Eigen::Index v_col = 0;
  auto solve_master = [&](bool phase_one, double v_cap) {
    Eigen::Index K = 0;
    for (const ColumnPool& p : *pools) K += static_cast<Eigen::Index>(p.size());
    v_col = K;
    LinearProgram lp = LinearProgram::with_variables(K + 1);
    lp.G.resize(S, K + 1);
    lp.E = Matrix::Zero(static_cast<Eigen::Index>(N), K + 1);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < N; ++i) {
      for (const Vector& x : (*pools)[i].points()) {
        lp.objective[col] = phase_one ? 0.0 : problem.blocks[i].c.dot(x);
        lp.G.col(col) = problem.blocks[i].A * x;
        lp.E(static_cast<Eigen::Index>(i), col) = 1.0;
        ++col;
      }
    }
    lp.objective[K] = phase_one ? 1.0 : 0.0;
    lp.G.col(K).setConstant(-1.0);
    lp.h = problem.b - sigma;
    lp.f = Vector::Ones(static_cast<Eigen::Index>(N));
    lp.lo.setZero();
    if (phase_one) lp.lo[K] = -kInf;
    lp.hi[K] = v_cap;
    sol = solve_lp(lp);
    if (sol.status != LPStatus::optimal) throw NumericalFailure("restricted LP: master not optimal");
  };

  auto generate = [&](bool phase_one, double v_cap) {
    for (int round = 0; round < opts.max_pricing_rounds; ++round) {
      solve_master(phase_one, v_cap);
      bool added = false;
      for (std::size_t i = 0; i < N; ++i) {
        const AgentBlock& b = problem.blocks[i];
        const Vector base = phase_one ? Vector(Vector::Zero(b.n())) : b.c;
        const MILPSolution col = price(pricing[i], base + b.A.transpose() * sol.dual_ineq, (*pools)[i]);
        if (col.status != MILPStatus::optimal) throw InfeasibleBlock("restricted LP: pricing infeasible");
        if (col.obj + sol.dual_eq[static_cast<Eigen::Index>(i)] < -opts.reduced_cost_tol && (*pools)[i].add(col.x))
          added = true;
      }
      if (!added) return;
    }
    throw CapExceeded("restricted LP: pricing round cap reached");
  };

  auto combine = [&] {
    std::vector<Vector> zs;
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < N; ++i) {
      Vector z = Vector::Zero(problem.blocks[i].n());
      for (const Vector& x : (*pools)[i].points()) z += sol.x[col++] * x;
      zs.push_back(z);
    }
    return zs;
  };

  generate(true, kInf);
  out.min_violation = std::max(0.0, sol.x[v_col]);
  out.max_margin = std::max(0.0, -sol.x[v_col]);
  out.margin_point = combine();
  if (out.min_violation > kTol.feasibility) return out;

  generate(false, out.min_violation);
  out.feasible = true;
  out.value = sol.obj;
  out.mu = sol.dual_ineq;
  out.z = combine();
  return out;
}

}  // namespace dpd
