#include "dpd/restriction.hpp"

#include "dpd/messages.hpp"

#include <algorithm>

namespace dpd {

namespace {

MILPSolution solve_or_throw(const MILPInstance& inst, const char* what) {
  MILPSolution sol = solve_milp(inst);
  if (sol.status != MILPStatus::optimal) throw InfeasibleBlock(std::string(what) + ": X_i is empty");
  return sol;
}

}  // namespace

Vector compute_L(const AgentBlock& block) {
  const Eigen::Index S = block.num_coupling();
  Vector L(S);
  MILPInstance inst = block.milp(Vector::Zero(block.n()));
  for (Eigen::Index s = 0; s < S; ++s) {
    inst.lp.objective = block.A.row(s).transpose();
    L[s] = solve_or_throw(inst, "compute_L").obj;
  }
  return L;
}

RhoMax compute_rho_max(const AgentBlock& block, const Vector& L) {
  const MILPInstance inst = block.milp_with_slack(Vector::Zero(block.n()), 1.0, L);
  const MILPSolution sol = solve_or_throw(inst, "compute_rho_max");
  RhoMax out;
  out.witness = sol.x.head(block.n());
  out.value = std::max(0.0, (block.A * out.witness - L).maxCoeff());
  return out;
}

Vector compute_spread(const AgentBlock& block, const Vector& L) {
  const Eigen::Index S = block.num_coupling();
  Vector out(S);
  MILPInstance inst = block.milp(Vector::Zero(block.n()));
  for (Eigen::Index s = 0; s < S; ++s) {
    inst.lp.objective = -block.A.row(s).transpose();
    out[s] = std::max(0.0, -solve_or_throw(inst, "compute_spread").obj - L[s]);
  }
  return out;
}

Vector compute_sigma_loc(const AgentBlock& block, const Vector& L, double rho_max) {
  return compute_spread(block, L).cwiseMin(rho_max);
}

RestrictionReport compute_report(const CoupledProblem& problem, double delta) {
  if (!(delta >= 0.0)) throw InvalidInput("restriction: delta must be >= 0");
  const Eigen::Index S = problem.S();
  RestrictionReport rep;
  rep.delta = delta;
  Vector max_loc = Vector::Zero(S);
  Vector max_spread = Vector::Zero(S);
  for (const AgentBlock& b : problem.blocks) {
    Vector L = compute_L(b);
    RhoMax rho = compute_rho_max(b, L);
    Vector spread = compute_spread(b, L);
    Vector loc = spread.cwiseMin(rho.value);
    max_loc = max_loc.cwiseMax(loc);
    max_spread = max_spread.cwiseMax(spread);
    rep.L.push_back(std::move(L));
    rep.rho_max.push_back(rho.value);
    rep.witness.push_back(std::move(rho.witness));
    rep.sigma_loc.push_back(std::move(loc));
    rep.spread.push_back(std::move(spread));
  }
  rep.sigma_inf = static_cast<double>(S) * max_loc;
  rep.sigma_ft = rep.sigma_inf.array() + delta;
  rep.sigma_dd = static_cast<double>(S) * max_spread;
  return rep;
}

std::vector<Vector> max_consensus(const std::vector<Vector>& values, const Graph& graph, int rounds) {
  if (static_cast<int>(values.size()) != graph.n()) throw InvalidInput("max_consensus: one value per node required");
  if (rounds < graph.diameter()) throw InvalidInput("max_consensus: rounds below graph diameter");
  std::vector<Vector> state = values;
  MessageBus bus(graph);
  for (int t = 0; t < rounds; ++t) {
    for (int i = 0; i < graph.n(); ++i)
      for (int j : graph.neighbors(i)) bus.post({i, j, t, state[static_cast<std::size_t>(i)]});
    bus.barrier();
    for (int i = 0; i < graph.n(); ++i)
      for (const RoundMessage& m : bus.consume(i, t))
        state[static_cast<std::size_t>(i)] = state[static_cast<std::size_t>(i)].cwiseMax(m.payload);
  }
  return state;
}

double restriction_ratio(const Vector& sigma, const Vector& b) {
  const double nb = b.norm();
  if (nb == 0.0) throw InvalidInput("restriction_ratio: b is zero");
  return sigma.norm() / nb;
}

}  // namespace dpd
