#pragma once

#include "dpd/graph.hpp"
#include "dpd/model.hpp"

#include <vector>

namespace dpd {

// L_i[s] = min_{x in X_i} (A_i x)_s.
Vector compute_L(const AgentBlock& block);

struct RhoMax {
  double value = 0.0;
  Vector witness;  // x_i^L, a point of X_i attaining the min-max
};

// min_{x in X_i} max_s (A_i x - L_i)_s with its minimizer.
RhoMax compute_rho_max(const AgentBlock& block, const Vector& L);

// Componentwise max_{x in X_i} (A_i x - L_i).
Vector compute_spread(const AgentBlock& block, const Vector& L);

// min(rho_max 1, max_{x in X_i}(A_i x - L_i)) componentwise.
Vector compute_sigma_loc(const AgentBlock& block, const Vector& L, double rho_max);

struct RestrictionReport {
  std::vector<Vector> L;
  std::vector<double> rho_max;
  std::vector<Vector> witness;
  std::vector<Vector> sigma_loc;
  std::vector<Vector> spread;
  Vector sigma_inf;
  Vector sigma_ft;
  Vector sigma_dd;
  double delta = 0.0;
};

RestrictionReport compute_report(const CoupledProblem& problem, double delta);

// Flooding max-consensus over synchronous rounds.  Throws InvalidInput when
// rounds < diameter, since exactness is not guaranteed then.
std::vector<Vector> max_consensus(const std::vector<Vector>& values, const Graph& graph, int rounds);

// ||sigma||_2 / ||b||_2
double restriction_ratio(const Vector& sigma, const Vector& b);

}  // namespace dpd
