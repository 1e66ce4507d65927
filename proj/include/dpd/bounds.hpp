#pragma once

#include "dpd/model.hpp"
#include "dpd/network.hpp"

#include <optional>
#include <vector>

namespace dpd {

// max_{x in X_i} c^T x - min_{x in X_i} c^T x
double gamma(const AgentBlock& block);

struct SlaterCertificate {
  double zeta = 0.0;  // min_s [b - sigma - sum A_i zhat_i]_s > tol_feas
  double J_sl = 0.0;  // sum c_i^T zhat_i
  std::vector<Vector> point;
};

// Absent when the candidate leaves no margin above kTol.feasibility.
std::optional<SlaterCertificate> slater(const CoupledProblem& problem, const Vector& sigma,
                                        const std::vector<Vector>& candidate);

// (S + N ||sigma||_inf / zeta) max_i gamma_i
double bound_apriori(const CoupledProblem& problem, const Vector& sigma,
                     const std::optional<SlaterCertificate>& cert, const std::vector<double>& gammas);

struct APosteriori {
  double value = 0.0;
  std::vector<int> I_R;  // blocks whose z_i^* is not in X_i
};

// sum_{i in I_R}(c_i^T x_i - c_i^T z_i^*) + (||sigma||_inf / zeta)(J_sl - sum_i c_i^T z_i^*)
APosteriori bound_aposteriori(const CoupledProblem& problem, const std::vector<Vector>& z_star,
                              const std::vector<Vector>& x, const Vector& sigma,
                              const std::optional<SlaterCertificate>& cert);

// (N / zeta) sum_i gamma_i
double finite_time_gamma(std::size_t N, const std::optional<SlaterCertificate>& cert,
                         const std::vector<double>& gammas);

// sum_i(c_i^T x_i^t - J_i^{LP,t}) + sum_i eps_i ||mu_i^t||_1 + Gamma ||sigma_ft||_inf
double bound_finite_time(const Vector& x_cost, const Vector& lp_cost, const Matrix& mu, const Vector& epsilons,
                         double Gamma_value, const Vector& sigma_ft);

struct BoundsReport {
  std::vector<double> gammas;
  std::optional<SlaterCertificate> slater;
  std::string slater_source;  // name of the chosen candidate, or "none"
  std::optional<double> B;
  std::optional<APosteriori> B_prime;
  std::optional<double> Gamma;
  std::vector<std::pair<int, double>> B_t;  // (round, value) on recovered rounds
};

struct SlaterCandidate {
  std::string name;
  std::vector<Vector> point;  // one point of conv(X_i) per agent
};

// Gathers every certificate for a finished run under its restriction trace.sigma.
// Among `candidates` and the run's final relaxed primal ("relaxed"), the point
// with the largest margin is used.  B^t needs eps_i = delta / N > 0 and is left
// empty when delta is zero.
BoundsReport compute_bounds(const CoupledProblem& problem, const RunTrace& trace,
                            const std::vector<SlaterCandidate>& candidates, double delta);

}  // namespace dpd
