#include "dpd/bounds.hpp"

#include <algorithm>

namespace dpd {

namespace {

const SlaterCertificate& need(const std::optional<SlaterCertificate>& cert, const char* what) {
  if (!cert) throw MissingSlater(std::string(what) + ": no Slater certificate");
  return *cert;
}

}  // namespace

double gamma(const AgentBlock& block) {
  const MILPSolution lo = solve_milp(block.milp(block.c));
  const MILPSolution hi = solve_milp(block.milp(-block.c));
  if (lo.status != MILPStatus::optimal || hi.status != MILPStatus::optimal)
    throw InfeasibleBlock("gamma: X_i is empty");
  return std::max(0.0, -hi.obj - lo.obj);
}

std::optional<SlaterCertificate> slater(const CoupledProblem& problem, const Vector& sigma,
                                        const std::vector<Vector>& candidate) {
  if (candidate.size() != problem.N()) throw InvalidInput("slater: one candidate point per agent required");
  SlaterCertificate cert;
  Vector slack = problem.b - sigma;
  for (std::size_t i = 0; i < problem.N(); ++i) {
    slack -= problem.blocks[i].A * candidate[i];
    cert.J_sl += problem.blocks[i].c.dot(candidate[i]);
  }
  cert.zeta = slack.minCoeff();
  if (!(cert.zeta > kTol.feasibility)) return std::nullopt;
  cert.point = candidate;
  return cert;
}

double bound_apriori(const CoupledProblem& problem, const Vector& sigma,
                     const std::optional<SlaterCertificate>& cert, const std::vector<double>& gammas) {
  const SlaterCertificate& c = need(cert, "bound_apriori");
  const double gmax = gammas.empty() ? 0.0 : *std::max_element(gammas.begin(), gammas.end());
  const double N = static_cast<double>(problem.N());
  return (static_cast<double>(problem.S()) + N * sigma.lpNorm<Eigen::Infinity>() / c.zeta) * gmax;
}

APosteriori bound_aposteriori(const CoupledProblem& problem, const std::vector<Vector>& z_star,
                              const std::vector<Vector>& x, const Vector& sigma,
                              const std::optional<SlaterCertificate>& cert) {
  const SlaterCertificate& c = need(cert, "bound_aposteriori");
  APosteriori out;
  double cz = 0.0;
  for (std::size_t i = 0; i < problem.N(); ++i) {
    const AgentBlock& b = problem.blocks[i];
    const double zi = b.c.dot(z_star[i]);
    cz += zi;
    if (!b.contains(z_star[i])) {
      out.I_R.push_back(static_cast<int>(i));
      out.value += b.c.dot(x[i]) - zi;
    }
  }
  out.value += sigma.lpNorm<Eigen::Infinity>() / c.zeta * (c.J_sl - cz);
  return out;
}

double finite_time_gamma(std::size_t N, const std::optional<SlaterCertificate>& cert,
                         const std::vector<double>& gammas) {
  const SlaterCertificate& c = need(cert, "finite_time_gamma");
  double sum = 0.0;
  for (double g : gammas) sum += g;
  return static_cast<double>(N) / c.zeta * sum;
}

double bound_finite_time(const Vector& x_cost, const Vector& lp_cost, const Matrix& mu, const Vector& epsilons,
                         double Gamma_value, const Vector& sigma_ft) {
  double out = (x_cost - lp_cost).sum();
  for (Eigen::Index i = 0; i < mu.rows(); ++i) out += epsilons[i] * mu.row(i).lpNorm<1>();
  return out + Gamma_value * sigma_ft.lpNorm<Eigen::Infinity>();
}

BoundsReport compute_bounds(const CoupledProblem& problem, const RunTrace& trace,
                            const std::vector<SlaterCandidate>& candidates, double delta) {
  BoundsReport rep;
  for (const AgentBlock& b : problem.blocks) rep.gammas.push_back(gamma(b));
  rep.slater_source = "none";
  auto consider = [&](const std::string& name, const std::vector<Vector>& point) {
    if (point.size() != problem.N()) return;
    auto cert = slater(problem, trace.sigma, point);
    if (cert && (!rep.slater || cert->zeta > rep.slater->zeta)) {
      rep.slater = std::move(cert);
      rep.slater_source = name;
    }
  };
  for (const SlaterCandidate& c : candidates) consider(c.name, c.point);
  consider("relaxed", trace.z_final);
  if (!rep.slater) return rep;

  rep.B = bound_apriori(problem, trace.sigma, rep.slater, rep.gammas);
  rep.B_prime = bound_aposteriori(problem, trace.z_final, trace.last_recovered().x, trace.sigma, rep.slater);
  rep.Gamma = finite_time_gamma(problem.N(), rep.slater, rep.gammas);
  if (delta > 0.0) {
    const Vector eps = Vector::Constant(static_cast<Eigen::Index>(problem.N()),
                                        delta / static_cast<double>(problem.N()));
    for (const RoundRecord& r : trace.rounds)
      if (r.recovered)
        rep.B_t.emplace_back(r.t, bound_finite_time(r.x_cost, r.lp_cost, r.mu, eps, *rep.Gamma, trace.sigma));
  }
  return rep;
}

}  // namespace dpd
