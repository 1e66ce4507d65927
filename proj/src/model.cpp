#include "dpd/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dpd {

bool AgentBlock::is_integer(int j) const {
  return std::find(int_idx.begin(), int_idx.end(), j) != int_idx.end();
}

MILPInstance AgentBlock::milp(const Vector& objective) const {
  MILPInstance inst;
  inst.lp = LinearProgram::with_variables(n());
  inst.lp.objective = objective;
  inst.lp.G = P.D;
  inst.lp.h = P.d;
  inst.lp.lo = P.lo;
  inst.lp.hi = P.hi;
  inst.int_idx = int_idx;
  return inst;
}

MILPInstance AgentBlock::milp_with_slack(const Vector& x_obj, double t_obj, const Vector& rhs,
                                         double t_hi) const {
  const Eigen::Index nv = n() + 1;
  const Eigen::Index m = P.D.rows();
  const Eigen::Index S = A.rows();
  MILPInstance inst;
  inst.lp = LinearProgram::with_variables(nv);
  inst.lp.objective << x_obj, t_obj;
  inst.lp.G = Matrix::Zero(m + S, nv);
  inst.lp.G.topLeftCorner(m, n()) = P.D;
  inst.lp.G.bottomLeftCorner(S, n()) = A;
  inst.lp.G.bottomRightCorner(S, 1).setConstant(-1.0);
  inst.lp.h.resize(m + S);
  inst.lp.h << P.d, rhs;
  inst.lp.lo << P.lo, 0.0;
  inst.lp.hi << P.hi, t_hi;
  inst.int_idx = int_idx;
  return inst;
}

bool AgentBlock::contains(const Vector& x, double tol_feas, double tol_int) const {
  if (x.size() != n()) return false;
  for (Eigen::Index j = 0; j < n(); ++j)
    if (x[j] < P.lo[j] - tol_feas || x[j] > P.hi[j] + tol_feas) return false;
  if (P.D.rows() > 0 && ((P.D * x - P.d).array() > tol_feas).any()) return false;
  for (int j : int_idx)
    if (std::abs(x[j] - std::round(x[j])) > tol_int) return false;
  return true;
}

bool operator==(const CoupledProblem& a, const CoupledProblem& b) {
  if (a.N() != b.N() || a.b.size() != b.b.size() || a.b != b.b) return false;
  for (std::size_t i = 0; i < a.N(); ++i) {
    const AgentBlock& x = a.blocks[i];
    const AgentBlock& y = b.blocks[i];
    if (x.c.size() != y.c.size() || x.c != y.c) return false;
    if (x.A.rows() != y.A.rows() || x.A.cols() != y.A.cols() || x.A != y.A) return false;
    if (x.P.D.rows() != y.P.D.rows() || x.P.D.cols() != y.P.D.cols() || x.P.D != y.P.D) return false;
    if (x.P.d.size() != y.P.d.size() || x.P.d != y.P.d) return false;
    if (x.P.lo != y.P.lo || x.P.hi != y.P.hi || x.int_idx != y.int_idx) return false;
  }
  return true;
}

std::vector<Violation> validate(const CoupledProblem& problem) {
  std::vector<Violation> out;
  if (problem.N() == 0) out.push_back({-1, "blocks", "N must be at least 1"});
  const Eigen::Index S = problem.S();
  if (S == 0) out.push_back({-1, "b", "S must be at least 1"});
  if (!problem.b.allFinite()) out.push_back({-1, "b", "non-finite entry"});

  for (std::size_t i = 0; i < problem.N(); ++i) {
    const int bi = static_cast<int>(i);
    const AgentBlock& blk = problem.blocks[i];
    const Eigen::Index n = blk.c.size();
    if (n == 0) out.push_back({bi, "c", "block has no variables"});
    if (!blk.c.allFinite()) out.push_back({bi, "c", "non-finite entry"});
    if (blk.A.rows() != S)
      out.push_back({bi, "A", "has " + std::to_string(blk.A.rows()) + " rows, expected S = " + std::to_string(S)});
    if (blk.A.cols() != n) out.push_back({bi, "A", "column count differs from len(c)"});
    else if (!blk.A.allFinite()) out.push_back({bi, "A", "non-finite entry"});
    if (blk.P.D.rows() != blk.P.d.size()) out.push_back({bi, "D", "row count differs from len(d)"});
    if (blk.P.D.rows() > 0 && blk.P.D.cols() != n) out.push_back({bi, "D", "column count differs from len(c)"});
    if (!blk.P.D.allFinite() || !blk.P.d.allFinite()) out.push_back({bi, "D", "non-finite entry"});
    if (blk.P.lo.size() != n || blk.P.hi.size() != n) {
      out.push_back({bi, "lo/hi", "box length differs from len(c)"});
    } else {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!std::isfinite(blk.P.lo[j]) || !std::isfinite(blk.P.hi[j]))
          out.push_back({bi, "lo/hi", "component " + std::to_string(j) + " is not finite"});
        else if (blk.P.lo[j] > blk.P.hi[j])
          out.push_back({bi, "lo/hi", "lo > hi in component " + std::to_string(j)});
      }
    }
    std::set<int> seen;
    for (int j : blk.int_idx) {
      if (j < 0 || j >= n) out.push_back({bi, "int_idx", "index " + std::to_string(j) + " out of range"});
      else if (!seen.insert(j).second) out.push_back({bi, "int_idx", "duplicate index " + std::to_string(j)});
    }
  }
  return out;
}

void require_valid(const CoupledProblem& problem) {
  const auto v = validate(problem);
  if (v.empty()) return;
  std::string msg = "invalid problem: ";
  if (v.front().block >= 0) msg += "block " + std::to_string(v.front().block) + " ";
  msg += v.front().field + ": " + v.front().reason;
  if (v.size() > 1) msg += " (+" + std::to_string(v.size() - 1) + " more)";
  throw InvalidInput(msg);
}

ResourceScale ResourceScale::desk() {
  ResourceScale s;
  s.D = {0.0, 1.0};
  s.d = {1.0, 4.0};
  s.box = {-3.0, 3.0};
  s.c_hat = {-5.0, 0.0};
  s.A = {-1.0, 1.0};
  s.b_loose = {-1.0, 0.0};
  s.b_tight = {-2.5, -2.0};
  return s;
}

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  Rng r(master ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  return r.next_u64();
}

CoupledProblem generate_random(const GeneratorParams& gp) {
  if (gp.n_agents < 1 || gp.S < 1 || gp.p < 0 || gp.q < 0 || gp.p + gp.q < 1 || gp.m < 0)
    throw InvalidInput("generate_random: sizes must be positive");
  const ResourceScale& sc = gp.scale;
  if (sc.box.lo > sc.box.hi) throw InvalidInput("generate_random: empty box interval");
  Rng rng(gp.seed);
  const int n = gp.p + gp.q;

  CoupledProblem prob;
  prob.blocks.reserve(gp.n_agents);
  for (int i = 0; i < gp.n_agents; ++i) {
    AgentBlock blk;
    blk.P.D.resize(gp.m, n);
    for (int r = 0; r < gp.m; ++r)
      for (int j = 0; j < n; ++j) blk.P.D(r, j) = rng.uniform(sc.D);
    blk.P.d.resize(gp.m);
    for (int r = 0; r < gp.m; ++r) blk.P.d[r] = rng.uniform(sc.d);
    blk.P.lo = Vector::Constant(n, sc.box.lo);
    blk.P.hi = Vector::Constant(n, sc.box.hi);

    Vector c_hat(gp.m);
    for (int r = 0; r < gp.m; ++r) c_hat[r] = rng.uniform(sc.c_hat);
    blk.c = gp.m > 0 ? Vector(blk.P.D.transpose() * c_hat) : Vector(Vector::Zero(n));

    blk.A.resize(gp.S, n);
    for (int s = 0; s < gp.S; ++s)
      for (int j = 0; j < n; ++j) blk.A(s, j) = rng.uniform(sc.A);
    for (int j = 0; j < gp.p; ++j) blk.int_idx.push_back(j);
    if (gp.perturb_costs)
      for (int j = 0; j < n; ++j) blk.c[j] += rng.uniform(-1e-6, 1e-6);
    prob.blocks.push_back(std::move(blk));
  }
  const Interval bi = gp.mode == ResourceMode::loose ? sc.b_loose : sc.b_tight;
  prob.b.resize(gp.S);
  for (int s = 0; s < gp.S; ++s) prob.b[s] = gp.n_agents * rng.uniform(bi);
  return prob;
}

}  // namespace dpd
