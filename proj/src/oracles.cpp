#include "dpd/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace dpd {

IntegerAssignments::IntegerAssignments(const AgentBlock& block, const EnumerationCaps& caps) {
  const std::size_t p = block.num_int();
  if (p > caps.max_int_vars)
    throw CapExceeded("enumeration: " + std::to_string(p) + " integer variables exceed the cap of " +
                      std::to_string(caps.max_int_vars));
  lo_.resize(static_cast<Eigen::Index>(p));
  hi_.resize(static_cast<Eigen::Index>(p));
  double count = 1.0;
  for (std::size_t k = 0; k < p; ++k) {
    const int j = block.int_idx[k];
    lo_[k] = std::ceil(block.P.lo[j] - kTol.integrality);
    hi_[k] = std::floor(block.P.hi[j] + kTol.integrality);
    count *= std::max(0.0, hi_[k] - lo_[k] + 1.0);
  }
  if (count > static_cast<double>(caps.max_points))
    throw CapExceeded("enumeration: integer grid of " + std::to_string(count) + " points exceeds the cap");
  count_ = static_cast<std::size_t>(count);
}

IntegerAssignments::iterator IntegerAssignments::begin() const {
  iterator it;
  if (count_ == 0) return it;
  it.owner_ = this;
  it.current_ = lo_;
  it.done_ = false;
  return it;
}

IntegerAssignments::iterator& IntegerAssignments::iterator::operator++() {
  for (Eigen::Index k = current_.size() - 1; k >= 0; --k) {
    if (current_[k] < owner_->hi_[k]) {
      current_[k] += 1.0;
      return *this;
    }
    current_[k] = owner_->lo_[k];
  }
  done_ = true;
  return *this;
}

namespace {

std::vector<int> continuous_indices(const AgentBlock& block) {
  std::vector<int> out;
  for (int j = 0; j < block.n(); ++j)
    if (!block.is_integer(j)) out.push_back(j);
  return out;
}

Vector with_integers(const AgentBlock& block, const Vector& assignment) {
  Vector x = Vector::Zero(block.n());
  for (std::size_t k = 0; k < block.num_int(); ++k) x[block.int_idx[k]] = assignment[static_cast<Eigen::Index>(k)];
  return x;
}

// The continuous slice { w : D_C w <= d - D_I k, lo_C <= w <= hi_C } of one assignment.
struct Slice {
  Matrix DC;
  Vector rhs;
  Vector lo;
  Vector hi;
};

Slice make_slice(const AgentBlock& block, const std::vector<int>& cont, const Vector& x_int) {
  Slice s;
  const auto q = static_cast<Eigen::Index>(cont.size());
  s.DC.resize(block.P.D.rows(), q);
  s.lo.resize(q);
  s.hi.resize(q);
  for (Eigen::Index k = 0; k < q; ++k) {
    s.DC.col(k) = block.P.D.col(cont[k]);
    s.lo[k] = block.P.lo[cont[k]];
    s.hi[k] = block.P.hi[cont[k]];
  }
  s.rhs = block.P.d - block.P.D * x_int;  // x_int is zero on continuous coordinates
  return s;
}

bool slice_feasible(const Slice& s) {
  if (s.lo.size() == 0) return (s.rhs.array() >= -kTol.feasibility).all();
  LinearProgram lp = LinearProgram::with_variables(s.lo.size());
  lp.G = s.DC;
  lp.h = s.rhs;
  lp.lo = s.lo;
  lp.hi = s.hi;
  return solve_lp(lp).status == LPStatus::optimal;
}

// Vertices of a slice by trying every active set of size q.
std::vector<Vector> slice_vertices(const Slice& s) {
  const auto q = static_cast<int>(s.lo.size());
  const auto m = static_cast<int>(s.DC.rows());
  const int R = m + 2 * q;
  Matrix rows(R, q);
  Vector rhs(R);
  rows.topRows(m) = s.DC;
  rhs.head(m) = s.rhs;
  rows.middleRows(m, q) = Matrix::Identity(q, q);
  rhs.segment(m, q) = s.hi;
  rows.bottomRows(q) = -Matrix::Identity(q, q);
  rhs.tail(q) = -s.lo;

  std::vector<Vector> out;
  std::vector<int> pick(q);
  for (int k = 0; k < q; ++k) pick[k] = k;
  while (true) {
    Matrix B(q, q);
    Vector r(q);
    for (int k = 0; k < q; ++k) {
      B.row(k) = rows.row(pick[k]);
      r[k] = rhs[pick[k]];
    }
    Eigen::FullPivLU<Matrix> lu(B);
    if (lu.rank() == q) {
      const Vector w = lu.solve(r);
      const double scale = 1.0 + w.cwiseAbs().maxCoeff();
      if (((rows * w - rhs).array() <= 1e-9 * scale).all()) {
        bool dup = false;
        for (const Vector& o : out)
          if ((o - w).cwiseAbs().maxCoeff() <= 1e-9 * scale) dup = true;
        if (!dup) out.push_back(w);
      }
    }
    int k = q - 1;
    while (k >= 0 && pick[k] == R - q + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int l = k + 1; l < q; ++l) pick[l] = pick[l - 1] + 1;
  }
  return out;
}

}  // namespace

OracleMin oracle_min_over_X(const AgentBlock& block, const Vector& w, const EnumerationCaps& caps) {
  const std::vector<int> cont = continuous_indices(block);
  OracleMin best;
  bool found = false;
  for (const Vector& k : IntegerAssignments(block, caps)) {
    Vector x = with_integers(block, k);
    const Slice s = make_slice(block, cont, x);
    if (cont.empty()) {
      if (!(s.rhs.array() >= -kTol.feasibility).all()) continue;
    } else {
      LinearProgram lp = LinearProgram::with_variables(static_cast<Eigen::Index>(cont.size()));
      for (std::size_t c = 0; c < cont.size(); ++c) lp.objective[static_cast<Eigen::Index>(c)] = w[cont[c]];
      lp.G = s.DC;
      lp.h = s.rhs;
      lp.lo = s.lo;
      lp.hi = s.hi;
      const LPSolution sol = solve_lp(lp);
      if (sol.status != LPStatus::optimal) continue;
      for (std::size_t c = 0; c < cont.size(); ++c) x[cont[c]] = sol.x[static_cast<Eigen::Index>(c)];
    }
    const double val = w.dot(x);
    if (!found || val < best.value) {
      best.value = val;
      best.argmin.x = x;
      found = true;
    }
  }
  if (!found) throw InfeasibleBlock("oracle: block has no mixed-integer point");
  return best;
}

std::vector<Vector> enumerate_hull_points(const AgentBlock& block, const EnumerationCaps& caps) {
  const std::vector<int> cont = continuous_indices(block);
  if (cont.size() > 4) throw CapExceeded("enumeration: vertex enumeration supports at most 4 continuous coordinates");
  std::vector<Vector> out;
  for (const Vector& k : IntegerAssignments(block, caps)) {
    const Vector x = with_integers(block, k);
    const Slice s = make_slice(block, cont, x);
    if (cont.empty()) {
      if ((s.rhs.array() >= -kTol.feasibility).all()) out.push_back(x);
      continue;
    }
    for (const Vector& w : slice_vertices(s)) {
      Vector full = x;
      for (std::size_t c = 0; c < cont.size(); ++c) full[cont[c]] = w[static_cast<Eigen::Index>(c)];
      out.push_back(full);
    }
  }
  return out;
}

OracleSubproblem oracle_subproblem(const AgentBlock& block, const Vector& y, double M, const EnumerationCaps& caps) {
  const std::vector<Vector> pts = enumerate_hull_points(block, caps);
  if (pts.empty()) throw InfeasibleBlock("oracle: block has no mixed-integer point");
  const auto K = static_cast<Eigen::Index>(pts.size());
  const Eigen::Index S = block.num_coupling();
  LinearProgram lp = LinearProgram::with_variables(K + 1);
  lp.G.resize(S, K + 1);
  lp.E = Matrix::Zero(1, K + 1);
  for (Eigen::Index k = 0; k < K; ++k) {
    lp.objective[k] = block.c.dot(pts[k]);
    lp.G.col(k) = block.A * pts[k];
    lp.E(0, k) = 1.0;
  }
  lp.objective[K] = M;
  lp.G.col(K).setConstant(-1.0);
  lp.h = y;
  lp.f = Vector::Ones(1);
  lp.lo.setZero();
  const LPSolution sol = solve_lp(lp);
  if (sol.status != LPStatus::optimal) throw NumericalFailure("oracle: subproblem LP not optimal");
  OracleSubproblem out;
  out.cost = sol.obj;
  out.v = sol.x[K];
  out.z = Vector::Zero(block.n());
  for (Eigen::Index k = 0; k < K; ++k) out.z += sol.x[k] * pts[k];
  return out;
}

OracleRestrictedLP oracle_restricted_lp(const CoupledProblem& problem, const Vector& sigma, const EnumerationCaps& caps) {
  std::vector<std::vector<Vector>> pts(problem.N());
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < problem.N(); ++i) {
    pts[i] = enumerate_hull_points(problem.blocks[i], caps);
    if (pts[i].empty()) throw InfeasibleBlock("oracle: block " + std::to_string(i) + " has no mixed-integer point");
    total += static_cast<Eigen::Index>(pts[i].size());
  }
  const Eigen::Index S = problem.S();
  const auto N = static_cast<Eigen::Index>(problem.N());
  LinearProgram lp = LinearProgram::with_variables(total);
  lp.G.resize(S, total);
  lp.E = Matrix::Zero(N, total);
  lp.h = problem.b - sigma;
  lp.f = Vector::Ones(N);
  lp.lo.setZero();
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < problem.N(); ++i) {
    for (const Vector& x : pts[i]) {
      lp.objective[col] = problem.blocks[i].c.dot(x);
      lp.G.col(col) = problem.blocks[i].A * x;
      lp.E(static_cast<Eigen::Index>(i), col) = 1.0;
      ++col;
    }
  }
  const LPSolution sol = solve_lp(lp);
  OracleRestrictedLP out;
  if (sol.status != LPStatus::optimal) return out;
  out.feasible = true;
  out.value = sol.obj;
  col = 0;
  for (std::size_t i = 0; i < problem.N(); ++i) {
    Vector z = Vector::Zero(problem.blocks[i].n());
    for (const Vector& x : pts[i]) z += sol.x[col++] * x;
    out.z.push_back(z);
  }
  return out;
}

OracleGlobal oracle_global_milp(const CoupledProblem& problem, std::size_t max_agents) {
  if (problem.N() > max_agents)
    throw CapExceeded("oracle: joint branch-and-bound limited to " + std::to_string(max_agents) + " agents");
  Eigen::Index n = 0, rows = 0;
  for (const AgentBlock& b : problem.blocks) {
    n += b.n();
    rows += b.P.D.rows();
  }
  const Eigen::Index S = problem.S();
  MILPInstance inst;
  inst.lp = LinearProgram::with_variables(n);
  inst.lp.G = Matrix::Zero(rows + S, n);
  inst.lp.h.resize(rows + S);
  Eigen::Index off = 0, r = 0;
  for (const AgentBlock& b : problem.blocks) {
    inst.lp.objective.segment(off, b.n()) = b.c;
    inst.lp.G.block(r, off, b.P.D.rows(), b.n()) = b.P.D;
    inst.lp.h.segment(r, b.P.D.rows()) = b.P.d;
    inst.lp.G.block(rows, off, S, b.n()) = b.A;
    inst.lp.lo.segment(off, b.n()) = b.P.lo;
    inst.lp.hi.segment(off, b.n()) = b.P.hi;
    for (int j : b.int_idx) inst.int_idx.push_back(static_cast<int>(off) + j);
    off += b.n();
    r += b.P.D.rows();
  }
  inst.lp.h.tail(S) = problem.b;
  const MILPSolution sol = solve_milp(inst);
  OracleGlobal out;
  out.status = sol.status;
  if (sol.status != MILPStatus::optimal) return out;
  out.value = sol.obj;
  off = 0;
  for (const AgentBlock& b : problem.blocks) {
    out.x.push_back(sol.x.segment(off, b.n()));
    off += b.n();
  }
  return out;
}

OracleGlobal oracle_global_enumerate(const CoupledProblem& problem, const EnumerationCaps& caps) {
  const std::size_t N = problem.N();
  const Eigen::Index S = problem.S();
  std::vector<std::vector<int>> cont(N);
  std::vector<std::vector<Vector>> choices(N);  // integer assignments with a nonempty slice
  double joint = 1.0;
  Eigen::Index ncont = 0, nrows = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const AgentBlock& b = problem.blocks[i];
    cont[i] = continuous_indices(b);
    for (const Vector& k : IntegerAssignments(b, caps)) {
      const Vector x = with_integers(b, k);
      if (slice_feasible(make_slice(b, cont[i], x))) choices[i].push_back(x);
    }
    if (choices[i].empty()) throw InfeasibleBlock("oracle: block " + std::to_string(i) + " has no mixed-integer point");
    joint *= static_cast<double>(choices[i].size());
    ncont += static_cast<Eigen::Index>(cont[i].size());
    nrows += b.P.D.rows();
  }
  if (joint > static_cast<double>(caps.max_points)) throw CapExceeded("oracle: joint integer grid exceeds the cap");

  // Continuous LP template: block-diagonal slices plus coupling rows.
  LinearProgram lp = LinearProgram::with_variables(ncont);
  lp.G = Matrix::Zero(nrows + S, ncont);
  lp.h.resize(nrows + S);
  {
    Eigen::Index off = 0, r = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const AgentBlock& b = problem.blocks[i];
      for (std::size_t c = 0; c < cont[i].size(); ++c) {
        const Eigen::Index col = off + static_cast<Eigen::Index>(c);
        lp.objective[col] = b.c[cont[i][c]];
        lp.G.block(r, col, b.P.D.rows(), 1) = b.P.D.col(cont[i][c]);
        lp.G.block(nrows, col, S, 1) = b.A.col(cont[i][c]);
        lp.lo[col] = b.P.lo[cont[i][c]];
        lp.hi[col] = b.P.hi[cont[i][c]];
      }
      off += static_cast<Eigen::Index>(cont[i].size());
      r += b.P.D.rows();
    }
  }

  OracleGlobal best;
  std::vector<std::size_t> idx(N, 0);
  while (true) {
    double fixed_cost = 0.0;
    Vector usage = Vector::Zero(S);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const AgentBlock& b = problem.blocks[i];
      const Vector& x = choices[i][idx[i]];
      fixed_cost += b.c.dot(x);
      usage += b.A * x;
      lp.h.segment(r, b.P.D.rows()) = b.P.d - b.P.D * x;
      r += b.P.D.rows();
    }
    lp.h.tail(S) = problem.b - usage;
    double value = kInf;
    Vector w;
    if (ncont == 0) {
      if ((lp.h.array() >= -kTol.feasibility).all()) value = fixed_cost;
    } else {
      const LPSolution sol = solve_lp(lp);
      if (sol.status == LPStatus::optimal) {
        value = fixed_cost + sol.obj;
        w = sol.x;
      }
    }
    if (value < kInf && (best.status != MILPStatus::optimal || value < best.value)) {
      best.status = MILPStatus::optimal;
      best.value = value;
      best.x.clear();
      Eigen::Index off = 0;
      for (std::size_t i = 0; i < N; ++i) {
        Vector x = choices[i][idx[i]];
        for (std::size_t c = 0; c < cont[i].size(); ++c) x[cont[i][c]] = w[off + static_cast<Eigen::Index>(c)];
        off += static_cast<Eigen::Index>(cont[i].size());
        best.x.push_back(x);
      }
    }
    std::size_t a = N;
    while (a > 0) {
      --a;
      if (++idx[a] < choices[a].size()) break;
      idx[a] = 0;
      if (a == 0) return best;
    }
    if (N == 0) return best;
  }
}

}  // namespace dpd
