#include "dpd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dpd {

LinearProgram LinearProgram::with_variables(Eigen::Index n) {
  LinearProgram lp;
  lp.objective = Vector::Zero(n);
  lp.G.resize(0, n);
  lp.h.resize(0);
  lp.E.resize(0, n);
  lp.f.resize(0);
  lp.lo = Vector::Constant(n, -kInf);
  lp.hi = Vector::Constant(n, kInf);
  return lp;
}

void LinearProgram::check() const {
  const auto n = num_vars();
  if (G.cols() != n || E.cols() != n) throw InvalidInput("lp: constraint matrix column count differs from objective");
  if (G.rows() != h.size()) throw InvalidInput("lp: G rows and h length differ");
  if (E.rows() != f.size()) throw InvalidInput("lp: E rows and f length differ");
  if (lo.size() != n || hi.size() != n) throw InvalidInput("lp: bound vectors have wrong length");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (lo[j] > hi[j]) throw InvalidInput("lp: lo > hi for variable " + std::to_string(j));
    if (std::isnan(lo[j]) || std::isnan(hi[j])) throw InvalidInput("lp: NaN bound");
  }
  if (!objective.allFinite() || !G.allFinite() || !h.allFinite() || !E.allFinite() || !f.allFinite())
    throw InvalidInput("lp: non-finite coefficient");
}

const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
  }
  return "?";
}

namespace {

constexpr double kOptTol = 1e-9;
constexpr double kDegenerate = 1e-12;
constexpr int kRefactorEvery = 64;
constexpr int kDegenerateStreakForBland = 30;

// How an original variable is expressed through nonnegative standard-form columns.
struct VarMap {
  int col = -1;
  double sign = 1.0;
  double offset = 0.0;
  int neg_col = -1;  // free variables: x = u+ - u-
};

enum class RowKind { ineq, bound, eq };

struct StdRow {
  RowKind kind;
  int source;  // index into G / variable / E
  bool flipped = false;
};

// Revised simplex over  min cost^T u  s.t.  A u = b, u >= 0, with explicit B^{-1}.
class RevisedSimplex {
 public:
  RevisedSimplex(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
    m_ = static_cast<int>(A_.rows());
    ncol_ = static_cast<int>(A_.cols());
    basic_pos_.assign(ncol_, -1);
    allowed_.assign(ncol_, 1);
  }

  void set_basis(const std::vector<int>& basis) {
    basis_ = basis;
    std::fill(basic_pos_.begin(), basic_pos_.end(), -1);
    for (int r = 0; r < m_; ++r) basic_pos_[basis_[r]] = r;
    refactor();
  }

  void set_cost(Vector c) { cost_ = std::move(c); }
  void disallow(int j) { allowed_[j] = 0; }

  // Returns false when the problem is unbounded in the current phase.
  bool optimize(int& iterations) {
    const int max_iter = 50 * (m_ + ncol_) + 1000;
    int degenerate_streak = 0;
    int since_refactor = 0;
    while (true) {
      if (iterations > max_iter) throw NumericalFailure("simplex: iteration limit reached");
      const Vector pi = dual();
      const bool bland = degenerate_streak >= kDegenerateStreakForBland;
      int enter = -1;
      double best = -kOptTol;
      for (int j = 0; j < ncol_; ++j) {
        if (basic_pos_[j] >= 0 || !allowed_[j]) continue;
        const double d = cost_[j] - pi.dot(A_.col(j));
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return true;

      const Vector w = Binv_ * A_.col(enter);
      int leave = -1;
      double best_ratio = kInf;
      for (int r = 0; r < m_; ++r) {
        if (w[r] <= kTol.pivot) continue;
        const double ratio = std::max(0.0, xB_[r]) / w[r];
        if (leave < 0 || ratio < best_ratio - kDegenerate) {
          best_ratio = ratio;
          leave = r;
        } else if (ratio <= best_ratio + kDegenerate && basis_[r] < basis_[leave]) {
          // Bland: among tied rows the lowest-index basic variable leaves.
          best_ratio = std::min(best_ratio, ratio);
          leave = r;
        }
      }
      if (leave < 0) {
        ray_col_ = enter;
        ray_dir_ = w;
        return false;
      }
      const double theta = std::max(0.0, xB_[leave]) / w[leave];
      degenerate_streak = theta <= kDegenerate ? degenerate_streak + 1 : 0;
      pivot(leave, enter, w, theta);
      ++iterations;
      if (++since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }
    }
  }

  void pivot(int leave, int enter, const Vector& w, double theta) {
    xB_ -= theta * w;
    xB_[leave] = theta;
    const double piv = w[leave];
    Binv_.row(leave) /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == leave || w[r] == 0.0) continue;
      Binv_.row(r) -= w[r] * Binv_.row(leave);
    }
    basic_pos_[basis_[leave]] = -1;
    basis_[leave] = enter;
    basic_pos_[enter] = leave;
  }

  void refactor() {
    if (m_ == 0) {
      Binv_.resize(0, 0);
      xB_.resize(0);
      return;
    }
    Matrix B(m_, m_);
    for (int r = 0; r < m_; ++r) B.col(r) = A_.col(basis_[r]);
    Eigen::PartialPivLU<Matrix> lu(B);
    Binv_ = lu.inverse();
    xB_ = Binv_ * b_;
    for (int r = 0; r < m_; ++r)
      if (xB_[r] < 0.0 && xB_[r] > -1e-11) xB_[r] = 0.0;
  }

  Vector dual() const {
    Vector cB(m_);
    for (int r = 0; r < m_; ++r) cB[r] = cost_[basis_[r]];
    return Binv_.transpose() * cB;
  }

  double objective() const {
    double v = 0.0;
    for (int r = 0; r < m_; ++r) v += cost_[basis_[r]] * xB_[r];
    return v;
  }

  // Tries to replace basic column `r` (an artificial at zero) with an allowed column.
  bool pivot_out(int r, int first_artificial) {
    const Eigen::RowVectorXd row = Binv_.row(r) * A_;
    int best = -1;
    double mag = 1e-9;
    for (int j = 0; j < first_artificial; ++j) {
      if (basic_pos_[j] >= 0) continue;
      if (std::abs(row[j]) > mag) {
        mag = std::abs(row[j]);
        best = j;
      }
    }
    if (best < 0) return false;
    const Vector w = Binv_ * A_.col(best);
    pivot(r, best, w, xB_[r] / w[r]);
    return true;
  }

  int rows() const { return m_; }
  int basis_at(int r) const { return basis_[r]; }
  double value_at(int r) const { return xB_[r]; }
  int ray_col() const { return ray_col_; }
  const Vector& ray_dir() const { return ray_dir_; }

 private:
  Matrix A_;
  Vector b_;
  Vector cost_;
  int m_ = 0;
  int ncol_ = 0;
  std::vector<int> basis_;
  std::vector<int> basic_pos_;
  std::vector<char> allowed_;
  Matrix Binv_;
  Vector xB_;
  int ray_col_ = -1;
  Vector ray_dir_;
};

double data_scale(const LinearProgram& lp) {
  double s = 1.0;
  auto upd = [&s](double v) {
    if (std::isfinite(v)) s = std::max(s, std::abs(v));
  };
  for (Eigen::Index i = 0; i < lp.h.size(); ++i) upd(lp.h[i]);
  for (Eigen::Index i = 0; i < lp.f.size(); ++i) upd(lp.f[i]);
  for (Eigen::Index j = 0; j < lp.num_vars(); ++j) {
    upd(lp.lo[j]);
    upd(lp.hi[j]);
  }
  return s;
}

}  // namespace

LPSolution solve_lp(const LinearProgram& lp) {
  lp.check();
  const auto n = static_cast<int>(lp.num_vars());

  std::vector<VarMap> vars(n);
  int ncols = 0;
  std::vector<int> bounded;  // variables needing an explicit u <= hi - lo row
  for (int j = 0; j < n; ++j) {
    VarMap& v = vars[j];
    const bool lo_fin = std::isfinite(lp.lo[j]);
    const bool hi_fin = std::isfinite(lp.hi[j]);
    v.col = ncols++;
    if (lo_fin) {
      v.offset = lp.lo[j];
      if (hi_fin) bounded.push_back(j);
    } else if (hi_fin) {
      v.sign = -1.0;
      v.offset = lp.hi[j];
    } else {
      v.neg_col = ncols++;
    }
  }
  const int n_struct = ncols;

  std::vector<StdRow> rows;
  for (int s = 0; s < lp.num_ineq(); ++s) rows.push_back({RowKind::ineq, s});
  for (int j : bounded) rows.push_back({RowKind::bound, j});
  for (int e = 0; e < lp.num_eq(); ++e) rows.push_back({RowKind::eq, e});
  const int m = static_cast<int>(rows.size());
  int n_slack = 0;
  for (const auto& r : rows)
    if (r.kind != RowKind::eq) ++n_slack;

  // Row coefficients over structural columns and right-hand sides.
  Matrix Astruct = Matrix::Zero(m, n_struct);
  Vector rhs(m);
  auto fill_row = [&](int r, const auto& coeffs, double b) {
    double shifted = b;
    for (int j = 0; j < n; ++j) {
      const double a = coeffs(j);
      if (a == 0.0) continue;
      shifted -= a * vars[j].offset;
      Astruct(r, vars[j].col) += a * vars[j].sign;
      if (vars[j].neg_col >= 0) Astruct(r, vars[j].neg_col) -= a;
    }
    rhs[r] = shifted;
  };
  for (int r = 0; r < m; ++r) {
    const StdRow& row = rows[r];
    if (row.kind == RowKind::ineq) {
      fill_row(r, lp.G.row(row.source), lp.h[row.source]);
    } else if (row.kind == RowKind::eq) {
      fill_row(r, lp.E.row(row.source), lp.f[row.source]);
    } else {
      Astruct(r, vars[row.source].col) = 1.0;
      rhs[r] = lp.hi[row.source] - lp.lo[row.source];
    }
  }

  // Flip rows with negative rhs; slacks of unflipped inequality rows start basic.
  std::vector<int> slack_of(m, -1);
  std::vector<int> basis(m, -1);
  int next_slack = n_struct;
  for (int r = 0; r < m; ++r) {
    if (rows[r].kind != RowKind::eq) slack_of[r] = next_slack++;
    if (rhs[r] < 0.0) {
      rows[r].flipped = true;
      Astruct.row(r) *= -1.0;
      rhs[r] = -rhs[r];
    }
  }
  int n_art = 0;
  for (int r = 0; r < m; ++r)
    if (slack_of[r] < 0 || rows[r].flipped) ++n_art;
  const int first_art = n_struct + n_slack;
  const int total = first_art + n_art;

  Matrix A = Matrix::Zero(m, total);
  A.leftCols(n_struct) = Astruct;
  int next_art = first_art;
  for (int r = 0; r < m; ++r) {
    if (slack_of[r] >= 0) A(r, slack_of[r]) = rows[r].flipped ? -1.0 : 1.0;
    if (slack_of[r] >= 0 && !rows[r].flipped) {
      basis[r] = slack_of[r];
    } else {
      A(r, next_art) = 1.0;
      basis[r] = next_art++;
    }
  }

  LPSolution sol;
  RevisedSimplex simplex(A, rhs);
  simplex.set_basis(basis);

  if (n_art > 0) {
    Vector c1 = Vector::Zero(total);
    c1.tail(n_art).setOnes();
    simplex.set_cost(c1);
    simplex.optimize(sol.iterations);
    if (simplex.objective() > kTol.feasibility) {
      sol.status = LPStatus::infeasible;
      return sol;
    }
    for (int r = 0; r < m; ++r)
      if (simplex.basis_at(r) >= first_art) simplex.pivot_out(r, first_art);
    for (int j = first_art; j < total; ++j) simplex.disallow(j);
  }

  Vector c2 = Vector::Zero(total);
  for (int j = 0; j < n; ++j) {
    c2[vars[j].col] = lp.objective[j] * vars[j].sign;
    if (vars[j].neg_col >= 0) c2[vars[j].neg_col] = -lp.objective[j];
  }
  simplex.set_cost(c2);
  const bool bounded_opt = simplex.optimize(sol.iterations);

  auto to_original = [&](const Vector& u, bool homogeneous) {
    Vector x(n);
    for (int j = 0; j < n; ++j) {
      x[j] = (homogeneous ? 0.0 : vars[j].offset) + vars[j].sign * u[vars[j].col];
      if (vars[j].neg_col >= 0) x[j] -= u[vars[j].neg_col];
    }
    return x;
  };

  if (!bounded_opt) {
    sol.status = LPStatus::unbounded;
    Vector u = Vector::Zero(total);
    u[simplex.ray_col()] = 1.0;
    for (int r = 0; r < m; ++r) u[simplex.basis_at(r)] -= simplex.ray_dir()[r];
    sol.ray = to_original(u, true);
    return sol;
  }

  simplex.refactor();
  Vector u = Vector::Zero(total);
  for (int r = 0; r < m; ++r) u[simplex.basis_at(r)] = std::max(0.0, simplex.value_at(r));
  sol.status = LPStatus::optimal;
  sol.x = to_original(u, false);
  for (int j = 0; j < n; ++j) sol.x[j] = std::clamp(sol.x[j], lp.lo[j], lp.hi[j]);
  sol.obj = lp.objective.dot(sol.x);

  const Vector pi = simplex.dual();
  sol.dual_ineq = Vector::Zero(lp.num_ineq());
  sol.dual_eq = Vector::Zero(lp.num_eq());
  for (int r = 0; r < m; ++r) {
    const double sgn = rows[r].flipped ? -1.0 : 1.0;
    if (rows[r].kind == RowKind::ineq) sol.dual_ineq[rows[r].source] = std::max(0.0, -pi[r] * sgn);
    if (rows[r].kind == RowKind::eq) sol.dual_eq[rows[r].source] = -pi[r] * sgn;
  }
  sol.dual_bounds = lp.objective + lp.G.transpose() * sol.dual_ineq + lp.E.transpose() * sol.dual_eq;

  const LPCertificate cert = certify(lp, sol);
  const double scale = data_scale(lp);
  const double obj_scale = 1.0 + std::abs(sol.obj);
  if (cert.primal_infeasibility > 10 * kTol.feasibility * scale ||
      cert.dual_infeasibility > 10 * kTol.feasibility * (1.0 + lp.objective.cwiseAbs().maxCoeff()) ||
      cert.duality_gap > 10 * kTol.complementarity * obj_scale * scale) {
    throw NumericalFailure("simplex: solution fails its optimality certificate (primal " +
                           std::to_string(cert.primal_infeasibility) + ", dual " +
                           std::to_string(cert.dual_infeasibility) + ", gap " +
                           std::to_string(cert.duality_gap) + ")");
  }
  return sol;
}

LPCertificate certify(const LinearProgram& lp, const LPSolution& sol) {
  LPCertificate c;
  const Vector& x = sol.x;
  const auto n = lp.num_vars();
  for (Eigen::Index s = 0; s < lp.num_ineq(); ++s) {
    const double slack = lp.h[s] - lp.G.row(s).dot(x);
    c.primal_infeasibility = std::max(c.primal_infeasibility, -slack);
    c.dual_infeasibility = std::max(c.dual_infeasibility, -sol.dual_ineq[s]);
    c.complementarity = std::max(c.complementarity, std::abs(sol.dual_ineq[s] * slack));
  }
  for (Eigen::Index e = 0; e < lp.num_eq(); ++e)
    c.primal_infeasibility = std::max(c.primal_infeasibility, std::abs(lp.E.row(e).dot(x) - lp.f[e]));

  double dual_obj = -sol.dual_ineq.dot(lp.h) - sol.dual_eq.dot(lp.f);
  for (Eigen::Index j = 0; j < n; ++j) {
    c.primal_infeasibility = std::max({c.primal_infeasibility, lp.lo[j] - x[j], x[j] - lp.hi[j]});
    const double r = sol.dual_bounds[j];
    if (r > 0.0) {
      if (std::isfinite(lp.lo[j])) {
        dual_obj += r * lp.lo[j];
        c.complementarity = std::max(c.complementarity, r * (x[j] - lp.lo[j]));
      } else {
        c.dual_infeasibility = std::max(c.dual_infeasibility, r);
      }
    } else if (r < 0.0) {
      if (std::isfinite(lp.hi[j])) {
        dual_obj += r * lp.hi[j];
        c.complementarity = std::max(c.complementarity, -r * (lp.hi[j] - x[j]));
      } else {
        c.dual_infeasibility = std::max(c.dual_infeasibility, -r);
      }
    }
  }
  c.dual_objective = dual_obj;
  c.duality_gap = std::abs(lp.objective.dot(x) - dual_obj);
  return c;
}

}  // namespace dpd
