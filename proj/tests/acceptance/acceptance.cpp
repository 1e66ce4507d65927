#include "dpd/oracles.hpp"
#include "dpd/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace dpd;
namespace fs = std::filesystem;

namespace {

const fs::path kOut = "acceptance_out";

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Largest |sum_i y_i^t - (b - sigma)| seen over every trace produced here.
struct Ledger {
  int runs = 0;
  double worst_conservation = 0.0;
  int instances = 0;
  int dominance_violations = 0;

  void trace(const RunTrace& tr) {
    ++runs;
    const Vector target = tr.b - tr.sigma;
    for (const RoundRecord& r : tr.rounds)
      worst_conservation =
          std::max(worst_conservation, (r.y.colwise().sum().transpose() - target).lpNorm<Eigen::Infinity>());
  }
  void instance(const RestrictionReport& rep) {
    ++instances;
    if (!(rep.sigma_inf.array() <= rep.sigma_dd.array()).all()) ++dominance_violations;
  }
} ledger;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

GeneratorParams desk(int N, std::uint64_t seed) {
  GeneratorParams gp = preset_params("desk");
  gp.n_agents = N;
  gp.seed = seed;
  return gp;
}

RunConfig asymptotic_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.sigma_mode = SigmaMode::inf;
  cfg.step_kind = StepKind::harmonic;
  cfg.alpha0 = 0.5;
  cfg.T_f = 5000;
  cfg.recovery_every = 0;
  cfg.graph_seed = derive_seed(seed, 1);
  return cfg;
}

RunConfig finite_time_config(const CoupledProblem& p, std::uint64_t seed, int recovery_every) {
  RunConfig cfg;
  cfg.sigma_mode = SigmaMode::ft;
  cfg.step_kind = StepKind::power;
  cfg.alpha0 = 1.0 / default_penalty(p);
  cfg.T_f = 5000;
  cfg.recovery_every = recovery_every;
  cfg.graph_seed = derive_seed(seed, 1);
  return cfg;
}

// ---------------------------------------------------------------------------
// 1: branch-and-bound against exhaustive enumeration

// Independent reference: every integer assignment, and for the continuous part
// (at most two coordinates) every basic point of the remaining rows and box.
double enumerate_milp(const MILPInstance& inst, bool& feasible) {
  const LinearProgram& lp = inst.lp;
  const Eigen::Index n = lp.num_vars();
  std::vector<int> cont;
  std::set<int> ints(inst.int_idx.begin(), inst.int_idx.end());
  for (int j = 0; j < n; ++j)
    if (!ints.count(j)) cont.push_back(j);
  const auto nc = static_cast<Eigen::Index>(cont.size());

  std::vector<long> lo, hi;
  for (int j : inst.int_idx) {
    lo.push_back(static_cast<long>(std::ceil(lp.lo[j])));
    hi.push_back(static_cast<long>(std::floor(lp.hi[j])));
  }
  std::vector<long> cur = lo;
  for (std::size_t k = 0; k < lo.size(); ++k)
    if (lo[k] > hi[k]) {
      feasible = false;
      return 0.0;
    }

  double best = kInf;
  feasible = false;
  Vector x = Vector::Zero(n);
  while (true) {
    for (std::size_t k = 0; k < cur.size(); ++k) x[inst.int_idx[k]] = static_cast<double>(cur[k]);
    // rows over the continuous coordinates: Gc xc <= h - Gi xi, plus box rows
    std::vector<Vector> rows;
    std::vector<double> rhs;
    for (Eigen::Index r = 0; r < lp.G.rows(); ++r) {
      Vector row(nc);
      double fixed = 0.0;
      for (Eigen::Index c = 0; c < nc; ++c) row[c] = lp.G(r, cont[static_cast<std::size_t>(c)]);
      for (int j : inst.int_idx) fixed += lp.G(r, j) * x[j];
      rows.push_back(row);
      rhs.push_back(lp.h[r] - fixed);
    }
    for (Eigen::Index c = 0; c < nc; ++c) {
      Vector e = Vector::Zero(nc);
      e[c] = 1.0;
      rows.push_back(e);
      rhs.push_back(lp.hi[cont[static_cast<std::size_t>(c)]]);
      rows.push_back(-e);
      rhs.push_back(-lp.lo[cont[static_cast<std::size_t>(c)]]);
    }
    auto try_point = [&](const Vector& xc) {
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].dot(xc) > rhs[r] + 1e-9) return;
      Vector full = x;
      for (Eigen::Index c = 0; c < nc; ++c) full[cont[static_cast<std::size_t>(c)]] = xc[c];
      feasible = true;
      best = std::min(best, lp.objective.dot(full));
    };
    if (nc == 0) {
      try_point(Vector(0));
    } else if (nc == 1) {
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (std::abs(rows[r][0]) > 1e-12) try_point(Vector::Constant(1, rhs[r] / rows[r][0]));
    } else {
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t q = r + 1; q < rows.size(); ++q) {
          Eigen::Matrix2d M;
          M << rows[r][0], rows[r][1], rows[q][0], rows[q][1];
          if (std::abs(M.determinant()) < 1e-12) continue;
          try_point(M.inverse() * Eigen::Vector2d(rhs[r], rhs[q]));
        }
    }
    std::size_t k = cur.size();
    while (k > 0) {
      --k;
      if (cur[k] < hi[k]) {
        ++cur[k];
        break;
      }
      cur[k] = lo[k];
      if (k == 0) return best;
    }
    if (cur.empty()) return best;
  }
}

MILPInstance random_milp(Rng& rng) {
  const int p = 1 + static_cast<int>(rng.uniform() * 10.0);  // 1..10 integer variables
  const int q = static_cast<int>(rng.uniform() * 3.0);        // 0..2 continuous
  const int m = 1 + static_cast<int>(rng.uniform() * 5.0);
  const int n = p + q;
  // keep the grid enumerable: binaries past five integer variables
  const double width = p > 5 ? 1.0 : 3.0;
  MILPInstance inst;
  inst.lp = LinearProgram::with_variables(n);
  for (int j = 0; j < n; ++j) {
    inst.lp.objective[j] = rng.uniform(-5.0, 5.0);
    inst.lp.lo[j] = j < p ? -std::floor(width / 2.0) : rng.uniform(-3.0, 0.0);
    inst.lp.hi[j] = j < p ? inst.lp.lo[j] + width : rng.uniform(0.0, 3.0);
  }
  inst.lp.G = Matrix(m, n);
  inst.lp.h = Vector(m);
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) inst.lp.G(r, j) = rng.uniform(-1.0, 1.0);
    inst.lp.h[r] = rng.uniform(-0.5, 2.0);
  }
  for (int j = 0; j < p; ++j) inst.int_idx.push_back(j);
  return inst;
}

Outcome criterion1() {
  Rng rng(derive_seed(1, 1));
  int agree = 0, feasible = 0;
  std::string first_bad;
  for (int k = 0; k < 200; ++k) {
    const MILPInstance inst = random_milp(rng);
    bool ref_feasible = false;
    const double ref = enumerate_milp(inst, ref_feasible);
    const MILPSolution s = solve_milp(inst);
    bool ok;
    if (!ref_feasible) ok = s.status == MILPStatus::infeasible;
    else ok = s.status == MILPStatus::optimal && std::abs(s.obj - ref) <= 1e-6;
    feasible += ref_feasible;
    if (ok) ++agree;
    else if (first_bad.empty()) first_bad = " first mismatch at instance " + std::to_string(k);
  }
  return {agree == 200, std::to_string(agree) + "/200 agree (" + std::to_string(feasible) + " feasible)" + first_bad};
}

// ---------------------------------------------------------------------------
// 2: subproblem against the full-enumeration master

Outcome criterion2() {
  Rng rng(derive_seed(2, 1));
  int ok = 0;
  double worst_cost = 0.0, worst_cs = 0.0;
  for (int k = 0; k < 100; ++k) {
    const CoupledProblem p = generate_random(desk(1, derive_seed(2, 100 + static_cast<std::uint64_t>(k))));
    const AgentBlock& b = p.blocks[0];
    const Vector L = compute_L(b);
    Vector y(p.S());
    for (Eigen::Index s = 0; s < y.size(); ++s) y[s] = L[s] + rng.uniform(-1.0, 6.0);
    const double M = 10.0 * (b.c.lpNorm<1>() + 1.0);
    ColumnPool pool;
    const SubproblemResult r = evaluate(b, y, M, pool);
    const OracleSubproblem o = oracle_subproblem(b, y, M);
    const double dc = std::abs(r.cost - o.cost);
    const Vector slack = y + Vector::Constant(y.size(), r.v) - b.A * r.z;
    double cs = std::abs((M - r.mu.sum()) * r.v);
    for (Eigen::Index s = 0; s < y.size(); ++s) cs = std::max(cs, std::abs(r.mu[s] * slack[s]));
    worst_cost = std::max(worst_cost, dc);
    worst_cs = std::max(worst_cs, cs);
    const bool good = dc <= 1e-6 && r.mu.minCoeff() >= 0.0 && r.mu.sum() <= M + 1e-9 &&
                      slack.minCoeff() >= -kTol.feasibility && cs <= kTol.complementarity;
    ok += good;
  }
  return {ok == 100, std::to_string(ok) + "/100 exact; max cost error " + fmt("%.2e", worst_cost) +
                         ", max complementarity " + fmt("%.2e", worst_cs)};
}

// ---------------------------------------------------------------------------
// 3: multipliers against finite differences

Outcome criterion3() {
  Rng rng(derive_seed(3, 1));
  int smooth = 0, good = 0, kinks = 0;
  for (int k = 0; k < 100; ++k) {
    const CoupledProblem p = generate_random(desk(1, derive_seed(3, 100 + static_cast<std::uint64_t>(k))));
    const AgentBlock& b = p.blocks[0];
    const Vector L = compute_L(b);
    Vector y(p.S());
    for (Eigen::Index s = 0; s < y.size(); ++s) y[s] = L[s] + rng.uniform(-1.0, 6.0);
    ColumnPool pool;
    GradientCheckOptions opts;
    opts.step = 1e-4;
    opts.seed = static_cast<std::uint64_t>(k);
    const GradientReport g = gradient_check(b, y, 10.0 * (b.c.lpNorm<1>() + 1.0), pool, opts);
    if (g.kink) {
      ++kinks;
      continue;
    }
    ++smooth;
    good += g.max_abs_error <= 1e-3;
  }
  const bool pass = smooth > 0 && good >= 0.9 * smooth;
  return {pass, std::to_string(good) + "/" + std::to_string(smooth) + " smooth points within 1e-3, " +
                    std::to_string(kinks) + " kinks flagged"};
}

// ---------------------------------------------------------------------------
// 4 and 7: long sigma_inf runs on desk instances

struct AsymptoticStudy {
  int solvable = 0;
  int skipped = 0;
  int sf_violations = 0;
  int min_integral = 1 << 30;
  int vertex_violations = 0;
  int infeasible_recoveries = 0;
  double worst_excess = -kInf;
};

int integral_blocks(const CoupledProblem& p, const std::vector<Vector>& z) {
  int n = 0;
  for (std::size_t i = 0; i < p.N(); ++i) {
    bool integral = true;
    for (int j : p.blocks[i].int_idx) integral = integral && std::abs(z[i][j] - std::round(z[i][j])) <= kTol.integrality;
    n += integral;
  }
  return n;
}

AsymptoticStudy asymptotic_study() {
  AsymptoticStudy st;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const std::uint64_t seed = derive_seed(4, k);
    const CoupledProblem p = generate_random(desk(20, seed));
    const RunConfig cfg = asymptotic_config(seed);
    const PipelineResult r = run_pipeline(p, cfg);
    ledger.instance(r.restriction);
    if (!r.trace) {
      ++st.skipped;
      continue;
    }
    ++st.solvable;
    ledger.trace(*r.trace);
    const int nz = integral_blocks(p, r.trace->z_final);
    st.min_integral = std::min(st.min_integral, nz);
    if (nz < static_cast<int>(p.N()) - static_cast<int>(p.S())) ++st.sf_violations;
    if (integral_blocks(p, r.restricted.z) < static_cast<int>(p.N()) - static_cast<int>(p.S())) ++st.vertex_violations;

    const RoundRecord& last = r.trace->last();
    bool member = true;
    for (std::size_t i = 0; i < p.N(); ++i) member = member && p.blocks[i].contains(last.x[i]);
    const double excess = (coupling_usage(p, last.x) - p.b).maxCoeff();
    st.worst_excess = std::max(st.worst_excess, excess);
    if (!member || excess > 1e-7) ++st.infeasible_recoveries;
  }
  return st;
}

Outcome criterion4(const AsymptoticStudy& st) {
  return {st.solvable > 0 && st.sf_violations == 0,
          std::to_string(st.sf_violations) + " of " + std::to_string(st.solvable) +
              " runs below N-S integral blocks (fewest " + std::to_string(st.min_integral) + " of 20); " +
              std::to_string(st.skipped) + " skipped with infeasible restricted LP; centralized vertex violations " +
              std::to_string(st.vertex_violations)};
}

Outcome criterion7(const AsymptoticStudy& st) {
  return {st.solvable > 0 && st.infeasible_recoveries == 0,
          std::to_string(st.infeasible_recoveries) + " of " + std::to_string(st.solvable) +
              " recovered vectors infeasible; worst row excess " + fmt("%.3g", st.worst_excess)};
}

// ---------------------------------------------------------------------------
// 6: convergence of the master cost

Outcome criterion6() {
  int tested = 0, close = 0;
  double worst = 0.0;
  std::string per;
  for (std::uint64_t k = 0; tested < 20 && k < 400; ++k) {
    const int N = 2 + static_cast<int>(k % 7);  // 2..8
    const std::uint64_t seed = derive_seed(6, k);
    const CoupledProblem p = generate_random(desk(N, seed));
    const RestrictionReport rep = compute_report(p, 0.0);
    ledger.instance(rep);
    const OracleRestrictedLP q = oracle_restricted_lp(p, rep.sigma_inf);
    if (!q.feasible) continue;
    ++tested;
    RunConfig cfg = asymptotic_config(seed);
    RunOptions opts;
    opts.T_f = 5000;
    opts.recovery_every = 0;
    const Graph g = erdos_renyi_connected(N, cfg.graph_p, cfg.graph_seed);
    const RunTrace tr = run(p, g, rep.sigma_inf, cfg.step(), default_penalty(p), opts);
    ledger.trace(tr);
    const double rel = std::abs(tr.last().master_cost() - q.value) / std::abs(q.value);
    worst = std::max(worst, rel);
    close += rel <= 1e-3;
    per += " " + fmt("%.1e", rel);
  }
  return {tested == 20 && close == 20, std::to_string(close) + "/" + std::to_string(tested) +
                                           " within 1e-3 (worst " + fmt("%.2e", worst) + "); rel errors:" + per};
}

// ---------------------------------------------------------------------------
// 8: finite-time feasibility under sigma_ft

Outcome criterion8() {
  int solvable = 0, skipped = 0, never = 0, broken = 0, latest = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const std::uint64_t seed = derive_seed(8, k);
    const CoupledProblem p = generate_random(desk(20, seed));
    const RunConfig cfg = finite_time_config(p, seed, 10);
    const PipelineResult r = run_pipeline(p, cfg);
    ledger.instance(r.restriction);
    if (!r.trace) {
      ++skipped;
      continue;
    }
    ++solvable;
    ledger.trace(*r.trace);
    if (!r.first_feasible) ++never;
    else if (!r.persists) ++broken;
    else latest = std::max(latest, *r.first_feasible);
  }
  return {solvable > 0 && never == 0 && broken == 0,
          std::to_string(solvable) + " runs: " + std::to_string(never) + " never feasible, " + std::to_string(broken) +
              " lost feasibility; latest first feasible round " + std::to_string(latest) + "; " +
              std::to_string(skipped) + " skipped with infeasible restricted LP"};
}

// ---------------------------------------------------------------------------
// 10: bounds against the exact optimum

Outcome criterion10() {
  int tested = 0, bad_B = 0, bad_Bp = 0, bad_Bt = 0, bt_checked = 0;
  std::map<std::string, int> sources;
  for (std::uint64_t k = 0; tested < 20 && k < 400; ++k) {
    const int N = 4 + static_cast<int>(k % 3);  // 4..6
    const std::uint64_t seed = derive_seed(10, k);
    const CoupledProblem p = generate_random(desk(N, seed));
    const OracleGlobal g = oracle_global_milp(p);
    if (g.status != MILPStatus::optimal) continue;

    const PipelineResult a = run_pipeline(p, asymptotic_config(seed));
    ledger.instance(a.restriction);
    if (!a.trace || !a.bounds || !a.bounds->slater) continue;
    const RunConfig fcfg = finite_time_config(p, seed, 10);
    const PipelineResult f = run_pipeline(p, fcfg, a.restriction);
    if (!f.trace || !f.bounds || !f.bounds->slater || !f.first_feasible) continue;
    ++tested;
    ++sources[a.bounds->slater_source];
    ledger.trace(*a.trace);
    ledger.trace(*f.trace);

    const double gap = a.cost - g.value;
    if (gap > *a.bounds->B + 1e-6) ++bad_B;
    if (gap > a.bounds->B_prime->value + 1e-6) ++bad_Bp;
    for (const auto& [t, val] : f.bounds->B_t) {
      if (t < *f.first_feasible) continue;
      ++bt_checked;
      if (f.trace->rounds[static_cast<std::size_t>(t)].x_cost.sum() - g.value > val + 1e-6) ++bad_Bt;
    }
  }
  std::string src;
  for (const auto& [name, count] : sources) src += " " + name + "=" + std::to_string(count);
  return {tested == 20 && bad_B + bad_Bp + bad_Bt == 0,
          std::to_string(tested) + " instances; violations B " + std::to_string(bad_B) + ", B' " +
              std::to_string(bad_Bp) + ", B^t " + std::to_string(bad_Bt) + " of " + std::to_string(bt_checked) +
              " rounds; Slater sources" + src};
}

// ---------------------------------------------------------------------------
// 11: Monte Carlo comparison

RunConfig montecarlo_config(int trials) {
  RunConfig cfg;
  cfg.T_f = 2000;
  cfg.trials = trials;
  cfg.master_seed = 11;
  return cfg;
}

std::string write_montecarlo(const RunConfig& cfg, const fs::path& dir, std::vector<TrialRow>* keep = nullptr) {
  std::vector<TrialRow> rows;
  for (int k = 0; k < cfg.trials; ++k) rows.push_back(run_trial(cfg, k));
  fs::create_directories(dir);
  std::ostringstream csv, sum;
  write_montecarlo_csv(rows, csv);
  write_montecarlo_summary_csv(summarize(rows), sum);
  std::ofstream(dir / "montecarlo.csv", std::ios::binary) << csv.str();
  std::ofstream(dir / "montecarlo_summary.csv", std::ios::binary) << sum.str();
  if (keep) *keep = rows;
  return csv.str() + sum.str();
}

Outcome criterion11() {
  const RunConfig cfg = montecarlo_config(100);
  std::vector<TrialRow> rows;
  write_montecarlo(cfg, kOut / "montecarlo", &rows);
  for (const TrialRow& r : rows) {
    GeneratorParams gp = cfg.generator;
    gp.seed = r.seed;
    ledger.instance(compute_report(generate_random(gp), 0.0));
  }
  const MonteCarloSummary s = summarize(rows);
  const bool a = s.mean_ratio_inf < s.mean_ratio_dd;
  const bool b = s.solvable_inf >= s.solvable_dd;
  const bool c = s.both_solvable > 0 && s.mean_subopt_inf <= s.mean_subopt_dd;
  const int errors = static_cast<int>(rows.size()) - s.trials;
  return {a && b && c && errors == 0,
          "ratio " + fmt("%.3f", s.mean_ratio_inf) + " vs " + fmt("%.3f", s.mean_ratio_dd) + "; solvable " +
              std::to_string(s.solvable_inf) + " vs " + std::to_string(s.solvable_dd) + "; suboptimality " +
              fmt("%.4f", s.mean_subopt_inf) + " vs " + fmt("%.4f", s.mean_subopt_dd) + " over " +
              std::to_string(s.both_solvable) + " trials; " + std::to_string(errors) + " errored"};
}

// ---------------------------------------------------------------------------
// 12: byte-identical outputs

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string run_once(const fs::path& dir) {
  const std::uint64_t seed = derive_seed(8, 0);
  const CoupledProblem p = generate_random(desk(20, seed));
  RunConfig cfg = finite_time_config(p, seed, 10);
  cfg.T_f = 500;
  const PipelineResult r = run_pipeline(p, cfg);
  fs::create_directories(dir);
  std::ostringstream trace;
  if (r.trace) write_trace_csv(*r.trace, trace);
  std::ofstream(dir / "trace.csv", std::ios::binary) << trace.str();
  std::ofstream(dir / "summary.json", std::ios::binary) << summary_json(p, cfg, r);
  return slurp(dir / "trace.csv") + slurp(dir / "summary.json");
}

std::string run_cli(const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"generator": {"N": 8, "seed": 5}, "sigma": {"mode": "ft"}, "T_f": 300})" << "\n";
  const std::string cli = DPD_CLI_PATH;
  const std::string gen = cli + " generate -c " + cfg.string() + " -o " + (dir / "instance.json").string();
  const std::string run = cli + " run -c " + cfg.string() + " -i " + (dir / "instance.json").string() + " -o " +
                          dir.string() + " > " + (dir / "stdout.txt").string();
  if (std::system(gen.c_str()) != 0 || std::system(run.c_str()) != 0) return "cli failed";
  return slurp(dir / "instance.json") + slurp(dir / "trace.csv") + slurp(dir / "summary.json");
}

Outcome criterion12() {
  const std::string a = run_once(kOut / "determinism" / "run_a");
  const std::string b = run_once(kOut / "determinism" / "run_b");
  const std::string ma = write_montecarlo(montecarlo_config(5), kOut / "determinism" / "mc_a");
  const std::string mb = write_montecarlo(montecarlo_config(5), kOut / "determinism" / "mc_b");
  const std::string ca = run_cli(kOut / "determinism" / "cli_a");
  const std::string cb = run_cli(kOut / "determinism" / "cli_b");
  const bool run_same = a == b && !a.empty();
  const bool mc_same = ma == mb;
  const bool cli_same = ca == cb && ca != "cli failed";
  return {run_same && mc_same && cli_same, std::string("pipeline run ") + (run_same ? "identical" : "differs") +
                                               ", monte carlo " + (mc_same ? "identical" : "differs") + ", cli " +
                                               (cli_same ? "identical" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
  auto wanted = [&](int c) { return only.empty() || only.count(c) > 0; };
  fs::create_directories(kOut);

  int failures = 0;
  auto report = [&](int id, const std::function<Outcome()>& fn) {
    if (!wanted(id)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("criterion %2d %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, criterion1);
  report(2, criterion2);
  report(3, criterion3);
  if (wanted(4) || wanted(7)) {
    const auto t0 = std::chrono::steady_clock::now();
    AsymptoticStudy st;
    try {
      st = asymptotic_study();
    } catch (const std::exception& e) {
      std::printf("asymptotic study failed: %s\n", e.what());
    }
    std::printf("(shared sigma_inf study: %.1f s)\n",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    report(4, [&] { return criterion4(st); });
    report(7, [&] { return criterion7(st); });
  }
  report(6, criterion6);
  report(8, criterion8);
  report(10, criterion10);
  report(11, criterion11);
  report(12, criterion12);
  report(5, [] {
    return Outcome{ledger.runs > 0 && ledger.worst_conservation <= 1e-9,
                   std::to_string(ledger.runs) + " traces, worst |sum y - (b - sigma)| " +
                       fmt("%.2e", ledger.worst_conservation)};
  });
  report(9, [] {
    return Outcome{ledger.instances > 0 && ledger.dominance_violations == 0,
                   std::to_string(ledger.dominance_violations) + " violations over " +
                       std::to_string(ledger.instances) + " instances"};
  });
  return failures == 0 ? 0 : 1;
}
