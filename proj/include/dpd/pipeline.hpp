#pragma once

#include "dpd/bounds.hpp"
#include "dpd/network.hpp"
#include "dpd/restriction.hpp"
#include "dpd/subproblem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dpd {

enum class SigmaMode { inf, ft, dd, custom };

SigmaMode parse_sigma_mode(const std::string& s);
const char* to_string(SigmaMode m);

// Defaults for the named generator preset ("desk" or "paper").
GeneratorParams preset_params(const std::string& name);

// Everything a single run or Monte Carlo study needs.  Every field has a default;
// see README for the JSON schema.
struct RunConfig {
  std::string instance;  // path; empty means "generate from `generator`"
  std::string preset = "desk";
  GeneratorParams generator = preset_params("desk");
  double graph_p = 0.2;
  std::uint64_t graph_seed = 1;
  SigmaMode sigma_mode = SigmaMode::inf;
  std::optional<double> delta;  // default: default_delta(S) for ft, 0 otherwise
  Vector sigma_custom;
  StepKind step_kind = StepKind::power;
  double alpha0 = 1.0;
  double exponent = 0.8;
  std::optional<double> M;
  int T_f = 2000;
  int recovery_every = 1;
  int monitor_every = 0;
  bool stop_when_feasible = false;
  bool oracle = false;  // also compute J^MILP by joint branch-and-bound (N <= 8)
  int trials = 100;
  std::uint64_t master_seed = 1;
  std::string output_dir = ".";

  StepSize step() const;
  double delta_for(Eigen::Index S) const;
};

// Parses a JSON config; unknown or mistyped fields raise InvalidInput naming the field.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// delta scaled to instance size: 0.5 * S / 5.
double default_delta(Eigen::Index S);

Vector select_sigma(const RestrictionReport& rep, const RunConfig& cfg);

struct PipelineResult {
  RestrictionReport restriction;
  Vector sigma;
  RestrictedLPResult restricted;
  std::optional<RunTrace> trace;
  std::optional<int> first_feasible;
  bool persists = false;
  std::optional<BoundsReport> bounds;
  double cost = 0.0;  // sum c_i^T x_i at the last recovered round
  bool final_feasible = false;
  std::optional<double> J_milp;
  double M = 0.0;
  // Agents whose final v_i exceeds kTol.feasibility; non-empty suggests M is too small.
  std::vector<int> penalty_active;
};

// restriction -> restricted-LP feasibility precheck -> network run -> bounds.
// An infeasible restricted LP is returned as an outcome (trace left empty).
PipelineResult run_pipeline(const CoupledProblem& problem, const RunConfig& cfg);

// Same, reusing an already computed restriction report.
PipelineResult run_pipeline(const CoupledProblem& problem, const RunConfig& cfg, const RestrictionReport& rep);

std::string summary_json(const CoupledProblem& problem, const RunConfig& cfg, const PipelineResult& res);

struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  double ratio_inf = 0.0;
  double ratio_dd = 0.0;
  bool solvable_inf = false;
  bool solvable_dd = false;
  double q_inf = 0.0;
  double q_dd = 0.0;
  double cost_inf = 0.0;
  double cost_dd = 0.0;
  bool feasible_inf = false;
  bool feasible_dd = false;
  double subopt_inf = 0.0;  // (cost - q*)/|q*| against each method's own q*
  double subopt_dd = 0.0;
  std::string error;
};

struct MonteCarloSummary {
  int trials = 0;
  int solvable_inf = 0;
  int solvable_dd = 0;
  double mean_ratio_inf = 0.0;
  double mean_ratio_dd = 0.0;
  int both_solvable = 0;
  double mean_subopt_inf = 0.0;  // over trials where both are solvable
  double mean_subopt_dd = 0.0;
};

TrialRow run_trial(const RunConfig& cfg, int trial);
MonteCarloSummary summarize(const std::vector<TrialRow>& rows);

// Column order: trial,seed,ratio_inf,ratio_dd,solvable_inf,solvable_dd,q_inf,q_dd,
// cost_inf,cost_dd,feasible_inf,feasible_dd,subopt_inf,subopt_dd,error
void write_montecarlo_csv(const std::vector<TrialRow>& rows, std::ostream& out);
// Column order: metric,this_method,baseline
void write_montecarlo_summary_csv(const MonteCarloSummary& s, std::ostream& out);

}  // namespace dpd
