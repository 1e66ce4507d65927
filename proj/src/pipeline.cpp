#include "dpd/pipeline.hpp"

#include "dpd/oracles.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dpd {

using nlohmann::json;

SigmaMode parse_sigma_mode(const std::string& s) {
  if (s == "inf") return SigmaMode::inf;
  if (s == "ft") return SigmaMode::ft;
  if (s == "dd") return SigmaMode::dd;
  if (s == "custom") return SigmaMode::custom;
  throw InvalidInput("config: sigma must be one of inf, ft, dd, custom (got '" + s + "')");
}

const char* to_string(SigmaMode m) {
  switch (m) {
    case SigmaMode::inf: return "inf";
    case SigmaMode::ft: return "ft";
    case SigmaMode::dd: return "dd";
    case SigmaMode::custom: return "custom";
  }
  return "?";
}

double RunConfig::delta_for(Eigen::Index S) const {
  if (delta) return *delta;
  return sigma_mode == SigmaMode::ft ? default_delta(S) : 0.0;
}

StepSize RunConfig::step() const {
  return step_kind == StepKind::harmonic ? StepSize::harmonic(alpha0) : StepSize::power(alpha0, exponent);
}

GeneratorParams preset_params(const std::string& name) {
  GeneratorParams gp;
  if (name == "paper") return gp;
  if (name != "desk") throw InvalidInput("config: preset must be 'desk' or 'paper' (got '" + name + "')");
  gp.n_agents = 20;
  gp.S = 2;
  gp.p = 2;
  gp.q = 1;
  gp.m = 4;
  gp.scale = ResourceScale::desk();
  return gp;
}

double default_delta(Eigen::Index S) { return 0.5 * static_cast<double>(S) / 5.0; }

namespace {

template <class T>
T get(const json& j, const std::string& name) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw InvalidInput("config: field '" + name + "' has the wrong type");
  }
}

int get_positive_int(const json& j, const std::string& name, int min) {
  const int v = get<int>(j, name);
  if (v < min) throw InvalidInput("config: field '" + name + "' must be >= " + std::to_string(min));
  return v;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed config JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw InvalidInput("config: top level must be an object");
  RunConfig cfg;
  if (doc.contains("preset")) cfg.preset = get<std::string>(doc["preset"], "preset");
  cfg.generator = preset_params(cfg.preset);

  static const std::set<std::string> known = {
      "instance", "preset",   "generator",      "graph",         "sigma",  "schedule",   "M",
      "T_f",      "recovery_every", "monitor_every", "stop_when_feasible", "oracle", "trials",
      "master_seed", "output_dir"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!known.count(it.key())) throw InvalidInput("config: unknown field '" + it.key() + "'");

  if (doc.contains("instance")) cfg.instance = get<std::string>(doc["instance"], "instance");
  if (doc.contains("generator")) {
    const json& g = doc["generator"];
    if (!g.is_object()) throw InvalidInput("config: field 'generator' must be an object");
    for (auto it = g.begin(); it != g.end(); ++it) {
      const std::string k = it.key();
      const std::string name = "generator." + k;
      if (k == "N") cfg.generator.n_agents = get_positive_int(*it, name, 1);
      else if (k == "S") cfg.generator.S = get_positive_int(*it, name, 1);
      else if (k == "p") cfg.generator.p = get_positive_int(*it, name, 0);
      else if (k == "q") cfg.generator.q = get_positive_int(*it, name, 0);
      else if (k == "m") cfg.generator.m = get_positive_int(*it, name, 0);
      else if (k == "seed") cfg.generator.seed = get<std::uint64_t>(*it, name);
      else if (k == "b") {
        const std::string mode = get<std::string>(*it, name);
        if (mode == "loose") cfg.generator.mode = ResourceMode::loose;
        else if (mode == "tight") cfg.generator.mode = ResourceMode::tight;
        else throw InvalidInput("config: field 'generator.b' must be 'loose' or 'tight'");
      } else if (k == "perturb_costs") cfg.generator.perturb_costs = get<bool>(*it, name);
      else throw InvalidInput("config: unknown field '" + name + "'");
    }
  }
  if (doc.contains("graph")) {
    const json& g = doc["graph"];
    if (!g.is_object()) throw InvalidInput("config: field 'graph' must be an object");
    for (auto it = g.begin(); it != g.end(); ++it) {
      if (it.key() == "p") cfg.graph_p = get<double>(*it, "graph.p");
      else if (it.key() == "seed") cfg.graph_seed = get<std::uint64_t>(*it, "graph.seed");
      else throw InvalidInput("config: unknown field 'graph." + it.key() + "'");
    }
    if (!(cfg.graph_p > 0.0 && cfg.graph_p <= 1.0)) throw InvalidInput("config: field 'graph.p' must lie in (0, 1]");
  }
  if (doc.contains("sigma")) {
    const json& s = doc["sigma"];
    if (!s.is_object()) throw InvalidInput("config: field 'sigma' must be an object");
    for (auto it = s.begin(); it != s.end(); ++it) {
      if (it.key() == "mode") cfg.sigma_mode = parse_sigma_mode(get<std::string>(*it, "sigma.mode"));
      else if (it.key() == "delta") cfg.delta = get<double>(*it, "sigma.delta");
      else if (it.key() == "values") {
        const auto v = get<std::vector<double>>(*it, "sigma.values");
        cfg.sigma_custom = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
      } else throw InvalidInput("config: unknown field 'sigma." + it.key() + "'");
    }
    if (cfg.delta && *cfg.delta < 0.0) throw InvalidInput("config: field 'sigma.delta' must be >= 0");
    if (cfg.sigma_mode == SigmaMode::custom && cfg.sigma_custom.size() == 0)
      throw InvalidInput("config: field 'sigma.values' is required for custom mode");
  }
  if (doc.contains("schedule")) {
    const json& s = doc["schedule"];
    if (!s.is_object()) throw InvalidInput("config: field 'schedule' must be an object");
    for (auto it = s.begin(); it != s.end(); ++it) {
      if (it.key() == "kind") {
        const std::string k = get<std::string>(*it, "schedule.kind");
        if (k == "harmonic") cfg.step_kind = StepKind::harmonic;
        else if (k == "power") cfg.step_kind = StepKind::power;
        else throw InvalidInput("config: field 'schedule.kind' must be 'harmonic' or 'power'");
      } else if (it.key() == "alpha0") cfg.alpha0 = get<double>(*it, "schedule.alpha0");
      else if (it.key() == "exponent") cfg.exponent = get<double>(*it, "schedule.exponent");
      else throw InvalidInput("config: unknown field 'schedule." + it.key() + "'");
    }
    try {
      (void)cfg.step();
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string("config: field 'schedule': ") + e.what());
    }
  }
  if (doc.contains("M")) {
    cfg.M = get<double>(doc["M"], "M");
    if (!(*cfg.M > 0.0)) throw InvalidInput("config: field 'M' must be positive");
  }
  if (doc.contains("T_f")) cfg.T_f = get_positive_int(doc["T_f"], "T_f", 0);
  if (doc.contains("recovery_every")) cfg.recovery_every = get_positive_int(doc["recovery_every"], "recovery_every", 0);
  if (doc.contains("monitor_every")) cfg.monitor_every = get_positive_int(doc["monitor_every"], "monitor_every", 0);
  if (doc.contains("stop_when_feasible")) cfg.stop_when_feasible = get<bool>(doc["stop_when_feasible"], "stop_when_feasible");
  if (doc.contains("oracle")) cfg.oracle = get<bool>(doc["oracle"], "oracle");
  if (doc.contains("trials")) cfg.trials = get_positive_int(doc["trials"], "trials", 1);
  if (doc.contains("master_seed")) cfg.master_seed = get<std::uint64_t>(doc["master_seed"], "master_seed");
  if (doc.contains("output_dir")) cfg.output_dir = get<std::string>(doc["output_dir"], "output_dir");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Vector select_sigma(const RestrictionReport& rep, const RunConfig& cfg) {
  switch (cfg.sigma_mode) {
    case SigmaMode::inf: return rep.sigma_inf;
    case SigmaMode::ft: return rep.sigma_inf.array() + cfg.delta_for(rep.sigma_inf.size());
    case SigmaMode::dd: return rep.sigma_dd;
    case SigmaMode::custom:
      if (cfg.sigma_custom.size() != rep.sigma_inf.size()) throw InvalidInput("config: sigma.values has wrong length");
      if ((cfg.sigma_custom.array() < 0.0).any()) throw InvalidInput("config: sigma.values must be nonnegative");
      return cfg.sigma_custom;
  }
  return rep.sigma_inf;
}

PipelineResult run_pipeline(const CoupledProblem& problem, const RunConfig& cfg) {
  return run_pipeline(problem, cfg, compute_report(problem, cfg.delta_for(problem.S())));
}

PipelineResult run_pipeline(const CoupledProblem& problem, const RunConfig& cfg, const RestrictionReport& rep) {
  PipelineResult res;
  res.restriction = rep;
  res.sigma = select_sigma(rep, cfg);
  res.restricted = solve_restricted_lp(problem, res.sigma);
  if (cfg.oracle) {
    const OracleGlobal g = oracle_global_milp(problem);
    if (g.status == MILPStatus::optimal) res.J_milp = g.value;
  }
  if (!res.restricted.feasible) return res;

  const Graph graph = erdos_renyi_connected(static_cast<int>(problem.N()), cfg.graph_p, cfg.graph_seed);
  RunOptions opts;
  opts.T_f = cfg.T_f;
  opts.recovery_every = cfg.recovery_every;
  opts.monitor_every = cfg.monitor_every;
  opts.stop_when_feasible = cfg.stop_when_feasible;
  res.M = cfg.M ? *cfg.M : default_penalty(problem);
  res.trace = run(problem, graph, res.sigma, cfg.step(), res.M, opts);
  for (Eigen::Index i = 0; i < res.trace->last().v.size(); ++i)
    if (res.trace->last().v[i] > kTol.feasibility) res.penalty_active.push_back(static_cast<int>(i));
  res.first_feasible = feasibility_first_round(*res.trace, problem.b);
  res.persists = res.first_feasible && feasibility_persists(*res.trace, *res.first_feasible);
  const RoundRecord& last = res.trace->last_recovered();
  res.cost = last.x_cost.sum();
  res.final_feasible = last.feasible;
  const double delta = cfg.sigma_mode == SigmaMode::ft ? cfg.delta_for(problem.S()) : 0.0;
  res.bounds = compute_bounds(problem, *res.trace,
                              {{"witness", rep.witness}, {"max_margin", res.restricted.margin_point}}, delta);
  return res;
}

namespace {

json to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const std::vector<Vector>& vs) {
  json out = json::array();
  for (const Vector& v : vs) out.push_back(to_json(v));
  return out;
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string summary_json(const CoupledProblem& problem, const RunConfig& cfg, const PipelineResult& res) {
  json j;
  j["N"] = problem.N();
  j["S"] = problem.S();
  j["b"] = to_json(problem.b);
  j["sigma_mode"] = to_string(cfg.sigma_mode);
  j["sigma"] = to_json(res.sigma);
  const RestrictionReport& r = res.restriction;
  j["restriction"] = {{"L", to_json(r.L)},
                      {"rho_max", r.rho_max},
                      {"sigma_loc", to_json(r.sigma_loc)},
                      {"sigma_inf", to_json(r.sigma_inf)},
                      {"sigma_ft", to_json(r.sigma_ft)},
                      {"sigma_dd", to_json(r.sigma_dd)},
                      {"delta", r.delta},
                      {"ratio_inf", restriction_ratio(r.sigma_inf, problem.b)},
                      {"ratio_dd", restriction_ratio(r.sigma_dd, problem.b)}};
  j["restricted_lp"] = {{"feasible", res.restricted.feasible},
                        {"q_star", res.restricted.feasible ? json(res.restricted.value) : json(nullptr)},
                        {"min_violation", res.restricted.min_violation}};
  j["outcome"] = res.restricted.feasible ? "ran" : "restricted_lp_infeasible";
  j["J_milp"] = opt(res.J_milp);
  if (res.trace) {
    j["rounds"] = res.trace->rounds.size();
    j["feasibility_round"] = opt(res.first_feasible);
    j["feasibility_persists"] = res.persists;
    j["cost"] = res.cost;
    j["final_feasible"] = res.final_feasible;
    j["master_cost"] = res.trace->last().master_cost();
    j["M"] = res.M;
    j["penalty_active"] = res.penalty_active;
    j["x"] = to_json(res.trace->last_recovered().x);
    if (res.restricted.feasible && res.restricted.value != 0.0)
      j["suboptimality"] = (res.cost - res.restricted.value) / std::abs(res.restricted.value);
    if (res.J_milp) j["gap_to_milp"] = res.cost - *res.J_milp;
  }
  if (res.bounds) {
    const BoundsReport& b = *res.bounds;
    json jb;
    jb["gamma"] = b.gammas;
    jb["slater_source"] = b.slater_source;
    jb["zeta"] = b.slater ? json(b.slater->zeta) : json(nullptr);
    jb["J_sl"] = b.slater ? json(b.slater->J_sl) : json(nullptr);
    jb["B"] = opt(b.B);
    jb["B_prime"] = b.B_prime ? json(b.B_prime->value) : json(nullptr);
    jb["I_R"] = b.B_prime ? json(b.B_prime->I_R) : json(nullptr);
    jb["Gamma"] = opt(b.Gamma);
    jb["B_t_final"] = b.B_t.empty() ? json(nullptr) : json(b.B_t.back().second);
    j["bounds"] = jb;
  }
  return j.dump(2) + "\n";
}

TrialRow run_trial(const RunConfig& cfg, int trial) {
  TrialRow row;
  row.trial = trial;
  row.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial));
  try {
    GeneratorParams gp = cfg.generator;
    gp.seed = row.seed;
    const CoupledProblem problem = generate_random(gp);
    const RestrictionReport rep = compute_report(problem, 0.0);
    row.ratio_inf = restriction_ratio(rep.sigma_inf, problem.b);
    row.ratio_dd = restriction_ratio(rep.sigma_dd, problem.b);
    RunConfig c = cfg;
    c.graph_seed = derive_seed(row.seed, 1);
    c.recovery_every = 0;
    c.monitor_every = 0;
    c.oracle = false;
    c.delta.reset();
    auto method = [&](SigmaMode mode, bool& solvable, double& q, double& cost, bool& feasible, double& subopt) {
      c.sigma_mode = mode;
      const PipelineResult r = run_pipeline(problem, c, rep);
      solvable = r.restricted.feasible;
      if (!solvable) return;
      q = r.restricted.value;
      cost = r.cost;
      feasible = r.final_feasible;
      subopt = (cost - q) / std::abs(q);
    };
    method(SigmaMode::inf, row.solvable_inf, row.q_inf, row.cost_inf, row.feasible_inf, row.subopt_inf);
    method(SigmaMode::dd, row.solvable_dd, row.q_dd, row.cost_dd, row.feasible_dd, row.subopt_dd);
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

MonteCarloSummary summarize(const std::vector<TrialRow>& rows) {
  MonteCarloSummary s;
  for (const TrialRow& r : rows) {
    if (!r.error.empty()) continue;
    ++s.trials;
    s.mean_ratio_inf += r.ratio_inf;
    s.mean_ratio_dd += r.ratio_dd;
    s.solvable_inf += r.solvable_inf;
    s.solvable_dd += r.solvable_dd;
    if (r.solvable_inf && r.solvable_dd) {
      ++s.both_solvable;
      s.mean_subopt_inf += r.subopt_inf;
      s.mean_subopt_dd += r.subopt_dd;
    }
  }
  if (s.trials > 0) {
    s.mean_ratio_inf /= s.trials;
    s.mean_ratio_dd /= s.trials;
  }
  if (s.both_solvable > 0) {
    s.mean_subopt_inf /= s.both_solvable;
    s.mean_subopt_dd /= s.both_solvable;
  }
  return s;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_montecarlo_csv(const std::vector<TrialRow>& rows, std::ostream& out) {
  out << "trial,seed,ratio_inf,ratio_dd,solvable_inf,solvable_dd,q_inf,q_dd,cost_inf,cost_dd,"
         "feasible_inf,feasible_dd,subopt_inf,subopt_dd,error\n";
  for (const TrialRow& r : rows) {
    out << r.trial << ',' << r.seed << ',' << num(r.ratio_inf) << ',' << num(r.ratio_dd) << ',' << r.solvable_inf
        << ',' << r.solvable_dd << ',' << num(r.q_inf) << ',' << num(r.q_dd) << ',' << num(r.cost_inf) << ','
        << num(r.cost_dd) << ',' << r.feasible_inf << ',' << r.feasible_dd << ',' << num(r.subopt_inf) << ','
        << num(r.subopt_dd) << ',' << csv_escape(r.error) << '\n';
  }
}

void write_montecarlo_summary_csv(const MonteCarloSummary& s, std::ostream& out) {
  out << "metric,this_method,baseline\n";
  out << "trials," << s.trials << ',' << s.trials << '\n';
  out << "solvable," << s.solvable_inf << ',' << s.solvable_dd << '\n';
  out << "mean_restriction_ratio," << num(s.mean_ratio_inf) << ',' << num(s.mean_ratio_dd) << '\n';
  out << "both_solvable," << s.both_solvable << ',' << s.both_solvable << '\n';
  out << "mean_suboptimality," << num(s.mean_subopt_inf) << ',' << num(s.mean_subopt_dd) << '\n';
}

}  // namespace dpd
