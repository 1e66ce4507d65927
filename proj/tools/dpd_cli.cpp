#include "dpd/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

dpd::RunConfig config_from(const std::string& path) {
  return path.empty() ? dpd::RunConfig{} : dpd::load_config(path);
}

dpd::CoupledProblem problem_from(const dpd::RunConfig& cfg) {
  return cfg.instance.empty() ? dpd::generate_random(cfg.generator) : dpd::load_problem(cfg.instance);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw dpd::InvalidInput("cannot write " + p.string());
  return out;
}

int cmd_generate(const std::string& config, const std::string& out_path, std::optional<std::uint64_t> seed,
                 std::optional<int> n_agents, const std::string& mode) {
  dpd::RunConfig cfg = config_from(config);
  if (seed) cfg.generator.seed = *seed;
  if (n_agents) cfg.generator.n_agents = *n_agents;
  if (mode == "tight") cfg.generator.mode = dpd::ResourceMode::tight;
  else if (mode == "loose") cfg.generator.mode = dpd::ResourceMode::loose;
  else if (!mode.empty()) throw dpd::InvalidInput("--b must be 'loose' or 'tight'");
  dpd::save_problem(dpd::generate_random(cfg.generator), out_path);
  return 0;
}

int cmd_run(const std::string& config, const std::string& instance, const std::string& out_dir) {
  dpd::RunConfig cfg = config_from(config);
  if (!instance.empty()) cfg.instance = instance;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const dpd::CoupledProblem problem = problem_from(cfg);
  const dpd::PipelineResult res = dpd::run_pipeline(problem, cfg);
  fs::create_directories(cfg.output_dir);
  if (res.trace) {
    std::ofstream csv = open_out(fs::path(cfg.output_dir) / "trace.csv");
    dpd::write_trace_csv(*res.trace, csv);
  }
  open_out(fs::path(cfg.output_dir) / "summary.json") << dpd::summary_json(problem, cfg, res);
  if (!res.restricted.feasible) {
    std::cout << "restricted LP infeasible (min violation " << res.restricted.min_violation << ")\n";
  } else {
    std::cout << "cost " << res.cost << ", feasibility round ";
    if (res.first_feasible) std::cout << *res.first_feasible; else std::cout << "none";
    std::cout << "\n";
  }
  return 0;
}

int cmd_montecarlo(const std::string& config, std::optional<int> trials, const std::string& out_dir) {
  dpd::RunConfig cfg = config_from(config);
  if (trials) cfg.trials = *trials;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (cfg.trials < 1) throw dpd::InvalidInput("trials must be >= 1");
  std::vector<dpd::TrialRow> rows;
  for (int k = 0; k < cfg.trials; ++k) rows.push_back(dpd::run_trial(cfg, k));
  fs::create_directories(cfg.output_dir);
  std::ofstream csv = open_out(fs::path(cfg.output_dir) / "montecarlo.csv");
  dpd::write_montecarlo_csv(rows, csv);
  const dpd::MonteCarloSummary s = dpd::summarize(rows);
  std::ofstream sum = open_out(fs::path(cfg.output_dir) / "montecarlo_summary.csv");
  dpd::write_montecarlo_summary_csv(s, sum);
  dpd::write_montecarlo_summary_csv(s, std::cout);
  return 0;
}

int cmd_validate(const std::string& path) {
  dpd::CoupledProblem p;
  try {
    p = dpd::load_problem(path);
  } catch (const dpd::InvalidInput& e) {
    std::cout << "invalid: " << e.what() << "\n";
    return 1;
  }
  std::cout << "valid: N=" << p.N() << " S=" << p.S() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed primal decomposition for constraint-coupled MILPs"};
  app.require_subcommand(1);

  std::string config, out, instance;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_agents, trials;
  std::string mode;

  auto* gen = app.add_subcommand("generate", "Write a random instance");
  gen->add_option("-c,--config", config, "Config file (generator section)");
  gen->add_option("-o,--output", out, "Instance file to write")->required();
  gen->add_option("--seed", seed, "Override generator seed");
  gen->add_option("--N", n_agents, "Override number of agents");
  gen->add_option("--b", mode, "loose or tight");

  auto* run = app.add_subcommand("run", "Restriction, algorithm run and bounds on one instance");
  run->add_option("-c,--config", config, "Config file");
  run->add_option("-i,--instance", instance, "Instance file (overrides config)");
  run->add_option("-o,--output-dir", out, "Output directory (overrides config)");

  auto* mc = app.add_subcommand("montecarlo", "Compare sigma_inf against sigma_dd over random trials");
  mc->add_option("-c,--config", config, "Config file");
  mc->add_option("-n,--trials", trials, "Number of trials");
  mc->add_option("-o,--output-dir", out, "Output directory (overrides config)");

  auto* val = app.add_subcommand("validate", "Check an instance file");
  val->add_option("instance", instance, "Instance file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(config, out, seed, n_agents, mode);
    if (*run) return cmd_run(config, instance, out);
    if (*mc) return cmd_montecarlo(config, trials, out);
    if (*val) return cmd_validate(instance);
  } catch (const dpd::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const dpd::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dpd::Error& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
