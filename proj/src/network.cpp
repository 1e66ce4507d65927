#include "dpd/network.hpp"

#include <cstdio>

namespace dpd {

const RoundRecord& RunTrace::last_recovered() const {
  for (auto it = rounds.rbegin(); it != rounds.rend(); ++it)
    if (it->recovered) return *it;
  throw InvalidInput("trace: no recovered round");
}

Vector coupling_usage(const CoupledProblem& problem, const std::vector<Vector>& x) {
  Vector u = Vector::Zero(problem.S());
  for (std::size_t i = 0; i < problem.N(); ++i) u += problem.blocks[i].A * x[i];
  return u;
}

namespace {

bool recovery_due(const RunOptions& opts, int t, bool final_round) {
  if (final_round) return true;
  return opts.recovery_every > 0 && t % opts.recovery_every == 0;
}

}  // namespace

RunTrace run(const CoupledProblem& problem, const Graph& graph, const Vector& sigma, const StepSize& step,
             double M, const RunOptions& opts) {
  require_valid(problem);
  const auto N = static_cast<int>(problem.N());
  const Eigen::Index S = problem.S();
  if (graph.n() != N) throw InvalidInput("run: graph has " + std::to_string(graph.n()) + " nodes, problem has " +
                                         std::to_string(N) + " agents");
  if (opts.T_f < 0) throw InvalidInput("run: T_f must be >= 0");

  std::vector<AgentState> agents(static_cast<std::size_t>(N));
  const std::vector<Vector> y0 = init_allocation(problem, sigma);
  for (int i = 0; i < N; ++i) {
    AgentState& a = agents[static_cast<std::size_t>(i)];
    a.id = i;
    a.block = &problem.blocks[static_cast<std::size_t>(i)];
    a.y = y0[static_cast<std::size_t>(i)];
  }

  RunTrace trace;
  trace.b = problem.b;
  trace.sigma = sigma;
  MessageBus bus(graph, opts.keep_message_log);

  for (int t = 0; t <= opts.T_f; ++t) {
    RoundRecord rec;
    rec.t = t;
    rec.y.resize(N, S);
    rec.mu.resize(N, S);
    rec.lp_cost.resize(N);
    rec.v.resize(N);
    for (auto& a : agents) {
      a.evaluate(M, opts.subproblem);
      rec.y.row(a.id) = a.y.transpose();
      rec.mu.row(a.id) = a.mu.transpose();
      rec.lp_cost[a.id] = a.lp_cost;
      rec.v[a.id] = a.v;
    }

    bool final_round = t == opts.T_f;
    if (recovery_due(opts, t, final_round)) {
      rec.recovered = true;
      rec.rho.resize(N);
      rec.x_cost.resize(N);
      bool all_in = true;
      for (auto& a : agents) {
        a.recover();
        rec.x.push_back(a.recovered.x);
        rec.rho[a.id] = a.recovered.rho;
        rec.x_cost[a.id] = a.recovered.cost;
        all_in = all_in && a.block->contains(a.recovered.x);
      }
      rec.usage = coupling_usage(problem, rec.x);
      rec.feasible = all_in && ((rec.usage - problem.b).array() <= kTol.feasibility).all();
      if (opts.monitor_every > 0 && t % opts.monitor_every == 0 && rec.feasible && !trace.monitor_first_feasible) {
        trace.monitor_first_feasible = t;
        if (opts.stop_when_feasible) final_round = true;
      }
    }
    trace.rounds.push_back(std::move(rec));
    if (final_round) break;

    for (const auto& a : agents)
      for (int j : graph.neighbors(a.id)) bus.post({a.id, j, t, a.mu});
    bus.barrier();
    const double alpha = step(t);
    for (auto& a : agents) {
      std::vector<Vector> nb;
      for (const RoundMessage& m : bus.consume(a.id, t)) nb.push_back(m.payload);
      a.y = allocation_update(a.y, a.mu, nb, alpha);
    }
  }

  for (const auto& a : agents) {
    trace.z_final.push_back(a.z);
    trace.pool_final.push_back(a.pool.points());
  }
  trace.messages = bus.log();
  return trace;
}

std::optional<int> feasibility_first_round(const RunTrace& trace, const Vector& b) {
  for (const RoundRecord& r : trace.rounds) {
    if (!r.recovered) continue;
    if (r.usage.size() != b.size()) throw InvalidInput("feasibility_first_round: usage and b differ in length");
    if (r.feasible && ((r.usage - b).array() <= kTol.feasibility).all()) return r.t;
  }
  return std::nullopt;
}

bool feasibility_persists(const RunTrace& trace, int from) {
  for (const RoundRecord& r : trace.rounds)
    if (r.recovered && r.t >= from && !r.feasible) return false;
  return true;
}

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  const Eigen::Index S = trace.b.size();
  out << "t,i";
  for (Eigen::Index s = 0; s < S; ++s) out << ",y_" << s;
  for (Eigen::Index s = 0; s < S; ++s) out << ",mu_" << s;
  out << ",lp_cost,v,recovered,rho,x_cost\n";
  for (const RoundRecord& r : trace.rounds) {
    for (Eigen::Index i = 0; i < r.y.rows(); ++i) {
      out << r.t << ',' << i;
      for (Eigen::Index s = 0; s < S; ++s) {
        out << ',';
        put(out, r.y(i, s));
      }
      for (Eigen::Index s = 0; s < S; ++s) {
        out << ',';
        put(out, r.mu(i, s));
      }
      out << ',';
      put(out, r.lp_cost[i]);
      out << ',';
      put(out, r.v[i]);
      out << ',' << (r.recovered ? 1 : 0) << ',';
      if (r.recovered) {
        put(out, r.rho[i]);
        out << ',';
        put(out, r.x_cost[i]);
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
}

}  // namespace dpd
