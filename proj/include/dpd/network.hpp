#pragma once

#include "dpd/agent.hpp"
#include "dpd/graph.hpp"
#include "dpd/messages.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace dpd {

struct RunOptions {
  int T_f = 1000;
  // Recover mixed-integer points every `recovery_every` rounds (0: final round only).
  // The final round is always recovered.
  int recovery_every = 1;
  // Central feasibility monitor on recovered rounds that are multiples of K (0: off).
  int monitor_every = 0;
  // Stop at the first round the monitor reports feasible.
  bool stop_when_feasible = false;
  bool keep_message_log = false;
  SubproblemOptions subproblem{};
};

// State of one synchronous round t: the allocation y^t in force, the multipliers
// computed at it and, when recovered, x^t from the two-stage recovery at y^t.
struct RoundRecord {
  int t = 0;
  Matrix y;        // N x S
  Matrix mu;       // N x S
  Vector lp_cost;  // p_i(y_i^t)
  Vector v;
  bool recovered = false;
  std::vector<Vector> x;
  Vector rho;
  Vector x_cost;
  Vector usage;    // sum_i A_i x_i^t
  bool feasible = false;

  double master_cost() const { return lp_cost.sum(); }
};

struct RunTrace {
  Vector b;
  Vector sigma;
  std::vector<RoundRecord> rounds;
  std::vector<Vector> z_final;      // relaxed primal at the last round
  std::vector<std::vector<Vector>> pool_final;
  std::vector<DeliveryRecord> messages;
  std::optional<int> monitor_first_feasible;

  const RoundRecord& last() const { return rounds.back(); }
  // Last round with recovered points.
  const RoundRecord& last_recovered() const;
};

// Runs Algorithm rounds t = 0..T_f on the network: every agent evaluates its
// subproblem at y_i^t, multipliers are exchanged over the bus, and allocations
// are updated.  Round T_f only evaluates and recovers.
RunTrace run(const CoupledProblem& problem, const Graph& graph, const Vector& sigma, const StepSize& step,
             double M, const RunOptions& opts);

// Smallest recorded round whose recovered points are all in X_i and satisfy the
// coupling constraint within kTol.feasibility.
std::optional<int> feasibility_first_round(const RunTrace& trace, const Vector& b);

// True when every recovered round at or after `from` is feasible.
bool feasibility_persists(const RunTrace& trace, int from);

// sum_i A_i x_i for the given points.
Vector coupling_usage(const CoupledProblem& problem, const std::vector<Vector>& x);

// Column order: t,i,y_0..y_{S-1},mu_0..mu_{S-1},lp_cost,v,recovered,rho,x_cost
void write_trace_csv(const RunTrace& trace, std::ostream& out);

}  // namespace dpd
