#pragma once

#include "dpd/lp.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace dpd {

struct MILPInstance {
  LinearProgram lp;
  std::vector<int> int_idx;

  // Throws InvalidInput when an integer index is out of range or unbounded.
  void check() const;
};

enum class MILPStatus { optimal, infeasible, unbounded };

const char* to_string(MILPStatus s);

struct MILPSolution {
  MILPStatus status = MILPStatus::infeasible;
  Vector x;  // integer coordinates snapped to exact integers
  double obj = 0.0;
  std::size_t nodes = 0;
  std::size_t branched = 0;
};

struct MILPOptions {
  std::size_t node_limit = 1'000'000;
  // A point known to be feasible; seeds the incumbent (pruning only, never returned
  // unless it is optimal within the gap).  Ignored if it violates a row, bound or
  // integrality by more than the tolerances.  Leaf points are held to the same test.
  std::optional<Vector> incumbent;
  // Nodes whose bound is within gap * (1 + |incumbent|) of the incumbent are pruned.
  double gap = 1e-9;
};

// Best-first branch-and-bound on LP relaxations.  Nodes are ordered by their LP
// value with ties broken by creation order; the most fractional integer variable
// (lowest index on ties) is branched, down child first.  Globally optimal within
// opts.gap * (1 + |obj|), which defaults well inside kTol.gap_rel.  Throws
// CapExceeded when the node budget runs out.
MILPSolution solve_milp(const MILPInstance& inst, const MILPOptions& opts = {});

}  // namespace dpd
