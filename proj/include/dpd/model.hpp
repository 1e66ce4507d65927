#pragma once

#include "dpd/config.hpp"
#include "dpd/milp.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dpd {

// P = { x : D x <= d, lo <= x <= hi }, compact thanks to the finite box.
struct Polyhedron {
  Matrix D;
  Vector d;
  Vector lo;
  Vector hi;
};

// One agent's private data: cost c_i, coupling rows A_i (S x n_i), polyhedron
// P_i and the integer coordinates of X_i = P_i ∩ (Z^p x R^q).
struct AgentBlock {
  Vector c;
  Matrix A;
  Polyhedron P;
  std::vector<int> int_idx;

  Eigen::Index n() const { return c.size(); }
  Eigen::Index num_coupling() const { return A.rows(); }
  std::size_t num_int() const { return int_idx.size(); }
  bool is_integer(int j) const;

  // MILP over X_i with the given linear objective.
  MILPInstance milp(const Vector& objective) const;
  // MILP over (x, t) in X_i x [0, t_hi] with the extra rows A x - t 1 <= rhs and
  // objective x_obj^T x + t_obj t.  The slack t is the last variable.
  MILPInstance milp_with_slack(const Vector& x_obj, double t_obj, const Vector& rhs, double t_hi = kInf) const;
  // True when x lies in X_i (box, D x <= d, integrality) within tolerances.
  bool contains(const Vector& x, double tol_feas = kTol.feasibility, double tol_int = kTol.integrality) const;
};

struct CoupledProblem {
  std::vector<AgentBlock> blocks;
  Vector b;

  std::size_t N() const { return blocks.size(); }
  Eigen::Index S() const { return b.size(); }

  friend bool operator==(const CoupledProblem& a, const CoupledProblem& b);
};

struct MixedIntegerPoint {
  Vector x;
  int owner = -1;
};

struct Violation {
  int block = -1;  // -1 for problem-level issues
  std::string field;
  std::string reason;
};

std::vector<Violation> validate(const CoupledProblem& problem);

// Throws InvalidInput listing the first violation when validate() is non-empty.
void require_valid(const CoupledProblem& problem);

enum class ResourceMode { loose, tight };

struct Interval {
  double lo;
  double hi;
};

// Sampling intervals of the random generator.  Defaults reproduce the published
// recipe; b intervals are per agent and multiplied by N.
struct ResourceScale {
  Interval D{0.0, 1.0};
  Interval d{20.0, 40.0};
  Interval box{-60.0, 60.0};
  Interval c_hat{0.0, 5.0};
  Interval A{0.0, 1.0};
  Interval b_loose{-20.0, -15.0};
  Interval b_tight{-180.0, -175.0};

  static ResourceScale paper() { return {}; }
  // Small box and mixed-sign coupling so that desk instances are enumerable
  // and the coupling constraint binds.
  static ResourceScale desk();
};

struct GeneratorParams {
  int n_agents = 300;
  int S = 5;
  int p = 10;  // integer coordinates per agent
  int q = 5;   // continuous coordinates per agent
  int m = 20;  // rows of D_i
  std::uint64_t seed = 1;
  ResourceMode mode = ResourceMode::loose;
  ResourceScale scale{};
  // Uniform noise in [-1e-6, 1e-6] added to every c_i so that the restricted LP
  // has a unique optimum.
  bool perturb_costs = true;
};

CoupledProblem generate_random(const GeneratorParams& params);

// Deterministic 64-bit stream (SplitMix64) mapped to doubles in [0,1) with 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double uniform(Interval iv) { return uniform(iv.lo, iv.hi); }

 private:
  std::uint64_t state_;
};

// Derives an independent seed for sub-stream `index` of `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// JSON instance format: {"N","S","b","blocks":[{"c","A","D","d","lo","hi","int_idx"}]}
// with matrices as row-major nested arrays and 17 significant digits.
std::string serialize(const CoupledProblem& problem);
// Throws ParseError (with byte offset) on malformed text and InvalidInput when the
// parsed problem violates an invariant.
CoupledProblem deserialize(std::string_view text);

CoupledProblem load_problem(const std::string& path);
void save_problem(const CoupledProblem& problem, const std::string& path);

}  // namespace dpd
