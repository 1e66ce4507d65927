#include "dpd/oracles.hpp"
#include "dpd/subproblem.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace dpd;
using testutil::vec;

namespace {

void check_invariants(const AgentBlock& b, const Vector& y, double M, const SubproblemResult& r,
                      const ColumnPool& pool) {
  CHECK(r.mu.minCoeff() >= -1e-12);
  CHECK(r.mu.sum() <= M + 1e-9);
  CHECK(r.v >= 0.0);
  CHECK(r.lambda.size() == pool.size());
  double sum = 0.0;
  Vector z = Vector::Zero(b.n());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    CHECK(r.lambda[k] >= -1e-12);
    sum += r.lambda[k];
    z += r.lambda[k] * pool[k];
  }
  CHECK(sum == doctest::Approx(1.0));
  CHECK((z - r.z).lpNorm<Eigen::Infinity>() <= 1e-9);
  const Vector slack = y + Vector::Constant(y.size(), r.v) - b.A * r.z;
  CHECK(slack.minCoeff() >= -kTol.feasibility);
  for (Eigen::Index s = 0; s < y.size(); ++s) CHECK(r.mu[s] * slack[s] <= kTol.complementarity);
  CHECK(r.cost == doctest::Approx(b.c.dot(r.z) + M * r.v));
}

}  // namespace

TEST_CASE("subproblem: slack allocation gives the unconstrained minimum") {
  const AgentBlock b = testutil::unit_block(1, 1);
  ColumnPool pool;
  const SubproblemResult r = evaluate(b, vec({5}), 10.0, pool);
  CHECK(r.cost == doctest::Approx(0.0));
  CHECK(r.z[0] == doctest::Approx(0.0));
  CHECK(r.v == doctest::Approx(0.0));
  CHECK(r.mu[0] == doctest::Approx(0.0));
}

TEST_CASE("subproblem: a negative allocation is paid for with the penalty") {
  const AgentBlock b = testutil::unit_block(1, 1);
  ColumnPool pool;
  const SubproblemResult r = evaluate(b, vec({-1}), 10.0, pool);
  CHECK(r.v == doctest::Approx(1.0));
  CHECK(r.z[0] == doctest::Approx(0.0));
  CHECK(r.cost == doctest::Approx(10.0));
  CHECK(r.mu[0] == doctest::Approx(10.0));
}

TEST_CASE("subproblem: fractional allocation mixes two integer points") {
  // min -x  s.t. x <= 1.5 over {0,1,2}: z = 1.5 on conv, mu = 1
  const AgentBlock b = testutil::unit_block(-1, 1);
  ColumnPool pool;
  const SubproblemResult r = evaluate(b, vec({1.5}), 10.0, pool);
  CHECK(r.z[0] == doctest::Approx(1.5));
  CHECK(r.cost == doctest::Approx(-1.5));
  CHECK(r.mu[0] == doctest::Approx(1.0));
  check_invariants(b, vec({1.5}), 10.0, r, pool);
}

TEST_CASE("subproblem: random blocks match the full enumeration master") {
  Rng rng(8);
  for (std::uint64_t k = 0; k < 30; ++k) {
    const AgentBlock b = testutil::random_block(200 + k);
    const Vector L = Vector::Constant(2, -3.0);
    Vector y(2);
    for (Eigen::Index s = 0; s < 2; ++s) y[s] = rng.uniform(L[s], 2.0);
    const double M = 50.0;
    ColumnPool pool;
    const SubproblemResult r = evaluate(b, y, M, pool);
    const OracleSubproblem o = oracle_subproblem(b, y, M);
    CHECK(r.cost == doctest::Approx(o.cost).epsilon(1e-9));
    check_invariants(b, y, M, r, pool);
  }
}

TEST_CASE("subproblem: reusing a pool changes nothing but the pricing count") {
  const AgentBlock b = testutil::random_block(17);
  ColumnPool warm;
  evaluate(b, vec({0.3, -0.2}), 40.0, warm);
  evaluate(b, vec({-1.0, 1.0}), 40.0, warm);
  ColumnPool cold;
  const SubproblemResult a = evaluate(b, vec({0.1, 0.1}), 40.0, cold);
  const SubproblemResult c = evaluate(b, vec({0.1, 0.1}), 40.0, warm);
  CHECK(a.cost == doctest::Approx(c.cost).epsilon(1e-10));
}

TEST_CASE("subproblem: pool ignores duplicates") {
  ColumnPool pool;
  CHECK(pool.add(vec({1, 2})));
  CHECK_FALSE(pool.add(vec({1, 2})));
  CHECK(pool.contains(vec({1, 2})));
  CHECK(pool.size() == 1);
}

TEST_CASE("subproblem: multiplier matches finite differences") {
  int smooth = 0, good = 0;
  Rng rng(99);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const AgentBlock b = testutil::random_block(300 + k);
    const Vector y = vec({rng.uniform(-2.0, 1.0), rng.uniform(-2.0, 1.0)});
    ColumnPool pool;
    GradientCheckOptions opts;
    opts.seed = k;
    const GradientReport g = gradient_check(b, y, 50.0, pool, opts);
    if (g.kink) continue;
    ++smooth;
    good += g.max_abs_error <= 1e-3;
  }
  CHECK(smooth > 0);
  CHECK(good == smooth);
}

TEST_CASE("subproblem: flat region has zero multiplier and zero slope") {
  const AgentBlock b = testutil::unit_block(1, 1);
  ColumnPool pool;
  const GradientReport g = gradient_check(b, vec({1.0}), 10.0, pool);
  CHECK_FALSE(g.kink);
  CHECK(g.mu[0] == doctest::Approx(0.0));
  CHECK(g.fd_slope[0] == doctest::Approx(0.0));
}

TEST_CASE("subproblem: kink points are flagged") {
  // slope jumps from -1 to 0 at y = 2 for min -x over {0,1,2}
  const AgentBlock b = testutil::unit_block(-1, 1);
  ColumnPool pool;
  GradientCheckOptions opts;
  opts.max_resamples = 0;
  const GradientReport g = gradient_check(b, vec({2.0}), 10.0, pool, opts);
  CHECK(g.kink);
}

TEST_CASE("subproblem: restricted LP matches the joint enumeration LP") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CoupledProblem p = generate_random(testutil::desk(4, seed));
    const Vector sigma = Vector::Constant(p.S(), 0.1);
    const RestrictedLPResult r = solve_restricted_lp(p, sigma);
    const OracleRestrictedLP o = oracle_restricted_lp(p, sigma);
    REQUIRE(r.feasible == o.feasible);
    if (!r.feasible) continue;
    CHECK(r.value == doctest::Approx(o.value).epsilon(1e-9));
    Vector usage = Vector::Zero(p.S());
    for (std::size_t i = 0; i < p.N(); ++i) usage += p.blocks[i].A * r.z[i];
    CHECK((usage - (p.b - sigma)).maxCoeff() <= kTol.feasibility);
  }
}

TEST_CASE("subproblem: restricted LP detects an empty restriction") {
  const CoupledProblem p = generate_random(testutil::desk(3, 2));
  const RestrictedLPResult r = solve_restricted_lp(p, Vector::Constant(p.S(), 1e3));
  CHECK_FALSE(r.feasible);
  CHECK(r.min_violation > kTol.feasibility);
}

TEST_CASE("subproblem: default penalty") {
  CoupledProblem p;
  p.blocks = {testutil::unit_block(2, 1), testutil::unit_block(-4, 1)};
  p.b = vec({1});
  CHECK(default_penalty(p) == doctest::Approx(50.0));
}
