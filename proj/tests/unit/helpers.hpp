#pragma once

#include "dpd/model.hpp"

#include <vector>

namespace testutil {

using dpd::AgentBlock;
using dpd::Matrix;
using dpd::Vector;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

// Block with box [lo, hi], no D rows, every coordinate integer.
inline AgentBlock int_block(const Vector& c, const Matrix& A, const Vector& lo, const Vector& hi) {
  AgentBlock b;
  b.c = c;
  b.A = A;
  b.P.D = Matrix(0, c.size());
  b.P.d = Vector(0);
  b.P.lo = lo;
  b.P.hi = hi;
  for (int j = 0; j < c.size(); ++j) b.int_idx.push_back(j);
  return b;
}

// x in Z, 0 <= x <= 2 with the given cost and single coupling coefficient.
inline AgentBlock unit_block(double c, double a) { return int_block(vec({c}), mat({{a}}), vec({0}), vec({2})); }

inline dpd::GeneratorParams desk(int N, std::uint64_t seed, int S = 2) {
  dpd::GeneratorParams gp;
  gp.n_agents = N;
  gp.S = S;
  gp.p = 2;
  gp.q = 1;
  gp.m = 4;
  gp.seed = seed;
  gp.scale = dpd::ResourceScale::desk();
  return gp;
}

// One enumerable random block drawn from the desk generator.
inline AgentBlock random_block(std::uint64_t seed, int S = 2) {
  return dpd::generate_random(desk(1, seed, S)).blocks[0];
}

inline double total_usage_row(const std::vector<Vector>& ys, Eigen::Index s) {
  double acc = 0.0;
  for (const Vector& y : ys) acc += y[s];
  return acc;
}

}  // namespace testutil
