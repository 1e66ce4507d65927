#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace dpd {

// Undirected, loop-free, connected communication graph.  Neighbor lists are
// sorted by id.
class Graph {
 public:
  // Throws InvalidInput on self-loops, out-of-range endpoints or a disconnected graph.
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  static Graph complete(int n);
  static Graph path(int n);

  int n() const { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(int i) const { return adj_[static_cast<std::size_t>(i)]; }
  bool adjacent(int i, int j) const;
  std::vector<std::pair<int, int>> edges() const;
  std::size_t num_edges() const;
  int diameter() const;

 private:
  std::vector<std::vector<int>> adj_;
};

bool is_connected(int n, const std::vector<std::vector<int>>& adj);

// Samples G(n, p) with a fresh sub-stream per attempt until the sample is
// connected.  Throws CapExceeded after 10^4 attempts.
Graph erdos_renyi_connected(int n, double p, std::uint64_t seed);

}  // namespace dpd
