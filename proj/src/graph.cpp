#include "dpd/graph.hpp"

#include "dpd/model.hpp"

#include <algorithm>
#include <queue>

namespace dpd {

namespace {

std::vector<int> bfs_depths(const std::vector<std::vector<int>>& adj, int src) {
  std::vector<int> depth(adj.size(), -1);
  std::queue<int> q;
  depth[static_cast<std::size_t>(src)] = 0;
  q.push(src);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (depth[static_cast<std::size_t>(v)] < 0) {
        depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return depth;
}

}  // namespace

bool is_connected(int n, const std::vector<std::vector<int>>& adj) {
  if (n <= 1) return true;
  const std::vector<int> d = bfs_depths(adj, 0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) throw InvalidInput("graph: need at least one node");
  Graph g;
  g.adj_.assign(static_cast<std::size_t>(n), {});
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw InvalidInput("graph: edge endpoint out of range");
    if (a == b) throw InvalidInput("graph: self-loop on node " + std::to_string(a));
    g.adj_[static_cast<std::size_t>(a)].push_back(b);
    g.adj_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nb : g.adj_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  if (!is_connected(n, g.adj_)) throw InvalidInput("graph: not connected");
  return g;
}

Graph Graph::complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return from_edges(n, e);
}

Graph Graph::path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return from_edges(n, e);
}

bool Graph::adjacent(int i, int j) const {
  const auto& nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n(); ++i)
    for (int j : neighbors(i))
      if (i < j) out.emplace_back(i, j);
  return out;
}

std::size_t Graph::num_edges() const {
  std::size_t deg = 0;
  for (const auto& nb : adj_) deg += nb.size();
  return deg / 2;
}

int Graph::diameter() const {
  int best = 0;
  for (int i = 0; i < n(); ++i) {
    const std::vector<int> d = bfs_depths(adj_, i);
    best = std::max(best, *std::max_element(d.begin(), d.end()));
  }
  return best;
}

Graph erdos_renyi_connected(int n, double p, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("erdos_renyi: n must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidInput("erdos_renyi: p must lie in (0, 1]");
  for (std::uint64_t attempt = 0; attempt < 10'000; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    std::vector<std::pair<int, int>> e;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.uniform() < p) {
          e.emplace_back(i, j);
          adj[static_cast<std::size_t>(i)].push_back(j);
          adj[static_cast<std::size_t>(j)].push_back(i);
        }
    if (is_connected(n, adj)) return Graph::from_edges(n, e);
  }
  throw CapExceeded("erdos_renyi: no connected sample in 10^4 attempts; p too small");
}

}  // namespace dpd
