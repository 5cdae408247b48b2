#pragma once

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

// Test-side utilities kept independent of the library internals so they can
// serve as oracles.
namespace testutil {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

// 1-based edges, union-find connectivity (independent of any BFS).
inline bool edges_connected(int n,
                            const std::vector<std::pair<int, int>>& edges) {
  Dsu d(n);
  int merged = 0;
  for (auto [a, b] : edges)
    if (d.unite(a - 1, b - 1)) ++merged;
  return merged == n - 1;
}

// Random spanning tree plus a few extra edges: always connected.
inline std::vector<std::pair<int, int>> random_connected_edges(
    std::mt19937_64& rng, int n) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 2; v <= n; ++v) {
    int parent = 1 + static_cast<int>(rng() % (v - 1));
    edges.push_back({parent, v});
  }
  int extra = static_cast<int>(rng() % (n + 1));
  for (int e = 0; e < extra; ++e) {
    int a = 1 + static_cast<int>(rng() % n);
    int b = 1 + static_cast<int>(rng() % n);
    if (a != b) edges.push_back({std::min(a, b), std::max(a, b)});
  }
  return edges;
}

// Every connected simple graph on n nodes (n small; 2^(n(n-1)/2) subsets).
inline std::vector<std::vector<std::pair<int, int>>> all_connected_graphs(
    int n) {
  std::vector<std::pair<int, int>> all;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) all.push_back({a, b});
  std::vector<std::vector<std::pair<int, int>>> out;
  for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
    std::vector<std::pair<int, int>> es;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask & (1u << i)) es.push_back(all[i]);
    if (edges_connected(n, es)) out.push_back(es);
  }
  return out;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  double u = (rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

}  // namespace testutil
