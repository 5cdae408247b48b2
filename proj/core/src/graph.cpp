#include "qcons/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace qcons {

namespace {

bool bfs_connected(const Graph& g) {
  if (g.n <= 1) return true;
  std::vector<char> seen(g.n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : g.neighbors[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  return reached == g.n;
}

}  // namespace

Graph from_edge_list(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) throw std::invalid_argument("graph: n must be >= 1");
  Graph g;
  g.n = n;
  g.adjacency.assign(n, std::vector<int>(n, 0));
  for (auto [a, b] : edges) {
    if (a < 1 || a > n || b < 1 || b > n)
      throw std::invalid_argument("graph: edge " + std::to_string(a) + "-" +
                                  std::to_string(b) + " out of range 1.." +
                                  std::to_string(n));
    if (a == b)
      throw std::invalid_argument("graph: self loop at node " +
                                  std::to_string(a));
    g.adjacency[a - 1][b - 1] = 1;
    g.adjacency[b - 1][a - 1] = 1;
  }
  g.neighbors.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (g.adjacency[i][j]) g.neighbors[i].push_back(j);
  return g;
}

SpectralData spectral(const Graph& g) {
  const int n = g.n;
  SpectralData out;
  out.laplacian.assign(n, std::vector<double>(n, 0.0));
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    int deg = g.degree(i);
    out.max_degree = std::max(out.max_degree, deg);
    L(i, i) = deg;
    for (int j : g.neighbors[i]) L(i, j) = -1.0;
    for (int j = 0; j < n; ++j) out.laplacian[i][j] = L(i, j);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("graph: eigensolver failed");
  out.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + n);
  // Ascending by construction; clamp the structural zero's rounding noise.
  for (double& v : out.eigenvalues)
    if (std::abs(v) < 1e-10) v = 0.0;

  out.lambda2 = n >= 2 ? out.eigenvalues[1] : 0.0;
  out.lambdaN = out.eigenvalues[n - 1];

  bool spectral_connected = n >= 2 ? out.lambda2 > 1e-9 : true;
  bool walk_connected = bfs_connected(g);
  if (spectral_connected != walk_connected)
    throw std::logic_error("graph: spectral and BFS connectivity disagree");
  out.connected = walk_connected;
  return out;
}

double rho_h(const SpectralData& s, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("rho_h: T must be > 0");
  if (s.n() < 2 || !s.connected)
    throw std::invalid_argument("rho_h: graph must be connected with n >= 2");
  double worst = 0.0;
  for (int i = 1; i < s.n(); ++i)
    worst = std::max(worst, std::abs(1.0 - T * s.eigenvalues[i]));
  return worst;
}

}  // namespace qcons
