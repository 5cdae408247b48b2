#pragma once

#include <utility>
#include <vector>

namespace qcons {

// Undirected, unweighted communication topology. Agents are 1-based in edge
// lists and output files, 0-based in internal storage.
struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adjacency;  // n x n, 0/1, symmetric, zero diagonal
  std::vector<std::vector<int>> neighbors;  // ascending, 0-based

  int degree(int v) const { return static_cast<int>(neighbors.at(v).size()); }
};

// Laplacian spectrum of a Graph. eigenvalues are ascending, so eigenvalues[0]
// is the structural zero and eigenvalues[1] == lambda2.
struct SpectralData {
  std::vector<std::vector<double>> laplacian;
  std::vector<double> eigenvalues;
  double lambda2 = 0.0;
  double lambdaN = 0.0;
  int max_degree = 0;
  bool connected = false;

  int n() const { return static_cast<int>(eigenvalues.size()); }
};

// Builds a graph from 1-based undirected edges. Throws std::invalid_argument
// on self-loops or endpoints outside [1, n]. Duplicate edges are idempotent.
Graph from_edge_list(int n, const std::vector<std::pair<int, int>>& edges);

// Laplacian spectrum plus a BFS connectivity cross-check. Connectivity via
// lambda2 > tol and via BFS must agree or this throws std::logic_error.
SpectralData spectral(const Graph& g);

// Contraction factor of the sampled averaging map: max_{i >= 2} |1 - T li|.
// Requires a connected graph and T > 0.
double rho_h(const SpectralData& s, double T);

}  // namespace qcons
