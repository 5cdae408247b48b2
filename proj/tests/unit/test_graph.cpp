#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qcons/graph.hpp"
#include "support/helpers.hpp"

using qcons::from_edge_list;
using qcons::Graph;
using qcons::rho_h;
using qcons::spectral;
using qcons::SpectralData;

namespace {
const std::vector<std::pair<int, int>> kFiveCycle{
    {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}};
}

TEST_CASE("edge list builds a symmetric adjacency with sorted neighbors") {
  Graph g = from_edge_list(5, kFiveCycle);
  REQUIRE(g.n == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(g.degree(i) == 2);
    CHECK(g.adjacency[i][i] == 0);
    for (int j = 0; j < 5; ++j) CHECK(g.adjacency[i][j] == g.adjacency[j][i]);
    CHECK(std::is_sorted(g.neighbors[i].begin(), g.neighbors[i].end()));
  }
  // Duplicate edges are idempotent.
  auto doubled = kFiveCycle;
  doubled.push_back({2, 1});
  Graph g2 = from_edge_list(5, doubled);
  CHECK(g2.adjacency == g.adjacency);
}

TEST_CASE("edge list rejects self loops and out of range endpoints") {
  CHECK_THROWS_AS(from_edge_list(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(from_edge_list(3, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(from_edge_list(3, {{1, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(from_edge_list(0, {}), std::invalid_argument);
}

TEST_CASE("two node path spectrum is {0, 2}") {
  SpectralData s = spectral(from_edge_list(2, {{1, 2}}));
  REQUIRE(s.n() == 2);
  CHECK(std::abs(s.eigenvalues[0]) < 1e-9);
  CHECK(s.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(s.lambda2 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(s.lambdaN == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(s.connected);
  CHECK(s.max_degree == 1);
}

TEST_CASE("five cycle spectrum matches the circulant closed form") {
  SpectralData s = spectral(from_edge_list(5, kFiveCycle));
  std::vector<double> expected;
  for (int k = 0; k < 5; ++k)
    expected.push_back(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / 5.0));
  std::sort(expected.begin(), expected.end());
  REQUIRE(s.n() == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(s.eigenvalues[i] - expected[i]) < 1e-9);
  CHECK(std::abs(s.lambda2 - 1.3819660112501051) < 1e-9);
  CHECK(std::abs(s.lambdaN - 3.6180339887498949) < 1e-9);
  CHECK(s.max_degree == 2);
  CHECK(s.connected);
}

TEST_CASE("laplacian rows sum to zero") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng() % 7);
    SpectralData s =
        spectral(from_edge_list(n, testutil::random_connected_edges(rng, n)));
    for (const auto& row : s.laplacian) {
      double sum = 0.0;
      for (double v : row) sum += v;
      CHECK(std::abs(sum) < 1e-10);
    }
  }
}

TEST_CASE("disconnected graph reports lambda2 == 0 and connected == false") {
  SpectralData s = spectral(from_edge_list(4, {{1, 2}, {3, 4}}));
  CHECK_FALSE(s.connected);
  CHECK(s.lambda2 == 0.0);
  CHECK_THROWS_AS(rho_h(s, 0.1), std::invalid_argument);
}

TEST_CASE("disjoint union spectrum is the multiset union of the parts") {
  // Triangle on 1..3 plus an edge 4-5.
  SpectralData whole =
      spectral(from_edge_list(5, {{1, 2}, {2, 3}, {3, 1}, {4, 5}}));
  SpectralData tri = spectral(from_edge_list(3, {{1, 2}, {2, 3}, {3, 1}}));
  SpectralData pair = spectral(from_edge_list(2, {{1, 2}}));
  std::vector<double> merged = tri.eigenvalues;
  merged.insert(merged.end(), pair.eigenvalues.begin(),
                pair.eigenvalues.end());
  std::sort(merged.begin(), merged.end());
  REQUIRE(whole.n() == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(whole.eigenvalues[i] - merged[i]) < 1e-9);
}

TEST_CASE("rho_h frozen values") {
  SpectralData pair = spectral(from_edge_list(2, {{1, 2}}));
  CHECK(std::abs(rho_h(pair, 0.5)) < 1e-12);  // 1 - 0.5 * 2

  SpectralData cyc = spectral(from_edge_list(5, kFiveCycle));
  // max(|1 - 0.2 * 1.38197|, |1 - 0.2 * 3.61803|) = 1 - 0.2 lambda2.
  CHECK(std::abs(rho_h(cyc, 0.2) - 0.723606797749979) < 1e-9);
  // At T = 0.05 the same branch applies.
  CHECK(std::abs(rho_h(cyc, 0.05) - 0.9309016994374947) < 1e-9);
}

TEST_CASE("rho_h rejects nonpositive T") {
  SpectralData s = spectral(from_edge_list(2, {{1, 2}}));
  CHECK_THROWS_AS(rho_h(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rho_h(s, -0.1), std::invalid_argument);
}

TEST_CASE("rho_h < 1 for every T inside (0, 2/lambdaN)") {
  std::mt19937_64 rng(23);
  auto check_graph = [&](const std::vector<std::pair<int, int>>& edges,
                         int n) {
    SpectralData s = spectral(from_edge_list(n, edges));
    if (!s.connected) return;
    for (int t = 0; t < 20; ++t) {
      double u = 0.01 + 0.98 * testutil::uniform(rng, 0.0, 1.0);
      double T = u * 2.0 / s.lambdaN;
      double r = rho_h(s, T);
      CHECK(r < 1.0);
      CHECK(r >= 0.0);
      // Small T branch: rho_h = 1 - T lambda2.
      if (T < 2.0 / (s.lambda2 + s.lambdaN))
        CHECK(std::abs(r - (1.0 - T * s.lambda2)) < 1e-9);
    }
  };
  for (int n = 2; n <= 4; ++n)
    for (const auto& edges : testutil::all_connected_graphs(n))
      check_graph(edges, n);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 5 + static_cast<int>(rng() % 4);
    check_graph(testutil::random_connected_edges(rng, n), n);
  }
}
