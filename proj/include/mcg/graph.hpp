// Copyright 2026 The mcg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Weighted undirected graphs and the Laplacian-based operators used by the
// consensus and estimator dynamics.

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "mcg/game.hpp"

namespace mcg {

// Tolerance on lambda_2 / lambda_min for connectivity and definiteness.
inline constexpr double kSpectralTol = 1e-10;

struct Edge {
  std::size_t u = 0;  // zero-based
  std::size_t v = 0;
  double weight = 1.0;

  bool operator==(const Edge&) const = default;
};

// Each undirected edge is stored once; a_uv = a_vu = weight.
struct UndirectedGraph {
  std::size_t vertices = 0;
  std::vector<Edge> edges;

  Eigen::MatrixXd adjacency() const;
  // Empty when the edge list is well formed (in range, no self loops, positive
  // weights, no duplicates).
  std::vector<std::string> problems() const;

  bool operator==(const UndirectedGraph&) const = default;
};

// Global graph over all players (cluster-major indexing) plus one graph per
// cluster in local indices.
struct TopologySpec {
  UndirectedGraph global;
  std::vector<UndirectedGraph> clusters;

  bool operator==(const TopologySpec&) const = default;
};

Eigen::MatrixXd laplacian(const UndirectedGraph& g);

// Second-smallest Laplacian eigenvalue. Throws TooFewVertices below 2.
double algebraic_connectivity(const UndirectedGraph& g);

// lambda_2 > kSpectralTol; a single vertex counts as connected.
bool is_connected(const UndirectedGraph& g);
bool is_connected_bfs(const UndirectedGraph& g);

// Vertex counts against the game, cluster graphs being subgraphs of the
// global graph with identical weights, and connectivity of every graph.
std::vector<std::string> validate_topology(const TopologySpec& topo,
                                           const GameSpec& game);

// diag(L^1, ..., L^N).
Eigen::MatrixXd block_cluster_laplacian(const TopologySpec& topo);

// S = kron(L0, I_Nbar) + M over (observer, target) slots, observer-major.
// M's entry at slot (o, t) is the global adjacency weight a0_ot. Throws
// SingularOperator when lambda_min(S) <= kSpectralTol.
Eigen::MatrixXd estimator_operator(const TopologySpec& topo);

struct Spectrum {
  double min = 0.0;
  double max = 0.0;
};

// Extreme eigenvalues of a symmetric matrix.
Spectrum symmetric_spectrum(const Eigen::MatrixXd& m);
// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& m);

}  // namespace mcg
