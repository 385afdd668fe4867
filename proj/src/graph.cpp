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

#include "mcg/graph.hpp"

#include <queue>
#include <set>
#include <utility>

#include "mcg/error.hpp"

namespace mcg {

Eigen::MatrixXd UndirectedGraph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(vertices, vertices);
  for (const auto& e : edges) {
    a(e.u, e.v) = e.weight;
    a(e.v, e.u) = e.weight;
  }
  return a;
}

std::vector<std::string> UndirectedGraph::problems() const {
  std::vector<std::string> out;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    const std::string name = "edge {" + std::to_string(e.u + 1) + "," +
                             std::to_string(e.v + 1) + "}";
    if (e.u >= vertices || e.v >= vertices) {
      out.push_back(name + " references a missing vertex");
      continue;
    }
    if (e.u == e.v) out.push_back(name + " is a self loop");
    if (!(e.weight > 0.0)) out.push_back(name + " has non-positive weight");
    if (!seen.insert(std::minmax(e.u, e.v)).second) {
      out.push_back(name + " is listed twice");
    }
  }
  return out;
}

Eigen::MatrixXd laplacian(const UndirectedGraph& g) {
  const Eigen::MatrixXd a = g.adjacency();
  Eigen::MatrixXd l = -a;
  l.diagonal() = a.rowwise().sum();
  return l;
}

double algebraic_connectivity(const UndirectedGraph& g) {
  if (g.vertices < 2) {
    throw Error(ErrorCode::kTooFewVertices,
                "algebraic connectivity needs at least 2 vertices");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(g),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(1);
}

bool is_connected(const UndirectedGraph& g) {
  if (g.vertices <= 1) return true;
  return algebraic_connectivity(g) > kSpectralTol;
}

bool is_connected_bfs(const UndirectedGraph& g) {
  if (g.vertices <= 1) return true;
  std::vector<std::vector<std::size_t>> nbrs(g.vertices);
  for (const auto& e : g.edges) {
    nbrs[e.u].push_back(e.v);
    nbrs[e.v].push_back(e.u);
  }
  std::vector<bool> seen(g.vertices, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : nbrs[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        frontier.push(v);
      }
    }
  }
  return count == g.vertices;
}

std::vector<std::string> validate_topology(const TopologySpec& topo,
                                           const GameSpec& game) {
  std::vector<std::string> out;
  for (auto& p : topo.global.problems()) out.push_back("global graph: " + p);
  if (topo.global.vertices != game.player_count()) {
    out.push_back("global graph has " + std::to_string(topo.global.vertices) +
                  " vertices but the game has " +
                  std::to_string(game.player_count()) + " players");
  }
  if (topo.clusters.size() != game.cluster_count()) {
    out.push_back("expected one graph per cluster (" +
                  std::to_string(game.cluster_count()) + "), got " +
                  std::to_string(topo.clusters.size()));
  }
  if (!out.empty()) return out;

  const Eigen::MatrixXd a0 = topo.global.adjacency();
  for (std::size_t j = 0; j < topo.clusters.size(); ++j) {
    const auto& g = topo.clusters[j];
    const std::string name = "cluster " + std::to_string(j + 1) + " graph";
    bool well_formed = true;
    for (auto& p : g.problems()) {
      out.push_back(name + ": " + p);
      well_formed = false;
    }
    if (g.vertices != game.cluster_size(j)) {
      out.push_back(name + " has " + std::to_string(g.vertices) +
                    " vertices but the cluster has " +
                    std::to_string(game.cluster_size(j)) + " players");
      continue;
    }
    if (!well_formed) continue;
    const std::size_t off = game.cluster_offset(j);
    for (const auto& e : g.edges) {
      if (a0(off + e.u, off + e.v) != e.weight) {
        out.push_back(name + ": edge {" + std::to_string(e.u + 1) + "," +
                      std::to_string(e.v + 1) +
                      "} is absent from the global graph or has a different "
                      "weight");
      }
    }
    if (!is_connected(g)) out.push_back(name + " is disconnected");
  }
  if (topo.global.problems().empty() && !is_connected(topo.global)) {
    out.emplace_back("global graph is disconnected");
  }
  return out;
}

Eigen::MatrixXd block_cluster_laplacian(const TopologySpec& topo) {
  std::size_t n = 0;
  for (const auto& g : topo.clusters) n += g.vertices;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  std::size_t off = 0;
  for (const auto& g : topo.clusters) {
    out.block(off, off, g.vertices, g.vertices) = laplacian(g);
    off += g.vertices;
  }
  return out;
}

Eigen::MatrixXd estimator_operator(const TopologySpec& topo) {
  const std::size_t n = topo.global.vertices;
  const Eigen::MatrixXd l0 = laplacian(topo.global);
  const Eigen::MatrixXd a0 = topo.global.adjacency();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n * n, n * n);
  for (std::size_t o = 0; o < n; ++o) {
    for (std::size_t p = 0; p < n; ++p) {
      if (l0(o, p) == 0.0) continue;
      for (std::size_t t = 0; t < n; ++t) s(o * n + t, p * n + t) = l0(o, p);
    }
    for (std::size_t t = 0; t < n; ++t) s(o * n + t, o * n + t) += a0(o, t);
  }
  const Spectrum spec = symmetric_spectrum(s);
  if (!(spec.min > kSpectralTol)) {
    throw Error(ErrorCode::kSingularOperator,
                "estimator operator is not positive definite (lambda_min = " +
                    std::to_string(spec.min) +
                    "); the global graph must be connected with at least one "
                    "edge");
  }
  return s;
}

Spectrum symmetric_spectrum(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace mcg
