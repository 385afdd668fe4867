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

#include <Eigen/Dense>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "mcg/game.hpp"
#include "mcg/graph.hpp"
#include "mcg/scenario.hpp"

namespace mcg::test {

inline std::string scenario_path(const std::string& name) {
  return std::string(MCG_SCENARIO_DIR) + "/" + name;
}

inline Scenario example() { return parse_scenario(scenario_path("paper-example.json")); }

inline CostFunction quadratic(double a, std::vector<double> b, double c = 0.0) {
  CostFunction f;
  f.quadratic = {a, std::move(b), c};
  return f;
}

inline CostFunction with_coupling(CostFunction f, std::size_t cluster,
                                  std::size_t player, double coeff) {
  f.couplings.push_back({{cluster, player}, coeff});
  return f;
}

inline UndirectedGraph path_graph(std::size_t n) {
  UndirectedGraph g{n, {}};
  for (std::size_t v = 0; v + 1 < n; ++v) g.edges.push_back({v, v + 1, 1.0});
  return g;
}

inline UndirectedGraph complete_graph(std::size_t n) {
  UndirectedGraph g{n, {}};
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) g.edges.push_back({u, v, 1.0});
  }
  return g;
}

// Cluster graphs are paths; the global graph is their union plus a chain
// joining the last player of each cluster to the first of the next.
inline TopologySpec chained_paths(const GameSpec& game) {
  TopologySpec t;
  t.global.vertices = game.player_count();
  for (std::size_t j = 0; j < game.cluster_count(); ++j) {
    const std::size_t n = game.cluster_size(j);
    const std::size_t off = game.cluster_offset(j);
    t.clusters.push_back(path_graph(n));
    for (const auto& e : t.clusters.back().edges) {
      t.global.edges.push_back({off + e.u, off + e.v, e.weight});
    }
    if (j + 1 < game.cluster_count()) {
      t.global.edges.push_back({off + n - 1, off + n, 1.0});
    }
  }
  return t;
}

// Quadratic game, one scalar decision per player, with a_i drawn in [1, 3],
// linear terms in [-10, 10] and small couplings so the game stays strongly
// monotone.
inline GameSpec random_quadratic_game(std::mt19937_64& rng,
                                      const std::vector<std::size_t>& sizes,
                                      std::size_t order = 1) {
  std::uniform_real_distribution<double> ua(1.0, 3.0), ub(-10.0, 10.0),
      uc(-0.3, 0.3);
  GameSpec g;
  g.order = order;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    ClusterSpec c;
    for (std::size_t i = 0; i < sizes[j]; ++i) {
      c.players.push_back(quadratic(ua(rng), {ub(rng)}));
    }
    g.clusters.push_back(std::move(c));
  }
  if (sizes.size() > 1) {
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      const std::size_t other = (j + 1) % sizes.size();
      auto& f = g.clusters[j].players[0];
      f.couplings.push_back({{other, sizes[other] - 1}, uc(rng)});
    }
  }
  return g;
}

// Direct solve of the reduced linear system for an all-quadratic game with
// scalar decisions: G_j(z) = sum_i (2 a_i z_j + b_i + sum_c coeff z_target).
inline std::vector<double> linear_ne(const GameSpec& g) {
  const auto n = static_cast<Eigen::Index>(g.cluster_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (const auto& f : g.clusters[j].players) {
      a(j, j) += 2.0 * f.quadratic.a;
      rhs(j) -= f.quadratic.b[0];
      for (const auto& c : f.couplings) {
        a(j, static_cast<Eigen::Index>(c.target.cluster)) += c.coeff;
      }
    }
  }
  const Eigen::VectorXd z = a.fullPivLu().solve(rhs);
  return {z.data(), z.data() + z.size()};
}

// Coefficients k_1..k_m of a random monic polynomial with all roots in the
// open left half plane.
inline std::vector<double> random_hurwitz(std::mt19937_64& rng, std::size_t m) {
  // Product of (s + r) and (s^2 + 2 a s + a^2 + b^2) factors with r, a > 0.
  std::uniform_real_distribution<double> u(0.2, 2.5);
  std::vector<double> poly{1.0};  // highest power first
  auto mul = [&poly](const std::vector<double>& f) {
    std::vector<double> out(poly.size() + f.size() - 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      for (std::size_t j = 0; j < f.size(); ++j) out[i + j] += poly[i] * f[j];
    }
    poly = out;
  };
  std::size_t deg = 0;
  while (deg < m) {
    if (m - deg >= 2 && u(rng) > 1.3) {
      const double a = u(rng), b = u(rng);
      mul({1.0, 2.0 * a, a * a + b * b});
      deg += 2;
    } else {
      mul({1.0, u(rng)});
      deg += 1;
    }
  }
  std::vector<double> k(m);
  for (std::size_t l = 0; l < m; ++l) k[l] = poly[m - l];  // k_1 is constant
  return k;
}

}  // namespace mcg::test
