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

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "mcg/ne_oracle.hpp"
#include "mcg/simulator.hpp"
#include "support.hpp"

using namespace mcg;

TEST_CASE("lift and reduced gradient") {
  GameSpec g;
  g.clusters = {{"a", {test::quadratic(1, {0}), test::quadratic(1, {0})}},
                {"b", {test::quadratic(1, {0}), test::quadratic(1, {0}),
                       test::quadratic(1, {0})}}};
  CHECK(lift(g, std::vector<double>{2.0, -1.0}) ==
        std::vector<double>{2, 2, -1, -1, -1});
  const auto gz = reduced_gradient(g, std::vector<double>{2.0, -1.0});
  CHECK(gz == std::vector<double>{2 * 2 * 2.0, 2 * 3 * -1.0});

  const auto sc = test::example();
  CHECK(reduced_gradient(sc.game, std::vector<double>(3, 0.0)) ==
        std::vector<double>{-238, -187, -153});
}

TEST_CASE("textbook equilibria") {
  GameSpec one;
  one.clusters = {{"a", {test::quadratic(1.0, {-6.0}, 9.0)}}};
  for (auto m : {NeMethod::kDampedNewton, NeMethod::kFixedPoint}) {
    NeOptions opt;
    opt.method = m;
    const auto r = solve_ne(one, std::vector<double>{0.0}, opt);
    CHECK(r.converged);
    CHECK(r.z[0] == doctest::Approx(3.0).epsilon(1e-10));
  }

  GameSpec two;
  two.clusters = {{"a", {test::with_coupling(test::quadratic(1.0, {0.0}), 1, 0, 1.0)}},
                  {"b", {test::quadratic(1.0, {2.0})}}};
  const auto r = solve_ne(two, std::vector<double>{0.0, 0.0});
  CHECK(r.converged);
  CHECK(r.z[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.z[1] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(r.residual <= 1e-10);
}

TEST_CASE("example equilibrium from both methods") {
  const auto g = test::example().game;
  NeOptions fp;
  fp.method = NeMethod::kFixedPoint;
  const auto a = solve_ne(g, std::vector<double>(3, 0.0));
  const auto b = solve_ne(g, std::vector<double>(3, 0.0), fp);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(a.method_used == NeMethod::kDampedNewton);
  CHECK(b.method_used == NeMethod::kFixedPoint);
  for (int k = 0; k < 3; ++k) CHECK(std::fabs(a.z[k] - b.z[k]) <= 1e-8);
  const auto ga = reduced_gradient(g, a.z);
  CHECK(std::hypot(ga[0], ga[1], ga[2]) <= 1e-10);
  // lifted equilibrium is a consensus NE
  CHECK(ne_residual(g, lift(g, a.z)) <= 1e-8);
}

TEST_CASE("multi-start agrees") {
  const auto g = test::example().game;
  const auto ms = solve_ne_multistart(g, {}, 5, 3);
  CHECK(ms.runs.size() == 6);
  for (const auto& r : ms.runs) CHECK(r.converged);
  CHECK(ms.max_disagreement <= 1e-8);
}

TEST_CASE("permuting players inside a cluster does not move the equilibrium") {
  const auto g = test::example().game;
  const auto base = solve_ne(g, std::vector<double>(3, 0.0));
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    GameSpec p = g;
    // couplings target (cluster, player), so permuting a cluster means
    // remapping every coupling that points into it
    for (std::size_t j = 0; j < p.cluster_count(); ++j) {
      std::vector<std::size_t> perm(p.cluster_size(j));
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<CostFunction> moved(perm.size());
      for (std::size_t i = 0; i < perm.size(); ++i) {
        moved[perm[i]] = g.clusters[j].players[i];
      }
      p.clusters[j].players = moved;
      for (auto& c : p.clusters) {
        for (auto& f : c.players) {
          for (auto& cp : f.couplings) {
            if (cp.target.cluster == j) cp.target.player = perm[cp.target.player];
          }
        }
      }
    }
    const auto r = solve_ne(p, std::vector<double>(3, 0.0));
    for (int k = 0; k < 3; ++k) CHECK(std::fabs(r.z[k] - base.z[k]) <= 1e-8);
  }
}

TEST_CASE("random quadratic games match the linear solve") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = test::random_quadratic_game(rng, {2, 1, 3, 2});
    const auto direct = test::linear_ne(g);
    NeOptions fp;
    fp.method = NeMethod::kFixedPoint;
    const auto a = solve_ne(g, std::vector<double>(4, 0.0));
    const auto b = solve_ne(g, std::vector<double>(4, 0.0), fp);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    for (int k = 0; k < 4; ++k) {
      CHECK(std::fabs(a.z[k] - direct[k]) <= 1e-10);
      CHECK(std::fabs(a.z[k] - b.z[k]) <= 1e-8);
    }
  }
}

TEST_CASE("non-convergence returns the best iterate") {
  GameSpec g;
  g.clusters = {{"a", {test::quadratic(1.0, {-6.0})}}};
  NeOptions opt;
  opt.method = NeMethod::kFixedPoint;
  opt.max_iter = 2;
  opt.gamma = 0.01;
  const auto r = solve_ne(g, std::vector<double>{0.0}, opt);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  CHECK(r.residual < 6.0);
}

TEST_CASE("singular Jacobian falls back to fixed point") {
  // G = (2 z1 + 2 z2 - 2, 2 z1 + 2 z2 - 2) has a rank-one Jacobian.
  GameSpec g;
  g.clusters = {{"a", {test::with_coupling(test::quadratic(1.0, {-2.0}), 1, 0, 2.0)}},
                {"b", {test::with_coupling(test::quadratic(1.0, {-2.0}), 0, 0, 2.0)}}};
  const auto r = solve_ne(g, std::vector<double>{0.0, 0.0});
  CHECK(r.fell_back);
  CHECK(r.method_used == NeMethod::kFixedPoint);
  CHECK(r.converged);
  CHECK(r.z[0] + r.z[1] == doctest::Approx(1.0));
}
