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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mcg/report.hpp"
#include "support.hpp"

using namespace mcg;

TEST_CASE("gains report on the example scenario") {
  const auto sc = test::example();
  const auto r = gains_report(sc);
  CHECK(r.omega_theta_sampled);
  CHECK(r.sampled_monotone);
  CHECK(r.omega > 0.0);
  CHECK(r.theta >= r.omega);
  CHECK(r.p1_residual <= 1e-8);
  CHECK(r.p2_residual <= 1e-8);
  CHECK(r.a_bar1 > 0.0);
  CHECK(r.lambda_min_s > 0.0);
  CHECK(r.norm_l == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK(r.mu_defaulted);
  REQUIRE(r.bounds);
  CHECK(r.mu > r.bounds->mu_min);
  CHECK(r.certification.lines.size() == 5);
  CHECK((r.certification.verdict == "certified" ||
         r.certification.verdict == "not certified"));
  const auto j = to_json(r);
  CHECK(j["certification"]["lines"].size() == 5);
  CHECK(j["p1"].size() == 3);
}

TEST_CASE("declared constants are used as given") {
  auto sc = test::example();
  sc.assumptions.omega = 2.0;
  sc.assumptions.theta = 10.0;
  sc.gains.mu = 5.0;
  const auto r = gains_report(sc);
  CHECK_FALSE(r.omega_theta_sampled);
  CHECK(r.omega == 2.0);
  CHECK(r.theta == 10.0);
  CHECK(r.mu == 5.0);
  CHECK_FALSE(r.mu_defaulted);
}

TEST_CASE("run metrics from a table") {
  GameSpec g;
  g.clusters = {{"a", {test::quadratic(1.0, {-2.0}), test::quadratic(1.0, {-2.0})}}};
  TrajectoryTable t;
  for (int k = 0; k <= 30; ++k) {
    const double e = std::exp(-0.5 * k);
    t.times.push_back(k);
    t.x.push_back({1.0 + e, 1.0 + e});
    t.derivs.push_back({});
    t.y.push_back({0.25, -0.25});
    t.metrics.push_back({0.0, 0.0, 0.125});
  }
  const auto m = run_metrics(g, t, {1.0});
  CHECK(m.t_final == 30.0);
  CHECK(m.samples == 31);
  CHECK(m.consensus_err == 0.0);
  CHECK(m.est_err == 0.125);
  CHECK(m.max_error_to_ne == doctest::Approx(std::exp(-15.0)));
  CHECK(m.ne_residual == doctest::Approx(4.0 * std::exp(-15.0)));
  CHECK(m.residual_initial == doctest::Approx(4.0));
  CHECK(m.max_y_cluster_sum == 0.0);
  REQUIRE(m.rate);
  CHECK(m.rate->rate == doctest::Approx(-0.5));
  CHECK(m.rate_t1 == 10.0);
  CHECK(m.verdict == "converged");

  t.x.back() = {1.0, 1.1};
  CHECK(run_metrics(g, t, {1.0}).verdict == "not converged");
}

TEST_CASE("metrics recomputed from the written CSV are identical") {
  const auto sc = test::example();
  auto cfg = sc.integrator;
  cfg.t_final = 0.5;
  const auto traj = simulate(sc.game, sc.topology, sc.gains, cfg);
  const auto oracle = run_oracle(sc.game);
  const auto table = table_from(sc.game, traj);
  const auto live = run_metrics(sc.game, table, oracle.z);
  std::stringstream ss(to_csv(table));
  const auto again = run_metrics(sc.game, read_csv(ss, sc.game), oracle.z);
  CHECK(to_json(live) == to_json(again));
}
