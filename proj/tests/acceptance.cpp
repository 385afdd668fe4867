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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion 3   run only criterion 3 (repeatable)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcg/error.hpp"
#include "mcg/gains.hpp"
#include "mcg/graph.hpp"
#include "mcg/ne_oracle.hpp"
#include "mcg/report.hpp"
#include "mcg/scenario.hpp"
#include "mcg/simulator.hpp"
#include "mcg/trajectory_io.hpp"
#include "support.hpp"

using namespace mcg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

const std::uint64_t kSeeds[] = {1, 2, 3};

std::vector<double> oracle_z(const GameSpec& g) {
  const auto r = solve_ne(g, std::vector<double>(g.cluster_count() * g.q, 0.0));
  if (!r.converged) throw Error(ErrorCode::kNoConvergence, "oracle failed");
  return r.z;
}

// Criterion 1: example scenario, dt = 2e-4, t_final = 60, three seeds.
Outcome convergence() {
  const auto sc = test::example();
  const auto z = oracle_z(sc.game);
  Outcome o{true, ""};
  for (auto seed : kSeeds) {
    auto cfg = sc.integrator;
    cfg.dt = 2e-4;
    cfg.t_final = 60.0;
    cfg.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto traj = simulate(sc.game, sc.topology, sc.gains, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto m = run_metrics(sc.game, table_from(sc.game, traj), z);
    const bool ok = m.consensus_err <= 1e-3 && m.ne_residual <= 1e-3 &&
                    m.max_error_to_ne <= 1e-2 && secs <= 60.0;
    o.pass = o.pass && ok;
    o.detail += " seed " + std::to_string(seed) + ": spread " +
                sci(m.consensus_err) + ", ne_residual " + sci(m.ne_residual) +
                ", max|x-z*| " + sci(m.max_error_to_ne) + ", " +
                fmt("%.1f", secs) + " s;";
  }
  return o;
}

// Criterion 2: ln ||x - z*|| slope over [T/3, 2T/3] negative with r^2 >= 0.95.
Outcome rate() {
  const auto sc = test::example();
  const auto z = oracle_z(sc.game);
  const auto x_ref = lift(sc.game, z);
  Outcome o{true, ""};
  for (auto seed : kSeeds) {
    auto cfg = sc.integrator;
    cfg.dt = 2e-4;
    cfg.t_final = 60.0;
    cfg.seed = seed;
    const auto traj = simulate(sc.game, sc.topology, sc.gains, cfg);
    const auto fit = rate_fit(traj, x_ref, cfg.t_final / 3.0, 2.0 * cfg.t_final / 3.0);
    const bool ok = fit.rate < 0.0 && fit.r2 >= 0.95;
    o.pass = o.pass && ok;
    o.detail += " seed " + std::to_string(seed) + ": rate " + sci(fit.rate) +
                ", r2 " + fmt("%.4f", fit.r2) + ";";
  }
  return o;
}

// Criterion 3: Newton and fixed point agree; quadratic games match the
// direct linear solve.
Outcome oracle() {
  NeOptions fp;
  fp.method = NeMethod::kFixedPoint;
  const auto g = test::example().game;
  const std::vector<double> z0(3, 0.0);
  const auto a = solve_ne(g, z0);
  const auto b = solve_ne(g, z0, fp);
  double fixed_gap = 0.0;
  for (int k = 0; k < 3; ++k) fixed_gap = std::max(fixed_gap, std::fabs(a.z[k] - b.z[k]));
  bool ok = a.converged && b.converged && fixed_gap <= 1e-8;

  std::mt19937_64 rng(2026);
  double method_gap = 0.0, direct_gap = 0.0;
  for (std::size_t trial = 0; trial < 10; ++trial) {
    const auto q = test::random_quadratic_game(rng, {1 + trial % 3, 2, 1 + trial % 2});
    const std::vector<double> q0(q.cluster_count(), 0.0);
    const auto qa = solve_ne(q, q0);
    const auto qb = solve_ne(q, q0, fp);
    const auto direct = test::linear_ne(q);
    ok = ok && qa.converged && qb.converged;
    for (std::size_t k = 0; k < direct.size(); ++k) {
      method_gap = std::max(method_gap, std::fabs(qa.z[k] - qb.z[k]));
      direct_gap = std::max(direct_gap, std::fabs(qa.z[k] - direct[k]));
    }
  }
  ok = ok && method_gap <= 1e-8 && direct_gap <= 1e-10;
  return {ok, " example: methods differ by " + sci(fixed_gap) +
                  "; random quadratic games: methods " + sci(method_gap) +
                  ", linear solve " + sci(direct_gap)};
}

// Criterion 4: all twelve example costs against central differences.
Outcome gradients() {
  const auto g = test::example().game;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  std::size_t checked = 0, failed = 0;
  for (std::size_t j = 0; j < g.cluster_count(); ++j) {
    for (std::size_t i = 0; i < g.cluster_size(j); ++i) {
      for (int s = 0; s < 100; ++s) {
        std::vector<double> x{u(rng)};
        OthersMap others;
        for (const auto& c : g.cost({j, i}).couplings) others[c.target] = {u(rng)};
        const double grad = grad_own(g, j, i, x, others)[0];
        const double h = 1e-6;
        x[0] += h;
        const double fp = eval_cost(g, j, i, x, others);
        x[0] -= 2.0 * h;
        const double fm = eval_cost(g, j, i, x, others);
        const double rel = std::fabs(grad - (fp - fm) / (2.0 * h)) / (1.0 + std::fabs(grad));
        worst = std::max(worst, rel);
        ++checked;
        if (rel > 1e-6) ++failed;
      }
    }
  }
  return {failed == 0, " " + std::to_string(checked) + " points, " +
                           std::to_string(failed) + " outside tolerance, worst " +
                           sci(worst)};
}

// Criterion 5: Lyapunov certificates.
Outcome lyapunov() {
  const auto a = companion_matrix({1, 2, 1});
  const double r121 = lyapunov_residual_p1(solve_p1(a), a);
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = test::random_hurwitz(rng, 1 + trial % 5);  // n = 2..6
    const auto ak = companion_matrix(k);
    worst = std::max(worst, lyapunov_residual_p1(solve_p1(ak), ak));
  }
  const auto s = estimator_operator(test::example().topology);
  const double r2 = lyapunov_residual_p2(solve_p2(s), s);
  return {r121 <= 1e-8 && worst <= 1e-8 && r2 <= 1e-8,
          " P1(1,2,1) " + sci(r121) + ", worst random P1 " + sci(worst) +
              ", P2 on " + std::to_string(s.rows()) + "x" +
              std::to_string(s.cols()) + " S " + sci(r2)};
}

// Criterion 6: equilibrium construction is a fixed point of the dynamics.
Outcome fixed_point() {
  const auto sc = test::example();
  const auto eq = equilibrium_state(sc.game, lift(sc.game, oracle_z(sc.game)));
  const double res = equilibrium_residual(sc.game, sc.topology, sc.gains, eq);
  auto cfg = sc.integrator;
  cfg.t_final = 10.0;
  cfg.stop_tol = 0.0;
  const auto traj = simulate_from(sc.game, sc.topology, sc.gains, cfg, eq);
  double worst = 0.0;
  for (const auto& m : traj.metrics) worst = std::max(worst, m.ne_residual);
  return {res <= 1e-8 && worst <= 1e-8 && traj.times.back() >= 10.0 - 1e-9,
          " equilibrium_residual " + sci(res) + ", max ne_residual over " +
              fmt("%.0f", traj.times.back()) + " s " + sci(worst)};
}

// Criterion 7: per-cluster consensus sums over the full horizon.
Outcome conservation() {
  const auto sc = test::example();
  const auto traj = simulate(sc.game, sc.topology, sc.gains, sc.integrator);
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto y = traj.state(k).y();
    for (std::size_t j = 0; j < sc.game.cluster_count(); ++j) {
      double sum = 0.0;
      const std::size_t off = sc.game.cluster_offset(j);
      for (std::size_t i = 0; i < sc.game.cluster_size(j); ++i) sum += y[off + i];
      worst = std::max(worst, std::fabs(sum));
    }
  }
  return {worst <= 1e-9, " max |sum_i y_i^j| " + sci(worst) + " over " +
                             std::to_string(traj.size()) + " samples to t = " +
                             fmt("%.0f", traj.times.back())};
}

// Criterion 8: one cluster is distributed optimization; singleton clusters
// are a plain noncooperative game.
Outcome reductions() {
  const auto one = parse_scenario(test::scenario_path("single-cluster.json"));
  double sum_a = 0.0, sum_b = 0.0;
  for (const auto& f : one.game.clusters[0].players) {
    sum_a += f.quadratic.a;
    sum_b += f.quadratic.b[0];
  }
  const double opt = -sum_b / (2.0 * sum_a);
  const auto t1 = simulate(one.game, one.topology, one.gains, one.integrator);
  double e1 = 0.0;
  for (double v : t1.x(t1.size() - 1)) e1 = std::max(e1, std::fabs(v - opt));

  const auto sing = parse_scenario(test::scenario_path("singleton-clusters.json"));
  const auto ne = test::linear_ne(sing.game);
  const auto t2 = simulate(sing.game, sing.topology, sing.gains, sing.integrator);
  double e2 = 0.0;
  const auto x2 = t2.x(t2.size() - 1);
  for (std::size_t k = 0; k < ne.size(); ++k) e2 = std::max(e2, std::fabs(x2[k] - ne[k]));
  return {e1 <= 1e-6 && e2 <= 1e-6,
          " single cluster: max|x - " + fmt("%.6f", opt) + "| = " + sci(e1) +
              "; singleton clusters: max|x - linear NE| = " + sci(e2)};
}

// Criterion 9: byte-identical CSVs from identical config and seed.
Outcome determinism() {
  const auto sc = test::example();
  const auto a = to_csv(table_from(sc.game, simulate(sc.game, sc.topology, sc.gains, sc.integrator)));
  const auto b = to_csv(table_from(sc.game, simulate(sc.game, sc.topology, sc.gains, sc.integrator)));
  return {a == b, " two runs of " + std::to_string(a.size()) + " bytes, " +
                      (a == b ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criterion number (1-9)")
      ->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"example scenario converges by t = 60 (3 seeds)", convergence},
      {"exponential rate surrogate on [T/3, 2T/3]", rate},
      {"oracle cross-validation", oracle},
      {"gradient finite-difference suite", gradients},
      {"Lyapunov certificates", lyapunov},
      {"equilibrium is a fixed point", fixed_point},
      {"consensus-sum conservation", conservation},
      {"single-cluster and singleton-cluster reductions", reductions},
      {"determinism", determinism},
  };
  std::set<int> run(selected.begin(), selected.end());
  if (run.empty()) {
    for (int c = 1; c <= 9; ++c) run.insert(c);
  }
  int failures = 0;
  for (int c : run) {
    const auto& [name, check] = criteria[static_cast<std::size_t>(c - 1)];
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string(" error: ") + e.what()};
    }
    std::printf("%s criterion %d: %s |%s\n", o.pass ? "PASS" : "FAIL", c,
                name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
