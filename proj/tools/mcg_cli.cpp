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

// mcg: validate scenarios, certify gains, solve for the Nash equilibrium,
// simulate the closed loop and re-derive run metrics from a trajectory CSV.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 validation failure,
// 3 no convergence or non-finite state.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "mcg/error.hpp"
#include "mcg/kernels/kernels.hpp"
#include "mcg/ne_oracle.hpp"
#include "mcg/report.hpp"
#include "mcg/scenario.hpp"
#include "mcg/simulator.hpp"
#include "mcg/trajectory_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;

struct Overrides {
  std::optional<double> t_final;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::optional<double> stop_tol;
  std::optional<std::size_t> record_every;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("mcg");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("MCG_LOG")) {
    spdlog::set_level(spdlog::level::from_str(lvl));
  }
}

json issues_json(const std::vector<mcg::Issue>& issues) {
  json out = json::array();
  for (const auto& i : issues) {
    out.push_back({{"code", std::string(mcg::to_string(i.code))},
                   {"path", i.path},
                   {"message", i.message}});
  }
  return out;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

mcg::Scenario load(const std::string& path, const Overrides& o) {
  mcg::Scenario s = mcg::parse_scenario(path);
  auto& c = s.integrator;
  if (o.t_final) c.t_final = *o.t_final;
  if (o.dt) c.dt = *o.dt;
  if (o.seed) c.seed = *o.seed;
  if (o.stop_tol) c.stop_tol = *o.stop_tol;
  if (o.record_every) c.record_every = *o.record_every;
  auto issues = mcg::validate_scenario(s);
  if (!issues.empty()) throw mcg::ScenarioError(std::move(issues));
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

mcg::OracleSummary oracle_or_throw(const mcg::GameSpec& game) {
  mcg::OracleSummary o = mcg::run_oracle(game);
  if (!o.converged) {
    throw mcg::Error(mcg::ErrorCode::kNoConvergence,
                     "equilibrium solver stopped at residual " +
                         std::to_string(o.residual));
  }
  return o;
}

mcg::RunReport simulate_one(const mcg::Scenario& s, const fs::path& dir) {
  fs::create_directories(dir);
  mcg::RunReport r;
  r.scenario = s.name;
  r.seed = s.integrator.seed;
  r.config_hash = mcg::config_hash(s);

  auto t0 = std::chrono::steady_clock::now();
  r.oracle = oracle_or_throw(s.game);
  r.oracle_seconds = seconds_since(t0);

  try {
    r.certification = mcg::gains_report(s).certification;
  } catch (const mcg::Error& e) {
    spdlog::warn("certification skipped: {}", e.what());
  }

  spdlog::info("seed {}: integrating to t = {} with dt = {}", r.seed,
               s.integrator.t_final, s.integrator.dt);
  t0 = std::chrono::steady_clock::now();
  const mcg::Trajectory traj =
      mcg::simulate(s.game, s.topology, s.gains, s.integrator);
  r.simulate_seconds = seconds_since(t0);
  r.steps = traj.steps;
  r.early_stopped = traj.early_stopped;

  const mcg::TrajectoryTable table = mcg::table_from(s.game, traj);
  mcg::write_csv(dir / "trajectory.csv", table);
  mcg::write_scenario(dir / "scenario.json", s);
  r.metrics = mcg::run_metrics(s.game, table, r.oracle.z);

  std::ofstream(dir / "report.json") << mcg::to_json(r).dump(2) << '\n';
  spdlog::info("seed {}: {} ({:.2f} s)", r.seed, r.metrics.verdict,
               r.simulate_seconds);
  return r;
}

int cmd_validate(const std::string& path) {
  const mcg::Scenario s = mcg::parse_scenario(path);
  print({{"valid", true},
         {"name", s.name},
         {"clusters", s.game.cluster_count()},
         {"players", s.game.player_count()},
         {"order", s.game.order},
         {"decision_dim", s.game.q},
         {"config_hash", mcg::config_hash(s)}});
  return kExitOk;
}

int cmd_gains(const std::string& path, const Overrides& o) {
  print(mcg::to_json(mcg::gains_report(load(path, o))));
  return kExitOk;
}

int cmd_solve_ne(const std::string& path, const std::string& method) {
  const mcg::Scenario s = mcg::parse_scenario(path);
  mcg::NeOptions opt;
  if (method == "fixed-point") opt.method = mcg::NeMethod::kFixedPoint;
  const mcg::OracleSummary o = mcg::run_oracle(s.game, opt);
  json out = mcg::to_json(o);
  out["lifted_ne_residual"] =
      mcg::ne_residual(s.game, mcg::lift(s.game, o.z));
  print(out);
  return o.converged ? kExitOk : kExitNoConvergence;
}

int cmd_simulate(const std::string& path, const Overrides& o,
                 const fs::path& out_dir, std::size_t sweep) {
  const mcg::Scenario base = load(path, o);
  spdlog::info("kernels: {}", mcg::kernels::to_string(mcg::kernels::active().isa));
  if (sweep <= 1) {
    const auto r = simulate_one(base, out_dir);
    print({{"output_dir", out_dir.string()},
           {"verdict", r.metrics.verdict},
           {"report", mcg::to_json(r)}});
    return kExitOk;
  }

  // Independent seeds in parallel, one directory each.
  std::vector<std::optional<mcg::RunReport>> reports(sweep);
  std::vector<std::string> failures(sweep);
  std::vector<int> codes(sweep, kExitOk);
  std::vector<std::thread> workers;
  for (std::size_t k = 0; k < sweep; ++k) {
    workers.emplace_back([&, k] {
      mcg::Scenario s = base;
      s.integrator.seed = base.integrator.seed + k;
      const fs::path dir =
          out_dir / ("seed-" + std::to_string(s.integrator.seed));
      try {
        reports[k] = simulate_one(s, dir);
      } catch (const mcg::Error& e) {
        failures[k] = e.what();
        codes[k] = (e.code() == mcg::ErrorCode::kNoConvergence ||
                    e.code() == mcg::ErrorCode::kNonFiniteState)
                       ? kExitNoConvergence
                       : kExitError;
      }
    });
  }
  for (auto& w : workers) w.join();

  json runs = json::array();
  int code = kExitOk;
  for (std::size_t k = 0; k < sweep; ++k) {
    json run = {{"seed", base.integrator.seed + k}};
    if (reports[k]) {
      run["verdict"] = reports[k]->metrics.verdict;
      run["max_error_to_ne"] = reports[k]->metrics.max_error_to_ne;
    } else {
      run["error"] = failures[k];
      code = std::max(code, codes[k]);
    }
    runs.push_back(run);
  }
  print({{"output_dir", out_dir.string()}, {"runs", runs}});
  return code;
}

int cmd_report(const fs::path& csv, std::optional<fs::path> scenario_path) {
  const fs::path sp =
      scenario_path ? *scenario_path : csv.parent_path() / "scenario.json";
  const mcg::Scenario s = mcg::parse_scenario(sp);
  const mcg::TrajectoryTable table = mcg::read_csv(csv, s.game);
  const mcg::OracleSummary o = oracle_or_throw(s.game);
  const mcg::RunMetrics m = mcg::run_metrics(s.game, table, o.z);
  print({{"scenario", s.name},
         {"seed", s.integrator.seed},
         {"config_hash", mcg::config_hash(s)},
         {"oracle", mcg::to_json(o)},
         {"metrics", mcg::to_json(m)}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Distributed Nash equilibrium seeking for multi-cluster games"};
  app.require_subcommand(1);

  Overrides o;
  auto add_overrides = [&o](CLI::App* cmd) {
    cmd->add_option("--t-final", o.t_final, "Simulation horizon");
    cmd->add_option("--dt", o.dt, "RK4 step size");
    cmd->add_option("--seed", o.seed, "Seed for the initial decisions");
    cmd->add_option("--stop-tol", o.stop_tol, "Early-stop NE residual");
    cmd->add_option("--record-every", o.record_every, "Steps per sample");
  };

  std::string scenario;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario)->required();

  auto* gains = app.add_subcommand("gains", "Certificates and gain bounds");
  gains->add_option("scenario", scenario)->required();
  add_overrides(gains);

  std::string method = "damped-newton";
  auto* solve = app.add_subcommand("solve-ne", "Reference Nash equilibrium");
  solve->add_option("scenario", scenario)->required();
  solve->add_option("--method", method)
      ->check(CLI::IsMember({"damped-newton", "fixed-point"}));

  std::string out_dir = "out";
  std::size_t sweep = 1;
  auto* sim = app.add_subcommand("simulate", "Integrate the closed loop");
  sim->add_option("scenario", scenario)->required();
  add_overrides(sim);
  sim->add_option("--output-dir", out_dir, "Where the CSV and report go");
  sim->add_option("--sweep", sweep, "Run N consecutive seeds concurrently")
      ->check(CLI::PositiveNumber);

  std::string csv;
  std::optional<std::string> report_scenario;
  auto* report = app.add_subcommand("report", "Re-derive metrics from a CSV");
  report->add_option("csv", csv)->required();
  report->add_option("--scenario", report_scenario,
                     "Scenario file (default: scenario.json next to the CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*validate) return cmd_validate(scenario);
    if (*gains) return cmd_gains(scenario, o);
    if (*solve) return cmd_solve_ne(scenario, method);
    if (*sim) return cmd_simulate(scenario, o, out_dir, sweep);
    if (*report) {
      std::optional<fs::path> sp;
      if (report_scenario) sp = *report_scenario;
      return cmd_report(csv, sp);
    }
  } catch (const mcg::ScenarioError& e) {
    print({{"valid", false}, {"errors", issues_json(e.issues())}});
    return kExitInvalid;
  } catch (const mcg::Error& e) {
    print({{"error", std::string(mcg::to_string(e.code()))},
           {"message", e.what()}});
    switch (e.code()) {
      case mcg::ErrorCode::kNoConvergence:
      case mcg::ErrorCode::kNonFiniteState:
        return kExitNoConvergence;
      case mcg::ErrorCode::kValidationError:
      case mcg::ErrorCode::kSchemaError:
        return kExitInvalid;
      default:
        return kExitError;
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  }
  return kExitError;
}
