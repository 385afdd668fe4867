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

// Gains certification and run reports, plus their JSON form.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcg/gains.hpp"
#include "mcg/ne_oracle.hpp"
#include "mcg/scenario.hpp"
#include "mcg/simulator.hpp"
#include "mcg/trajectory_io.hpp"

namespace mcg {

struct GainsReport {
  double omega = 0.0;
  double theta = 0.0;
  bool omega_theta_sampled = false;
  bool sampled_monotone = true;
  Eigen::MatrixXd companion;
  Eigen::MatrixXd p1;
  double p1_residual = 0.0;
  double p2_residual = 0.0;
  double a_bar1 = 0.0;
  double lambda_min_s = 0.0;
  double lambda_max_s = 0.0;
  double norm_l = 0.0;
  double mu = 0.0;
  bool mu_defaulted = false;
  std::optional<GainBounds> bounds;
  std::string bounds_error;  // set when a bound denominator is non-positive
  CertificationReport certification;
  double stability_cap = 0.0;
};

// Uses declared omega/theta when present, otherwise samples them on the
// assumption box with the scenario seed. An unset mu becomes 1.01 mu_min.
GainsReport gains_report(const Scenario& s);

struct OracleSummary {
  std::vector<double> z;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string method;
  double max_disagreement = 0.0;  // across multi-start runs
};

OracleSummary run_oracle(const GameSpec& spec, const NeOptions& options = {});

// Everything in here is a function of the trajectory table and z*.
struct RunMetrics {
  double t_final = 0.0;
  std::size_t samples = 0;
  std::vector<double> x_final;
  double ne_residual = 0.0;
  double consensus_err = 0.0;
  double est_err = 0.0;
  double max_error_to_ne = 0.0;  // max |x_i^j - z*^j| at the last sample
  double residual_initial = 0.0;
  double residual_min = 0.0;
  double residual_max = 0.0;
  double max_y_cluster_sum = 0.0;  // max over samples of ||sum_i y_i^j||
  std::optional<RateFit> rate;     // window [T/3, 2T/3]
  double rate_t1 = 0.0;
  double rate_t2 = 0.0;
  std::string rate_error;
  std::string verdict;  // "converged" or "not converged"
};

constexpr double kConsensusTol = 1e-3;
constexpr double kResidualTol = 1e-3;
constexpr double kNeDistanceTol = 1e-2;

RunMetrics run_metrics(const GameSpec& spec, const TrajectoryTable& table,
                       const std::vector<double>& z_star);

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string config_hash;
  OracleSummary oracle;
  RunMetrics metrics;
  std::size_t steps = 0;
  bool early_stopped = false;
  double oracle_seconds = 0.0;
  double simulate_seconds = 0.0;
  std::optional<CertificationReport> certification;
};

nlohmann::json to_json(const GainsReport& r);
nlohmann::json to_json(const CertificationReport& r);
nlohmann::json to_json(const OracleSummary& r);
nlohmann::json to_json(const RunMetrics& m);
nlohmann::json to_json(const RunReport& r);

}  // namespace mcg
