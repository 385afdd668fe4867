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

// Scenario files: the game, the communication topology, the gains, the
// assumed (or sampled) monotonicity constants and the integrator settings.
//
// Indices in the JSON form are one-based (cluster 1, player 1, vertex 1);
// everything in memory is zero-based. See docs/scenario-format.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "mcg/gains.hpp"
#include "mcg/game.hpp"
#include "mcg/graph.hpp"
#include "mcg/simulator.hpp"

namespace mcg {

struct AssumptionSpec {
  std::optional<double> omega;  // declared strong-monotonicity constant
  std::optional<double> theta;  // declared Lipschitz constant
  // Operating box: ratio_log validity is checked on it and omega/theta are
  // sampled on it when not declared.
  Box box;
  std::size_t samples = 200;

  bool operator==(const AssumptionSpec&) const = default;
};

struct Scenario {
  std::string name;
  std::string description;
  GameSpec game;
  TopologySpec topology;
  FeedbackGains gains;
  AssumptionSpec assumptions;
  IntegratorConfig integrator;

  bool operator==(const Scenario&) const = default;
};

// Throws ScenarioError listing every schema and validation problem.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_json(const nlohmann::json& doc);

nlohmann::json to_json(const Scenario& s);
void write_scenario(const std::filesystem::path& path, const Scenario& s);

// Module-level checks on an already-built scenario (connectivity, subgraph,
// Hurwitz gains, log domain, dt cap, y(0) = 0). Empty when valid.
std::vector<Issue> validate_scenario(const Scenario& s);

// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const Scenario& s);

}  // namespace mcg
