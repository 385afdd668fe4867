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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mcg/error.hpp"
#include "mcg/scenario.hpp"
#include "support.hpp"

using namespace mcg;
using nlohmann::json;

namespace {

json example_json() {
  std::ifstream in(test::scenario_path("paper-example.json"));
  return json::parse(in);
}

std::vector<Issue> issues_of(const json& doc) {
  try {
    (void)parse_scenario_json(doc);
  } catch (const ScenarioError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<Issue>& issues, const std::string& needle) {
  for (const auto& i : issues) {
    if (i.path.find(needle) != std::string::npos ||
        i.message.find(needle) != std::string::npos) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("bundled example scenario") {
  const auto s = test::example();
  CHECK(s.name == "paper-example");
  CHECK(s.game.cluster_count() == 3);
  for (std::size_t j = 0; j < 3; ++j) CHECK(s.game.cluster_size(j) == 4);
  CHECK(s.game.order == 4);
  CHECK(s.game.q == 1);
  CHECK(s.gains.k == std::vector<double>{1, 2, 1});
  CHECK(s.gains.epsilon == 3.71);
  CHECK(s.gains.kappa1 == 0.05);
  CHECK(s.gains.kappa2 == 386.0);
  CHECK_FALSE(s.gains.mu.has_value());
  CHECK(s.integrator.dt == 2e-4);
  CHECK(s.integrator.t_final == 60.0);
  CHECK(s.topology.global.edges.size() == 12);
  CHECK(validate_scenario(s).empty());
  // one-based indices in the file, zero-based in memory
  CHECK(s.game.cost({0, 3}).couplings.front().target == PlayerRef{1, 1});
}

TEST_CASE("emit then parse is the identity") {
  const auto s = test::example();
  CHECK(parse_scenario_json(to_json(s)) == s);

  auto t = s;
  t.gains.mu = 2.5;
  t.assumptions.omega = 1.0;
  t.assumptions.theta = 9.0;
  t.integrator.x0 = std::vector<double>(12, 0.25);
  t.integrator.seed = 12345;
  const auto path = std::filesystem::temp_directory_path() / "mcg_roundtrip.json";
  write_scenario(path, t);
  CHECK(parse_scenario(path) == t);
  std::filesystem::remove(path);
}

TEST_CASE("vector decisions round-trip") {
  GameSpec g;
  g.q = 2;
  g.order = 2;
  CostFunction f = test::quadratic(1.0, {0.5, -0.5}, 3.0);
  f.ratios.push_back({RatioKind::kLog, 1.0, 2.0, 0.5, 4.0});
  f.ratios.push_back({RatioKind::kSqrt, 1.0, 2.0, 0.5, 4.0});
  g.clusters = {{"a", {f, test::quadratic(2.0, {1.0, 1.0})}},
                {"b", {test::with_coupling(test::quadratic(1.0, {0.0, 0.0}), 0, 1, 0.1)}}};
  Scenario s;
  s.name = "vec";
  s.game = g;
  s.topology = test::chained_paths(g);
  s.gains = {{1.0}, 1.0, std::nullopt, 0.5, 2.0};
  s.assumptions.box = Box::uniform(6, -3.0, 3.0);
  s.integrator.dt = 1e-3;
  CHECK(validate_scenario(s).empty());
  CHECK(parse_scenario_json(to_json(s)) == s);
}

TEST_CASE("config hash is stable and sensitive") {
  const auto s = test::example();
  CHECK(config_hash(s) == config_hash(test::example()));
  CHECK(config_hash(s).size() == 16);
  auto t = s;
  t.integrator.seed = 2;
  CHECK(config_hash(t) != config_hash(s));
}

TEST_CASE("cluster edge missing from the global graph") {
  auto doc = example_json();
  doc["topology"]["clusters"][1]["edges"].push_back({1, 4, 1.0});
  const auto issues = issues_of(doc);
  REQUIRE_FALSE(issues.empty());
  CHECK(issues.front().code == ErrorCode::kValidationError);
  CHECK(mentions(issues, "cluster 2"));
  CHECK(mentions(issues, "{1,4}"));
}

TEST_CASE("nonzero initial consensus variable is refused") {
  auto doc = example_json();
  doc["integrator"]["y0"] = std::vector<double>(12, 0.0);
  CHECK(issues_of(doc).empty());
  doc["integrator"]["y0"][3] = 0.5;
  const auto issues = issues_of(doc);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].code == ErrorCode::kValidationError);
  CHECK(issues[0].path == "integrator.y0");
  CHECK(mentions(issues, "y(0) = 0"));
}

TEST_CASE("all schema problems are collected together") {
  auto doc = example_json();
  doc["gains"]["epsilon"] = "fast";
  doc.erase("topology");
  doc["game"]["clusters"][0]["players"][1]["ratios"][0]["kind"] = "cube";
  doc["game"]["clusters"][2]["players"][0]["couplings"][0]["player"] = 0;
  const auto issues = issues_of(doc);
  CHECK(issues.size() == 4);
  CHECK(mentions(issues, "gains.epsilon"));
  CHECK(mentions(issues, "topology"));
  CHECK(mentions(issues, "game.clusters[0].players[1].ratios[0].kind"));
  CHECK(mentions(issues, "one-based"));
  for (const auto& i : issues) CHECK(i.code == ErrorCode::kSchemaError);
  try {
    (void)parse_scenario_json(doc);
  } catch (const ScenarioError& e) {
    CHECK(e.code() == ErrorCode::kSchemaError);
  }
}

TEST_CASE("validation problems") {
  auto doc = example_json();
  doc["gains"]["k"] = {1.0, 0.5, 0.2};  // not Hurwitz
  doc["integrator"]["dt"] = 1e-3;       // above the stability cap
  doc["topology"]["clusters"][0]["edges"].erase(1);  // cluster 1 disconnected
  const auto issues = issues_of(doc);
  CHECK(mentions(issues, "gains.k"));
  CHECK(mentions(issues, "disconnected"));
  doc = example_json();
  doc["integrator"]["dt"] = 1e-3;
  CHECK(mentions(issues_of(doc), "stability cap"));
  doc = example_json();
  doc["game"]["clusters"][1]["players"][0]["ratios"][0]["delta"] = 0.5;
  CHECK(mentions(issues_of(doc), "assumptions.box"));
  doc = example_json();
  doc["game"]["clusters"][0]["players"][0]["form"] = "quadratic";
  CHECK(mentions(issues_of(doc), "does not match"));
}

TEST_CASE("malformed files") {
  const auto path = std::filesystem::temp_directory_path() / "mcg_bad.json";
  std::ofstream(path) << "{ not json";
  try {
    (void)parse_scenario(path);
    FAIL("expected an error");
  } catch (const ScenarioError& e) {
    CHECK(e.code() == ErrorCode::kSchemaError);
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(parse_scenario("/nonexistent/scenario.json"), ScenarioError);
}
