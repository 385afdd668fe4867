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

// Trajectory CSV. Columns:
//   t, x[j.i]..., xdot{l}[j.i]... (l = 1..n-1), y[j.i]...,
//   ne_residual, consensus_err, est_err
// with one-based j, i and x[j.i.d] when q > 1. Numbers use the shortest
// decimal form that round-trips.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcg/game.hpp"
#include "mcg/simulator.hpp"

namespace mcg {

struct TrajectoryTable {
  std::vector<std::string> header;
  std::vector<double> times;
  std::vector<std::vector<double>> x;        // decisions per row
  std::vector<std::vector<double>> derivs;   // concatenated x^(1)..x^(n-1)
  std::vector<std::vector<double>> y;
  std::vector<SampleMetrics> metrics;

  std::size_t size() const { return times.size(); }
};

std::vector<std::string> csv_header(const GameSpec& spec);

// Shortest round-trip decimal.
std::string format_double(double v);

TrajectoryTable table_from(const GameSpec& spec, const Trajectory& traj);

void write_csv(std::ostream& out, const TrajectoryTable& table);
void write_csv(const std::filesystem::path& path, const TrajectoryTable& table);
std::string to_csv(const TrajectoryTable& table);

// Checks the header against `spec`. Throws SchemaError on malformed input.
TrajectoryTable read_csv(const std::filesystem::path& path,
                         const GameSpec& spec);
TrajectoryTable read_csv(std::istream& in, const GameSpec& spec);

}  // namespace mcg
