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

#include "mcg/trajectory_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mcg/error.hpp"

namespace mcg {

namespace {

std::string player_tag(const GameSpec& spec, std::size_t g, std::size_t d) {
  const PlayerRef p = spec.player_at(g);
  std::string s = std::to_string(p.cluster + 1) + "." +
                  std::to_string(p.player + 1);
  if (spec.q > 1) s += "." + std::to_string(d + 1);
  return "[" + s + "]";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t row, std::size_t col) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kSchemaError,
                "row " + std::to_string(row) + ", column " +
                    std::to_string(col + 1) + ": not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<std::string> csv_header(const GameSpec& spec) {
  const std::size_t nbar = spec.player_count();
  std::vector<std::string> h{"t"};
  auto block = [&](const std::string& name) {
    for (std::size_t g = 0; g < nbar; ++g) {
      for (std::size_t d = 0; d < spec.q; ++d) {
        h.push_back(name + player_tag(spec, g, d));
      }
    }
  };
  block("x");
  for (std::size_t l = 1; l < spec.order; ++l) block("xdot" + std::to_string(l));
  block("y");
  h.insert(h.end(), {"ne_residual", "consensus_err", "est_err"});
  return h;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

TrajectoryTable table_from(const GameSpec& spec, const Trajectory& traj) {
  TrajectoryTable t;
  t.header = csv_header(spec);
  t.times = traj.times;
  t.metrics = traj.metrics;
  const auto& lay = traj.layout;
  for (const auto& s : traj.states) {
    const auto* p = s.data();
    t.x.emplace_back(p, p + lay.qbar);
    t.derivs.emplace_back(p + lay.deriv_offset(1), p + lay.y_offset());
    t.y.emplace_back(p + lay.y_offset(), p + lay.estimates_offset());
  }
  return t;
}

void write_csv(std::ostream& out, const TrajectoryTable& table) {
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out << ',';
    out << table.header[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < table.size(); ++r) {
    out << format_double(table.times[r]);
    for (const auto* block : {&table.x[r], &table.derivs[r], &table.y[r]}) {
      for (double v : *block) out << ',' << format_double(v);
    }
    const auto& m = table.metrics[r];
    out << ',' << format_double(m.ne_residual) << ','
        << format_double(m.consensus_err) << ',' << format_double(m.est_err)
        << '\n';
  }
}

void write_csv(const std::filesystem::path& path,
               const TrajectoryTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  }
  write_csv(out, table);
}

std::string to_csv(const TrajectoryTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

TrajectoryTable read_csv(std::istream& in, const GameSpec& spec) {
  TrajectoryTable t;
  t.header = csv_header(spec);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kSchemaError, "empty trajectory file");
  }
  if (split(line) != t.header) {
    throw Error(ErrorCode::kSchemaError,
                "trajectory header does not match the scenario's game");
  }
  const std::size_t qbar = spec.stacked_dim();
  const std::size_t nd = qbar * (spec.order - 1);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) {
      throw Error(ErrorCode::kSchemaError,
                  "row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " columns, expected " +
                      std::to_string(t.header.size()));
    }
    std::vector<double> v(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      v[c] = parse_double(cells[c], row, c);
    }
    auto it = v.begin();
    t.times.push_back(*it++);
    t.x.emplace_back(it, it + qbar);
    it += qbar;
    t.derivs.emplace_back(it, it + nd);
    it += nd;
    t.y.emplace_back(it, it + qbar);
    it += qbar;
    t.metrics.push_back({it[0], it[1], it[2]});
  }
  return t;
}

TrajectoryTable read_csv(const std::filesystem::path& path,
                         const GameSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kInvalidArgument, "cannot open " + path.string());
  }
  return read_csv(in, spec);
}

}  // namespace mcg
