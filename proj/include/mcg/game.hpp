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

// Multi-cluster game model: parameterized cost functions, their analytic
// gradients, and the stacked pseudo-gradient map.
//
// Stacking convention: players are ordered cluster-major, then by player
// index inside the cluster. A player's global index is
// offset(cluster) + player, and its decision occupies entries
// [global * q, global * q + q) of a stacked vector.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mcg {

// Zero-based (cluster, player) pair.
struct PlayerRef {
  std::size_t cluster = 0;
  std::size_t player = 0;

  auto operator<=>(const PlayerRef&) const = default;
};

// coeff * <x_target, x_own>
struct Coupling {
  PlayerRef target;
  double coeff = 0.0;

  bool operator==(const Coupling&) const = default;
};

enum class RatioKind { kSqrt, kLog };

// alpha |x|^2 / (beta sqrt(gamma |x|^2 + delta))   for kSqrt
// alpha |x|^2 / (beta ln(gamma |x|^2 + delta))     for kLog
struct RatioTerm {
  RatioKind kind = RatioKind::kSqrt;
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.0;
  double delta = 1.0;

  bool operator==(const RatioTerm&) const = default;
};

// a |x|^2 + <b, x> + c
struct QuadraticTerm {
  double a = 0.0;
  std::vector<double> b;  // length q
  double c = 0.0;

  bool operator==(const QuadraticTerm&) const = default;
};

enum class CostForm { kQuadratic, kRatioSqrt, kRatioLog, kComposite };

struct CostFunction {
  QuadraticTerm quadratic;
  std::vector<RatioTerm> ratios;
  std::vector<Coupling> couplings;

  CostForm form() const;

  bool operator==(const CostFunction&) const = default;
};

struct ClusterSpec {
  std::string label;
  std::vector<CostFunction> players;

  bool operator==(const ClusterSpec&) const = default;
};

struct GameSpec {
  std::size_t q = 1;      // decision dimension per player
  std::size_t order = 1;  // integrator order n of every player
  std::vector<ClusterSpec> clusters;

  std::size_t cluster_count() const { return clusters.size(); }
  std::size_t cluster_size(std::size_t j) const {
    return clusters[j].players.size();
  }
  // Total player count (N-bar).
  std::size_t player_count() const;
  // Stacked decision dimension (q-bar).
  std::size_t stacked_dim() const { return player_count() * q; }
  std::size_t cluster_offset(std::size_t j) const;
  std::size_t global_index(PlayerRef p) const;
  PlayerRef player_at(std::size_t global) const;
  const CostFunction& cost(PlayerRef p) const {
    return clusters[p.cluster].players[p.player];
  }

  bool operator==(const GameSpec&) const = default;
};

// Axis-aligned box in R^{q-bar}.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box uniform(std::size_t dim, double lo, double hi);

  bool operator==(const Box&) const = default;
};

// Structural problems (empty shapes, bad coupling targets, ratio parameters
// that make the denominator vanish). Empty result means valid.
std::vector<std::string> validate_game(const GameSpec& spec);

// Checks that every ln(gamma |x|^2 + delta) stays >= 1 + 1e-6 for every x in
// the box (restricted to each player's own coordinates).
std::vector<std::string> validate_log_domain(const GameSpec& spec,
                                             const Box& box);

using OthersMap = std::map<PlayerRef, std::vector<double>>;

// Cost f_i^j at x_own with coupled decisions taken from `others`.
double eval_cost(const GameSpec& spec, std::size_t j, std::size_t i,
                 std::span<const double> x_own, const OthersMap& others);

// Analytic gradient of f_i^j with respect to its own decision.
std::vector<double> grad_own(const GameSpec& spec, std::size_t j,
                             std::size_t i, std::span<const double> x_own,
                             const OthersMap& others);

// F(x): every player's own gradient evaluated at the true stacked x.
std::vector<double> pseudo_gradient(const GameSpec& spec,
                                    std::span<const double> x);
void pseudo_gradient(const GameSpec& spec, std::span<const double> x,
                     std::span<double> out);

// F(x-hat): player o uses its own true decision and its own estimate row
// estimates[o * q-bar .. (o + 1) * q-bar) for every coupled decision.
std::vector<double> pseudo_gradient_estimated(
    const GameSpec& spec, std::span<const double> x,
    std::span<const double> estimates);
void pseudo_gradient_estimated(const GameSpec& spec,
                               std::span<const double> x,
                               std::span<const double> estimates,
                               std::span<double> out);

// Per-player vectors (each length q, cluster-major) to a stacked vector.
std::vector<double> stack(const GameSpec& spec,
                          const std::vector<std::vector<std::vector<double>>>&
                              per_cluster);
std::vector<std::vector<std::vector<double>>> unstack(
    const GameSpec& spec, std::span<const double> x);

struct MonotonicityEstimate {
  double omega = 0.0;  // min <x - y, F(x) - F(y)> / |x - y|^2
  double theta = 0.0;  // max |F(x) - F(y)| / |x - y|
  std::size_t pairs = 0;
  // False flags a sampled violation of strong monotonicity (omega <= 0).
  bool monotone = false;
};

// Sampled strong-monotonicity and Lipschitz constants of F over all pairs
// of `samples` seeded uniform points in the box.
MonotonicityEstimate estimate_monotonicity_lipschitz(const GameSpec& spec,
                                                     const Box& box,
                                                     std::size_t samples,
                                                     std::uint64_t seed);

}  // namespace mcg
