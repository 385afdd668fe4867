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

// Reference Nash equilibrium solver. Consensus inside each cluster is imposed
// up front, so the unknown is one decision per cluster (N * q values) and the
// equilibrium is the root of G_j(z) = sum_i grad_{x_i^j} f_i^j(z^j, z^{-j}).
// Nothing here touches the closed-loop dynamics.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcg/game.hpp"

namespace mcg {

// Every player of cluster j gets z^j.
std::vector<double> lift(const GameSpec& spec, std::span<const double> z);

std::vector<double> reduced_gradient(const GameSpec& spec,
                                     std::span<const double> z);

enum class NeMethod { kDampedNewton, kFixedPoint };

std::string_view to_string(NeMethod m);

struct NeOptions {
  NeMethod method = NeMethod::kDampedNewton;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  double fd_step = 1e-6;  // central-difference Jacobian step
  // Fixed-point step; 0 means 1 / theta-hat of the reduced map.
  double gamma = 0.0;
};

struct NeResult {
  std::vector<double> z;
  double residual = 0.0;  // ||G(z)||
  std::size_t iterations = 0;
  bool converged = false;
  NeMethod method_used = NeMethod::kDampedNewton;
  // Set when Newton hit a singular Jacobian and finished with fixed point.
  bool fell_back = false;
};

// Never throws on non-convergence: the best iterate is returned with
// converged = false (callers map that to NoConvergence).
NeResult solve_ne(const GameSpec& spec, std::span<const double> z0,
                  const NeOptions& options = {});

// Sampled Lipschitz constant of G on the box z0 +- radius.
double reduced_lipschitz_estimate(const GameSpec& spec,
                                  std::span<const double> z0, double radius,
                                  std::size_t samples, std::uint64_t seed);

struct MultiStartResult {
  NeResult best;
  std::vector<NeResult> runs;  // z0 = 0 first, then the seeded restarts
  double max_disagreement = 0.0;  // max_r ||z_r - z_best||_inf over converged runs
};

// z0 = 0 plus `restarts` seeded starts drawn from [-radius, radius]^(N q).
MultiStartResult solve_ne_multistart(const GameSpec& spec,
                                     const NeOptions& options,
                                     std::size_t restarts = 5,
                                     std::uint64_t seed = 1,
                                     double radius = 10.0);

}  // namespace mcg
