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

// Closed-loop dynamics of n-th order players running the distributed
// Nash-seeking law, and a fixed-step RK4 driver.
//
// Per player (j, i):
//   x^(n)   = -sum_l eps^(n-l) k_l x^(l) - y - grad f(x, x-hat row)
//   dy/dt   = kappa1 * sum_k a^j_ik (x_i - x_k)
//   dx-hat_{o,t}/dt = -kappa2 * (sum_p a0_op (x-hat_{o,t} - x-hat_{p,t})
//                                + a0_ot (x-hat_{o,t} - x_t))

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcg/error.hpp"
#include "mcg/gains.hpp"
#include "mcg/game.hpp"
#include "mcg/graph.hpp"
#include "mcg/kernels/kernels.hpp"
#include "mcg/state.hpp"

namespace mcg {

struct IntegratorConfig {
  double dt = 2e-4;
  double t_final = 60.0;
  std::size_t record_every = 50;  // steps between recorded samples
  std::uint64_t seed = 1;
  double init_lo = -5.0;  // x(0) ~ U[init_lo, init_hi]^q-bar
  double init_hi = 5.0;
  std::optional<std::vector<double>> x0;  // overrides the random draw
  double stop_tol = 1e-8;
  std::size_t stop_window = 100;  // consecutive samples below stop_tol
  // Freezes x and its derivatives; used to study the estimator alone.
  bool pin_decisions = false;

  bool operator==(const IntegratorConfig&) const = default;
};

class ClosedLoop {
 public:
  ClosedLoop(const GameSpec& game, const TopologySpec& topo,
             const FeedbackGains& gains, bool pin_decisions = false);

  const StateLayout& layout() const { return layout_; }
  const GameSpec& game() const { return game_; }
  const TopologySpec& topology() const { return topo_; }
  const FeedbackGains& gains() const { return gains_; }

  // Time derivative of the stacked state. Not safe to call concurrently on
  // one instance (uses internal scratch).
  void rhs(std::span<const double> state, std::span<double> out) const;

  // Left-hand sides of the equilibrium conditions: the rhs with
  // kappa1 = kappa2 = 1.
  void equilibrium_terms(std::span<const double> state,
                         std::span<double> out) const;

  // 0.5 / (kappa2 lambda_max(S) + eps max(1, ||A||) + 1).
  double stability_cap() const { return stability_cap_; }
  const Eigen::MatrixXd& estimator_operator() const { return s_; }

 private:
  struct Neighbor {
    std::size_t index;
    double weight;
  };

  void evaluate(std::span<const double> state, std::span<double> out,
                double kappa1, double kappa2) const;

  GameSpec game_;
  TopologySpec topo_;
  FeedbackGains gains_;
  bool pinned_;
  StateLayout layout_;
  std::vector<double> feedback_;  // eps^(n-l) k_l, l = 1..n-1
  std::vector<std::vector<Neighbor>> cluster_nbrs_;  // global indices
  std::vector<std::vector<Neighbor>> global_nbrs_;
  std::vector<double> observe_;  // N-bar x q-bar, a0_ot repeated over q
  Eigen::MatrixXd s_;
  double stability_cap_ = 0.0;
  mutable std::vector<double> grad_;
  mutable std::vector<double> acc_;
};

// Classical RK4 with preallocated stage buffers.
class Rk4 {
 public:
  explicit Rk4(std::size_t dim);

  // Advances state in place. `t_end` is only used in the error message when
  // the step produces a non-finite value (NonFiniteStateError).
  template <class Rhs>
  void step(Rhs&& f, std::span<double> state, double dt, double t_end);

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

// Single RK4 step of `f` from `state` (functional form of Rk4::step).
template <class Rhs>
std::vector<double> step_rk4(std::span<const double> state, double dt,
                             Rhs&& f) {
  std::vector<double> out(state.begin(), state.end());
  Rk4 rk(state.size());
  rk.step(f, out, dt, dt);
  return out;
}

struct SampleMetrics {
  double ne_residual = 0.0;
  double consensus_err = 0.0;
  double est_err = 0.0;
};

struct Trajectory {
  StateLayout layout;
  std::vector<double> times;
  std::vector<std::vector<double>> states;  // full flat state per sample
  std::vector<SampleMetrics> metrics;
  std::size_t steps = 0;
  bool early_stopped = false;

  std::size_t size() const { return times.size(); }
  std::span<const double> x(std::size_t k) const {
    return std::span<const double>(states[k]).subspan(0, layout.qbar);
  }
  SystemState state(std::size_t k) const { return {layout, states[k]}; }
};

// max_j || sum_i grad_{x_i^j} f_i^j(x) || + max_j max_{i,k} || x_i^j - x_k^j ||
double ne_residual(const GameSpec& spec, std::span<const double> x);
// max_j max_{i,k} || x_i^j - x_k^j ||
double consensus_error(const GameSpec& spec, std::span<const double> x);
// max |x-hat - 1 (x) x|
double estimation_error(const GameSpec& spec, std::span<const double> x,
                        std::span<const double> estimates);
SampleMetrics sample_metrics(const GameSpec& spec, const SystemState& s);

// Euclidean norm of the stacked equilibrium conditions at `state`.
double equilibrium_residual(const GameSpec& spec, const TopologySpec& topo,
                            const FeedbackGains& gains,
                            const SystemState& state);

// Equilibrium tuple built from a consensus decision profile x:
// derivatives 0, x-hat = 1 (x) x, y = -F(x-hat).
SystemState equilibrium_state(const GameSpec& spec,
                              std::span<const double> x);

// Random (or configured) x(0), everything else zero.
SystemState initial_state(const GameSpec& spec, const IntegratorConfig& config);

// Integrates from initial_state(spec, config). Throws ValidationError when
// dt exceeds the stability cap, NonFiniteStateError on divergence.
Trajectory simulate(const GameSpec& spec, const TopologySpec& topo,
                    const FeedbackGains& gains, const IntegratorConfig& config);

// Integrates from an explicit state. Its consensus variable must sum to zero
// inside every cluster, which y(0) = 0 guarantees and the dynamics preserve.
Trajectory simulate_from(const GameSpec& spec, const TopologySpec& topo,
                         const FeedbackGains& gains,
                         const IntegratorConfig& config, SystemState start);

struct RateFit {
  double rate = 0.0;  // slope of ln(error) against t
  double r2 = 0.0;
  std::size_t samples = 0;
};

// Least-squares fit of ln(errors) on times restricted to [t1, t2]. Throws
// DegenerateWindow with fewer than two samples or any error below 1e-12.
RateFit rate_fit(std::span<const double> times, std::span<const double> errors,
                 double t1, double t2);
// Fit of ln ||x(t) - x_ref|| over the recorded samples.
RateFit rate_fit(const Trajectory& traj, std::span<const double> x_ref,
                 double t1, double t2);

// ---------------------------------------------------------------------------

template <class Rhs>
void Rk4::step(Rhs&& f, std::span<double> state, double dt, double t_end) {
  const std::span<const double> x(state.data(), state.size());
  f(x, std::span<double>(k1_));
  kernels::offset(x, 0.5 * dt, k1_, tmp_);
  f(std::span<const double>(tmp_), std::span<double>(k2_));
  kernels::offset(x, 0.5 * dt, k2_, tmp_);
  f(std::span<const double>(tmp_), std::span<double>(k3_));
  kernels::offset(x, dt, k3_, tmp_);
  f(std::span<const double>(tmp_), std::span<double>(k4_));
  kernels::rk4_combine(x, dt / 6.0, k1_, k2_, k3_, k4_, tmp_);
  if (!kernels::all_finite(tmp_)) {
    throw NonFiniteStateError(
        t_end, "state became non-finite at t = " + std::to_string(t_end) +
                   "; reduce dt or check the gains");
  }
  std::copy(tmp_.begin(), tmp_.end(), state.begin());
}

}  // namespace mcg
