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

#include "mcg/simulator.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace mcg {

namespace {

void require_valid(const GameSpec& spec, const TopologySpec& topo) {
  std::vector<Issue> issues;
  for (auto& p : validate_game(spec)) {
    issues.push_back({ErrorCode::kValidationError, "game", p});
  }
  if (issues.empty()) {
    for (auto& p : validate_topology(topo, spec)) {
      issues.push_back({ErrorCode::kValidationError, "topology", p});
    }
  }
  if (!issues.empty()) throw ScenarioError(std::move(issues));
}

double norm_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

ClosedLoop::ClosedLoop(const GameSpec& game, const TopologySpec& topo,
                       const FeedbackGains& gains, bool pin_decisions)
    : game_(game), topo_(topo), gains_(gains), pinned_(pin_decisions) {
  require_valid(game_, topo_);
  if (gains_.order() != game_.order) {
    throw Error(ErrorCode::kDimensionMismatch,
                "gains have " + std::to_string(gains_.k.size()) +
                    " feedback coefficients; order " +
                    std::to_string(game_.order) + " needs " +
                    std::to_string(game_.order - 1));
  }
  const std::size_t n = game_.order;
  const std::size_t q = game_.q;
  const std::size_t nbar = game_.player_count();
  layout_ = StateLayout{game_.stacked_dim(), nbar, n};

  for (std::size_t l = 1; l < n; ++l) {
    feedback_.push_back(std::pow(gains_.epsilon, static_cast<double>(n - l)) *
                        gains_.k[l - 1]);
  }

  cluster_nbrs_.assign(nbar, {});
  for (std::size_t j = 0; j < topo_.clusters.size(); ++j) {
    const std::size_t off = game_.cluster_offset(j);
    for (const auto& e : topo_.clusters[j].edges) {
      cluster_nbrs_[off + e.u].push_back({off + e.v, e.weight});
      cluster_nbrs_[off + e.v].push_back({off + e.u, e.weight});
    }
  }
  global_nbrs_.assign(nbar, {});
  observe_.assign(nbar * layout_.qbar, 0.0);
  for (const auto& e : topo_.global.edges) {
    global_nbrs_[e.u].push_back({e.v, e.weight});
    global_nbrs_[e.v].push_back({e.u, e.weight});
    for (std::size_t d = 0; d < q; ++d) {
      observe_[e.u * layout_.qbar + e.v * q + d] = e.weight;
      observe_[e.v * layout_.qbar + e.u * q + d] = e.weight;
    }
  }

  s_ = mcg::estimator_operator(topo_);
  const double lmax = symmetric_spectrum(s_).max;
  const double norm_a = spectral_norm(companion_matrix(gains_.k));
  stability_cap_ = 0.5 / (gains_.kappa2 * lmax +
                          gains_.epsilon * std::max(1.0, norm_a) + 1.0);

  grad_.assign(layout_.qbar, 0.0);
  acc_.assign(layout_.qbar, 0.0);
}

void ClosedLoop::rhs(std::span<const double> state,
                     std::span<double> out) const {
  evaluate(state, out, gains_.kappa1, gains_.kappa2);
}

void ClosedLoop::equilibrium_terms(std::span<const double> state,
                                   std::span<double> out) const {
  evaluate(state, out, 1.0, 1.0);
}

void ClosedLoop::evaluate(std::span<const double> state, std::span<double> out,
                          double kappa1, double kappa2) const {
  const std::size_t qb = layout_.qbar;
  const std::size_t n = layout_.order;
  const std::size_t q = game_.q;
  const auto blk = [qb](auto s, std::size_t off, std::size_t len) {
    return s.subspan(off, len);
  };
  const auto x = blk(state, 0, qb);
  const auto y = blk(state, layout_.y_offset(), qb);
  const auto est = blk(state, layout_.estimates_offset(),
                       layout_.estimates_size());

  // Integrator chain: d x^(l-1) = x^(l) for l = 1..n-1.
  for (std::size_t l = 1; l < n; ++l) {
    const auto src = blk(state, layout_.deriv_offset(l), qb);
    auto dst = blk(out, (l - 1) * qb, qb);
    std::copy(src.begin(), src.end(), dst.begin());
  }

  // Control input in the top derivative block.
  auto u = blk(out, (n - 1) * qb, qb);
  std::fill(u.begin(), u.end(), 0.0);
  for (std::size_t l = 1; l < n; ++l) {
    kernels::axpy(-feedback_[l - 1], blk(state, layout_.deriv_offset(l), qb),
                  u);
  }
  pseudo_gradient_estimated(game_, x, est, grad_);
  kernels::axpy(-1.0, y, u);
  kernels::axpy(-1.0, grad_, u);

  if (pinned_) std::fill(out.begin(), out.begin() + n * qb, 0.0);

  // Consensus variable.
  auto dy = blk(out, layout_.y_offset(), qb);
  for (std::size_t g = 0; g < layout_.nbar; ++g) {
    auto dyg = dy.subspan(g * q, q);
    std::fill(dyg.begin(), dyg.end(), 0.0);
    for (const auto& nb : cluster_nbrs_[g]) {
      kernels::weighted_diff_acc(kappa1 * nb.weight, x.subspan(g * q, q),
                                 x.subspan(nb.index * q, q), dyg);
    }
  }

  // Estimator, one observer row at a time.
  auto dest = blk(out, layout_.estimates_offset(), layout_.estimates_size());
  const std::span<const double> obs(observe_);
  for (std::size_t o = 0; o < layout_.nbar; ++o) {
    const auto row = est.subspan(o * qb, qb);
    std::fill(acc_.begin(), acc_.end(), 0.0);
    for (const auto& nb : global_nbrs_[o]) {
      kernels::weighted_diff_acc(nb.weight, row, est.subspan(nb.index * qb, qb),
                                 acc_);
    }
    kernels::masked_diff_acc(obs.subspan(o * qb, qb), row, x, acc_);
    kernels::scale(-kappa2, acc_, dest.subspan(o * qb, qb));
  }
}

Rk4::Rk4(std::size_t dim)
    : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

double consensus_error(const GameSpec& spec, std::span<const double> x) {
  const std::size_t q = spec.q;
  double worst = 0.0;
  for (std::size_t j = 0; j < spec.cluster_count(); ++j) {
    const std::size_t off = spec.cluster_offset(j);
    const std::size_t nj = spec.cluster_size(j);
    for (std::size_t a = 0; a < nj; ++a) {
      for (std::size_t b = a + 1; b < nj; ++b) {
        double s = 0.0;
        for (std::size_t d = 0; d < q; ++d) {
          const double diff = x[(off + a) * q + d] - x[(off + b) * q + d];
          s += diff * diff;
        }
        worst = std::max(worst, std::sqrt(s));
      }
    }
  }
  return worst;
}

double ne_residual(const GameSpec& spec, std::span<const double> x) {
  const std::size_t q = spec.q;
  const std::vector<double> f = pseudo_gradient(spec, x);
  double worst = 0.0;
  std::vector<double> sum(q);
  for (std::size_t j = 0; j < spec.cluster_count(); ++j) {
    std::fill(sum.begin(), sum.end(), 0.0);
    const std::size_t off = spec.cluster_offset(j);
    for (std::size_t i = 0; i < spec.cluster_size(j); ++i) {
      for (std::size_t d = 0; d < q; ++d) sum[d] += f[(off + i) * q + d];
    }
    worst = std::max(worst, norm_of(sum));
  }
  return worst + consensus_error(spec, x);
}

double estimation_error(const GameSpec& spec, std::span<const double> x,
                        std::span<const double> estimates) {
  const std::size_t qb = spec.stacked_dim();
  double worst = 0.0;
  for (std::size_t o = 0; o < spec.player_count(); ++o) {
    worst = std::max(worst,
                     kernels::max_abs_diff(estimates.subspan(o * qb, qb), x));
  }
  return worst;
}

SampleMetrics sample_metrics(const GameSpec& spec, const SystemState& s) {
  return {ne_residual(spec, s.x()), consensus_error(spec, s.x()),
          estimation_error(spec, s.x(), s.estimates())};
}

double equilibrium_residual(const GameSpec& spec, const TopologySpec& topo,
                            const FeedbackGains& gains,
                            const SystemState& state) {
  const ClosedLoop loop(spec, topo, gains);
  if (state.layout() != loop.layout()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "state layout does not match the game");
  }
  std::vector<double> terms(state.layout().size());
  loop.equilibrium_terms(state.data(), terms);
  return norm_of(terms);
}

SystemState equilibrium_state(const GameSpec& spec,
                              std::span<const double> x) {
  const StateLayout layout{spec.stacked_dim(), spec.player_count(),
                           spec.order};
  SystemState s = SystemState::initial(layout, x);
  auto est = s.estimates();
  for (std::size_t o = 0; o < layout.nbar; ++o) {
    std::copy(x.begin(), x.end(), est.begin() + o * layout.qbar);
  }
  const std::vector<double> f = pseudo_gradient_estimated(spec, x, est);
  auto y = s.y();
  for (std::size_t k = 0; k < f.size(); ++k) y[k] = -f[k];
  return s;
}

SystemState initial_state(const GameSpec& spec,
                          const IntegratorConfig& config) {
  const StateLayout layout{spec.stacked_dim(), spec.player_count(),
                           spec.order};
  if (config.x0) return SystemState::initial(layout, *config.x0);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(config.init_lo, config.init_hi);
  std::vector<double> x0(layout.qbar);
  for (auto& v : x0) v = dist(rng);
  return SystemState::initial(layout, x0);
}

Trajectory simulate(const GameSpec& spec, const TopologySpec& topo,
                    const FeedbackGains& gains,
                    const IntegratorConfig& config) {
  return simulate_from(spec, topo, gains, config, initial_state(spec, config));
}

Trajectory simulate_from(const GameSpec& spec, const TopologySpec& topo,
                         const FeedbackGains& gains,
                         const IntegratorConfig& config, SystemState start) {
  const ClosedLoop loop(spec, topo, gains, config.pin_decisions);
  std::vector<Issue> issues;
  if (!(config.dt > 0.0)) {
    issues.push_back({ErrorCode::kValidationError, "integrator.dt",
                      "dt must be positive"});
  } else if (config.dt > loop.stability_cap()) {
    issues.push_back({ErrorCode::kValidationError, "integrator.dt",
                      "dt = " + std::to_string(config.dt) +
                          " exceeds the stability cap " +
                          std::to_string(loop.stability_cap())});
  }
  if (!(config.t_final >= config.dt)) {
    issues.push_back({ErrorCode::kValidationError, "integrator.t_final",
                      "t_final must be >= dt"});
  }
  if (config.record_every == 0) {
    issues.push_back({ErrorCode::kValidationError, "integrator.record_every",
                      "record_every must be >= 1"});
  }
  if (start.layout() != loop.layout()) {
    issues.push_back({ErrorCode::kValidationError, "initial_state",
                      "state layout does not match the game"});
  }
  if (!issues.empty()) throw ScenarioError(std::move(issues));

  // The consensus variable must start with zero per-cluster sums.
  {
    const auto y = start.y();
    for (std::size_t j = 0; j < spec.cluster_count(); ++j) {
      const std::size_t off = spec.cluster_offset(j);
      for (std::size_t d = 0; d < spec.q; ++d) {
        double s = 0.0;
        for (std::size_t i = 0; i < spec.cluster_size(j); ++i) {
          s += y[(off + i) * spec.q + d];
        }
        if (std::fabs(s) > 1e-9) {
          throw ScenarioError({{ErrorCode::kValidationError, "initial_state.y",
                                "consensus variable of cluster " +
                                    std::to_string(j + 1) +
                                    " does not sum to zero; the algorithm "
                                    "requires y(0) = 0"}});
        }
      }
    }
  }

  Trajectory traj;
  traj.layout = loop.layout();
  const auto total =
      static_cast<std::size_t>(std::llround(config.t_final / config.dt));

  std::size_t below = 0;
  auto record = [&](std::size_t k) {
    traj.times.push_back(static_cast<double>(k) * config.dt);
    traj.states.emplace_back(start.data().begin(), start.data().end());
    traj.metrics.push_back(sample_metrics(spec, start));
    below = traj.metrics.back().ne_residual < config.stop_tol ? below + 1 : 0;
  };

  Rk4 rk(loop.layout().size());
  auto f = [&loop](std::span<const double> s, std::span<double> ds) {
    loop.rhs(s, ds);
  };
  record(0);
  std::size_t k = 0;
  while (k < total) {
    rk.step(f, start.data(), config.dt, static_cast<double>(k + 1) * config.dt);
    ++k;
    if (k % config.record_every == 0 || k == total) {
      record(k);
      if (below >= config.stop_window) {
        traj.early_stopped = k < total;
        break;
      }
    }
  }
  traj.steps = k;
  return traj;
}

RateFit rate_fit(std::span<const double> times, std::span<const double> errors,
                 double t1, double t2) {
  if (times.size() != errors.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "times and errors differ");
  }
  std::vector<double> ts, ls;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t1 || times[k] > t2) continue;
    if (!(errors[k] >= 1e-12)) {
      throw Error(ErrorCode::kDegenerateWindow,
                  "error below 1e-12 inside the fit window");
    }
    ts.push_back(times[k]);
    ls.push_back(std::log(errors[k]));
  }
  if (ts.size() < 2) {
    throw Error(ErrorCode::kDegenerateWindow,
                "fewer than two samples in the fit window");
  }
  const double m = static_cast<double>(ts.size());
  double tbar = 0.0, lbar = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    tbar += ts[k];
    lbar += ls[k];
  }
  tbar /= m;
  lbar /= m;
  double stt = 0.0, stl = 0.0, sll = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - tbar) * (ts[k] - tbar);
    stl += (ts[k] - tbar) * (ls[k] - lbar);
    sll += (ls[k] - lbar) * (ls[k] - lbar);
  }
  if (stt == 0.0) {
    throw Error(ErrorCode::kDegenerateWindow, "all samples at one time");
  }
  RateFit fit;
  fit.samples = ts.size();
  fit.rate = stl / stt;
  const double ss_res = sll - fit.rate * stl;
  // A constant series is fitted exactly by a zero slope.
  fit.r2 = sll == 0.0 ? 1.0 : 1.0 - std::max(0.0, ss_res) / sll;
  return fit;
}

RateFit rate_fit(const Trajectory& traj, std::span<const double> x_ref,
                 double t1, double t2) {
  std::vector<double> errs(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto x = traj.x(k);
    double s = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
      s += (x[d] - x_ref[d]) * (x[d] - x_ref[d]);
    }
    errs[k] = std::sqrt(s);
  }
  return rate_fit(traj.times, errs, t1, t2);
}

}  // namespace mcg
