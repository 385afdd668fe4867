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

#include "mcg/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mcg/error.hpp"

namespace mcg {

namespace {

constexpr double kLogFloor = 1.0 + 1e-6;

double squared_norm(std::span<const double> x) {
  double r = 0.0;
  for (double v : x) r += v * v;
  return r;
}

double ratio_value(const RatioTerm& t, double r) {
  const double g = t.gamma * r + t.delta;
  if (t.kind == RatioKind::kSqrt) {
    if (!(g > 0.0)) {
      throw Error(ErrorCode::kDomainViolation,
                  "sqrt ratio denominator argument <= 0");
    }
    return t.alpha * r / (t.beta * std::sqrt(g));
  }
  if (!(g > 1.0)) {
    throw Error(ErrorCode::kDomainViolation,
                "log ratio denominator ln(gamma|x|^2 + delta) <= 0");
  }
  return t.alpha * r / (t.beta * std::log(g));
}

// d/dx of the ratio term is scale * x; returns scale.
double ratio_gradient_scale(const RatioTerm& t, double r) {
  const double g = t.gamma * r + t.delta;
  if (t.kind == RatioKind::kSqrt) {
    if (!(g > 0.0)) {
      throw Error(ErrorCode::kDomainViolation,
                  "sqrt ratio denominator argument <= 0");
    }
    return t.alpha / t.beta * (t.gamma * r + 2.0 * t.delta) /
           (g * std::sqrt(g));
  }
  if (!(g > 1.0)) {
    throw Error(ErrorCode::kDomainViolation,
                "log ratio denominator ln(gamma|x|^2 + delta) <= 0");
  }
  const double l = std::log(g);
  return t.alpha / t.beta * 2.0 * (1.0 / l - t.gamma * r / (g * l * l));
}

// Writes the own-decision gradient of f into out. `lookup(PlayerRef)` must
// return a span of length q with the coupled player's decision.
template <class Lookup>
void gradient_into(const CostFunction& f, std::span<const double> x,
                   Lookup&& lookup, std::span<double> out) {
  const std::size_t q = x.size();
  const double r = squared_norm(x);
  double s = 2.0 * f.quadratic.a;
  for (const auto& t : f.ratios) s += ratio_gradient_scale(t, r);
  for (std::size_t d = 0; d < q; ++d) out[d] = s * x[d] + f.quadratic.b[d];
  for (const auto& c : f.couplings) {
    std::span<const double> other = lookup(c.target);
    for (std::size_t d = 0; d < q; ++d) out[d] += c.coeff * other[d];
  }
}

template <class Lookup>
double value_of(const CostFunction& f, std::span<const double> x,
                Lookup&& lookup) {
  const std::size_t q = x.size();
  const double r = squared_norm(x);
  double v = f.quadratic.a * r + f.quadratic.c;
  for (std::size_t d = 0; d < q; ++d) v += f.quadratic.b[d] * x[d];
  for (const auto& t : f.ratios) v += ratio_value(t, r);
  for (const auto& c : f.couplings) {
    std::span<const double> other = lookup(c.target);
    for (std::size_t d = 0; d < q; ++d) v += c.coeff * other[d] * x[d];
  }
  return v;
}

void check_player(const GameSpec& spec, std::size_t j, std::size_t i,
                  std::span<const double> x_own) {
  if (j >= spec.cluster_count() || i >= spec.cluster_size(j)) {
    throw Error(ErrorCode::kInvalidArgument, "player index out of range");
  }
  if (x_own.size() != spec.q) {
    throw Error(ErrorCode::kDimensionMismatch,
                "own decision must have length q");
  }
}

auto map_lookup(const GameSpec& spec, const OthersMap& others) {
  return [&spec, &others](PlayerRef p) -> std::span<const double> {
    auto it = others.find(p);
    if (it == others.end()) {
      throw Error(ErrorCode::kMissingCouplingValue,
                  "no value for coupled player (" +
                      std::to_string(p.cluster + 1) + "," +
                      std::to_string(p.player + 1) + ")");
    }
    if (it->second.size() != spec.q) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "coupled decision must have length q");
    }
    return it->second;
  };
}

}  // namespace

CostForm CostFunction::form() const {
  if (ratios.empty()) return CostForm::kQuadratic;
  if (ratios.size() == 1) {
    return ratios.front().kind == RatioKind::kSqrt ? CostForm::kRatioSqrt
                                                   : CostForm::kRatioLog;
  }
  return CostForm::kComposite;
}

std::size_t GameSpec::player_count() const {
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.players.size();
  return n;
}

std::size_t GameSpec::cluster_offset(std::size_t j) const {
  std::size_t off = 0;
  for (std::size_t p = 0; p < j; ++p) off += clusters[p].players.size();
  return off;
}

std::size_t GameSpec::global_index(PlayerRef p) const {
  return cluster_offset(p.cluster) + p.player;
}

PlayerRef GameSpec::player_at(std::size_t global) const {
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    if (global < clusters[j].players.size()) return {j, global};
    global -= clusters[j].players.size();
  }
  throw Error(ErrorCode::kInvalidArgument, "global player index out of range");
}

Box Box::uniform(std::size_t dim, double lo, double hi) {
  return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

std::vector<std::string> validate_game(const GameSpec& spec) {
  std::vector<std::string> problems;
  if (spec.q < 1) problems.emplace_back("decision dimension q must be >= 1");
  if (spec.order < 1) problems.emplace_back("dynamics order must be >= 1");
  if (spec.clusters.empty()) problems.emplace_back("game needs >= 1 cluster");
  for (std::size_t j = 0; j < spec.clusters.size(); ++j) {
    const auto& cluster = spec.clusters[j];
    const std::string cname = "cluster " + std::to_string(j + 1);
    if (cluster.players.empty()) problems.push_back(cname + " has no players");
    for (std::size_t i = 0; i < cluster.players.size(); ++i) {
      const auto& f = cluster.players[i];
      const std::string pname = cname + " player " + std::to_string(i + 1);
      if (f.quadratic.b.size() != spec.q) {
        problems.push_back(pname + ": linear coefficient b must have length q");
      }
      for (const auto& t : f.ratios) {
        if (t.beta == 0.0) problems.push_back(pname + ": ratio beta is zero");
        if (t.kind == RatioKind::kSqrt && !(t.delta > 0.0)) {
          problems.push_back(pname + ": sqrt ratio needs delta > 0");
        }
      }
      for (const auto& c : f.couplings) {
        if (c.target.cluster >= spec.clusters.size() ||
            c.target.player >= spec.clusters[c.target.cluster].players.size()) {
          problems.push_back(pname + ": coupling target does not exist");
        } else if (c.target.cluster == j) {
          problems.push_back(pname +
                             ": coupling target lies in the owner's cluster");
        }
        if (!std::isfinite(c.coeff)) {
          problems.push_back(pname + ": coupling coefficient is not finite");
        }
      }
    }
  }
  return problems;
}

std::vector<std::string> validate_log_domain(const GameSpec& spec,
                                             const Box& box) {
  std::vector<std::string> problems;
  if (box.lo.size() != spec.stacked_dim() ||
      box.hi.size() != spec.stacked_dim()) {
    problems.emplace_back("operating box dimension does not match q-bar");
    return problems;
  }
  const std::size_t q = spec.q;
  for (std::size_t g = 0; g < spec.player_count(); ++g) {
    const PlayerRef p = spec.player_at(g);
    // Smallest and largest |x|^2 over this player's slice of the box.
    double r_min = 0.0;
    double r_max = 0.0;
    for (std::size_t d = 0; d < q; ++d) {
      const double lo = box.lo[g * q + d];
      const double hi = box.hi[g * q + d];
      r_max += std::max(lo * lo, hi * hi);
      if (lo > 0.0) {
        r_min += lo * lo;
      } else if (hi < 0.0) {
        r_min += hi * hi;
      }
    }
    for (const auto& t : spec.cost(p).ratios) {
      if (t.kind != RatioKind::kLog) continue;
      const double g_min = std::min(t.gamma * r_min, t.gamma * r_max) + t.delta;
      if (!(g_min >= kLogFloor)) {
        problems.push_back("cluster " + std::to_string(p.cluster + 1) +
                           " player " + std::to_string(p.player + 1) +
                           ": log ratio argument drops below 1 + 1e-6 on the "
                           "operating box");
      }
    }
  }
  return problems;
}

double eval_cost(const GameSpec& spec, std::size_t j, std::size_t i,
                 std::span<const double> x_own, const OthersMap& others) {
  check_player(spec, j, i, x_own);
  return value_of(spec.clusters[j].players[i], x_own,
                  map_lookup(spec, others));
}

std::vector<double> grad_own(const GameSpec& spec, std::size_t j,
                             std::size_t i, std::span<const double> x_own,
                             const OthersMap& others) {
  check_player(spec, j, i, x_own);
  std::vector<double> out(spec.q);
  gradient_into(spec.clusters[j].players[i], x_own, map_lookup(spec, others),
                out);
  return out;
}

void pseudo_gradient(const GameSpec& spec, std::span<const double> x,
                     std::span<double> out) {
  const std::size_t q = spec.q;
  if (x.size() != spec.stacked_dim() || out.size() != spec.stacked_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pseudo_gradient: vectors must have length q-bar");
  }
  std::size_t g = 0;
  for (const auto& cluster : spec.clusters) {
    for (const auto& f : cluster.players) {
      auto lookup = [&](PlayerRef p) {
        return x.subspan(spec.global_index(p) * q, q);
      };
      gradient_into(f, x.subspan(g * q, q), lookup, out.subspan(g * q, q));
      ++g;
    }
  }
}

std::vector<double> pseudo_gradient(const GameSpec& spec,
                                    std::span<const double> x) {
  std::vector<double> out(spec.stacked_dim());
  pseudo_gradient(spec, x, out);
  return out;
}

void pseudo_gradient_estimated(const GameSpec& spec,
                               std::span<const double> x,
                               std::span<const double> estimates,
                               std::span<double> out) {
  const std::size_t q = spec.q;
  const std::size_t qbar = spec.stacked_dim();
  if (x.size() != qbar || out.size() != qbar ||
      estimates.size() != spec.player_count() * qbar) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pseudo_gradient_estimated: expected x, out of length q-bar "
                "and estimates of length N-bar * q-bar");
  }
  std::size_t g = 0;
  for (const auto& cluster : spec.clusters) {
    for (const auto& f : cluster.players) {
      const auto row = estimates.subspan(g * qbar, qbar);
      auto lookup = [&](PlayerRef p) {
        return row.subspan(spec.global_index(p) * q, q);
      };
      gradient_into(f, x.subspan(g * q, q), lookup, out.subspan(g * q, q));
      ++g;
    }
  }
}

std::vector<double> pseudo_gradient_estimated(
    const GameSpec& spec, std::span<const double> x,
    std::span<const double> estimates) {
  std::vector<double> out(spec.stacked_dim());
  pseudo_gradient_estimated(spec, x, estimates, out);
  return out;
}

std::vector<double> stack(
    const GameSpec& spec,
    const std::vector<std::vector<std::vector<double>>>& per_cluster) {
  if (per_cluster.size() != spec.cluster_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "stack: cluster count");
  }
  std::vector<double> out;
  out.reserve(spec.stacked_dim());
  for (std::size_t j = 0; j < per_cluster.size(); ++j) {
    if (per_cluster[j].size() != spec.cluster_size(j)) {
      throw Error(ErrorCode::kDimensionMismatch, "stack: cluster size");
    }
    for (const auto& v : per_cluster[j]) {
      if (v.size() != spec.q) {
        throw Error(ErrorCode::kDimensionMismatch, "stack: decision length");
      }
      out.insert(out.end(), v.begin(), v.end());
    }
  }
  return out;
}

std::vector<std::vector<std::vector<double>>> unstack(
    const GameSpec& spec, std::span<const double> x) {
  if (x.size() != spec.stacked_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "unstack: length");
  }
  std::vector<std::vector<std::vector<double>>> out(spec.cluster_count());
  std::size_t pos = 0;
  for (std::size_t j = 0; j < spec.cluster_count(); ++j) {
    for (std::size_t i = 0; i < spec.cluster_size(j); ++i) {
      out[j].emplace_back(x.begin() + pos, x.begin() + pos + spec.q);
      pos += spec.q;
    }
  }
  return out;
}

MonotonicityEstimate estimate_monotonicity_lipschitz(const GameSpec& spec,
                                                     const Box& box,
                                                     std::size_t samples,
                                                     std::uint64_t seed) {
  const std::size_t dim = spec.stacked_dim();
  if (samples < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 2 samples");
  }
  if (box.lo.size() != dim || box.hi.size() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "box dimension != q-bar");
  }
  for (std::size_t d = 0; d < dim; ++d) {
    if (!(box.hi[d] > box.lo[d])) {
      throw Error(ErrorCode::kInvalidArgument, "box is degenerate");
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> points(samples, std::vector<double>(dim));
  std::vector<std::vector<double>> values(samples);
  for (auto& p : points) {
    for (std::size_t d = 0; d < dim; ++d) {
      p[d] = std::uniform_real_distribution<double>(box.lo[d], box.hi[d])(rng);
    }
  }
  for (std::size_t s = 0; s < samples; ++s) {
    values[s] = pseudo_gradient(spec, points[s]);
  }

  MonotonicityEstimate est;
  est.omega = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < samples; ++a) {
    for (std::size_t b = a + 1; b < samples; ++b) {
      double dx2 = 0.0, df2 = 0.0, inner = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double dx = points[a][d] - points[b][d];
        const double df = values[a][d] - values[b][d];
        dx2 += dx * dx;
        df2 += df * df;
        inner += dx * df;
      }
      if (dx2 == 0.0) continue;
      est.omega = std::min(est.omega, inner / dx2);
      est.theta = std::max(est.theta, std::sqrt(df2 / dx2));
      ++est.pairs;
    }
  }
  est.monotone = est.omega > 0.0;
  return est;
}

}  // namespace mcg
