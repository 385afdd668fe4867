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

#include "mcg/ne_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "mcg/error.hpp"

namespace mcg {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

// ||G(z)||, or +inf when z leaves the cost functions' domain.
double safe_norm(const GameSpec& spec, const std::vector<double>& z) {
  try {
    return norm2(reduced_gradient(spec, z));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDomainViolation) {
      return std::numeric_limits<double>::infinity();
    }
    throw;
  }
}

Eigen::MatrixXd fd_jacobian(const GameSpec& spec, const std::vector<double>& z,
                            double h) {
  const auto m = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd j(m, m);
  std::vector<double> zp = z, zm = z;
  for (Eigen::Index c = 0; c < m; ++c) {
    zp[c] = z[c] + h;
    zm[c] = z[c] - h;
    const Eigen::VectorXd gp = as_vector(reduced_gradient(spec, zp));
    const Eigen::VectorXd gm = as_vector(reduced_gradient(spec, zm));
    j.col(c) = (gp - gm) / (2.0 * h);
    zp[c] = z[c];
    zm[c] = z[c];
  }
  return j;
}

NeResult fixed_point(const GameSpec& spec, std::vector<double> z,
                     const NeOptions& opt, std::size_t used) {
  double gamma = opt.gamma;
  if (!(gamma > 0.0)) {
    gamma = 1.0 / reduced_lipschitz_estimate(spec, z, 10.0, 64, 7);
  }
  NeResult res;
  res.method_used = NeMethod::kFixedPoint;
  std::vector<double> g = reduced_gradient(spec, z);
  res.z = z;
  res.residual = norm2(g);
  std::size_t it = used;
  while (it < opt.max_iter && !(res.residual <= opt.tol)) {
    for (std::size_t k = 0; k < z.size(); ++k) z[k] -= gamma * g[k];
    ++it;
    const double r = safe_norm(spec, z);
    if (!std::isfinite(r)) break;
    g = reduced_gradient(spec, z);
    if (r < res.residual) {
      res.z = z;
      res.residual = r;
    }
  }
  res.iterations = it;
  res.converged = res.residual <= opt.tol;
  return res;
}

NeResult damped_newton(const GameSpec& spec, std::vector<double> z,
                       const NeOptions& opt) {
  NeResult res;
  res.method_used = NeMethod::kDampedNewton;
  double r = norm2(reduced_gradient(spec, z));
  std::size_t it = 0;
  while (it < opt.max_iter && !(r <= opt.tol)) {
    const Eigen::MatrixXd jac = fd_jacobian(spec, z, opt.fd_step);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) {
      // SingularJacobian: finish with the fixed-point iteration.
      NeResult fp = fixed_point(spec, z, opt, it);
      fp.fell_back = true;
      return fp;
    }
    const Eigen::VectorXd step =
        -lu.solve(as_vector(reduced_gradient(spec, z)));
    double alpha = 1.0;
    std::vector<double> trial(z.size());
    double r_trial = r;
    bool accepted = false;
    while (alpha > 1e-12) {
      for (std::size_t k = 0; k < z.size(); ++k) {
        trial[k] = z[k] + alpha * step[static_cast<Eigen::Index>(k)];
      }
      r_trial = safe_norm(spec, trial);
      if (r_trial <= (1.0 - 1e-4 * alpha) * r) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++it;
    if (!accepted) break;  // stagnated, usually at the rounding floor
    z = trial;
    r = r_trial;
  }
  res.z = z;
  res.residual = r;
  res.iterations = it;
  res.converged = r <= opt.tol;
  return res;
}

}  // namespace

std::string_view to_string(NeMethod m) {
  return m == NeMethod::kDampedNewton ? "damped-newton" : "fixed-point";
}

std::vector<double> lift(const GameSpec& spec, std::span<const double> z) {
  const std::size_t q = spec.q;
  if (z.size() != spec.cluster_count() * q) {
    throw Error(ErrorCode::kDimensionMismatch, "z must have N * q entries");
  }
  std::vector<double> x;
  x.reserve(spec.stacked_dim());
  for (std::size_t j = 0; j < spec.cluster_count(); ++j) {
    for (std::size_t i = 0; i < spec.cluster_size(j); ++i) {
      x.insert(x.end(), z.begin() + j * q, z.begin() + (j + 1) * q);
    }
  }
  return x;
}

std::vector<double> reduced_gradient(const GameSpec& spec,
                                     std::span<const double> z) {
  const std::size_t q = spec.q;
  const std::vector<double> f = pseudo_gradient(spec, lift(spec, z));
  std::vector<double> g(spec.cluster_count() * q, 0.0);
  for (std::size_t j = 0; j < spec.cluster_count(); ++j) {
    const std::size_t off = spec.cluster_offset(j);
    for (std::size_t i = 0; i < spec.cluster_size(j); ++i) {
      for (std::size_t d = 0; d < q; ++d) g[j * q + d] += f[(off + i) * q + d];
    }
  }
  return g;
}

double reduced_lipschitz_estimate(const GameSpec& spec,
                                  std::span<const double> z0, double radius,
                                  std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-radius, radius);
  std::vector<std::vector<double>> pts, vals;
  while (pts.size() < samples) {
    std::vector<double> p(z0.begin(), z0.end());
    for (auto& v : p) v += dist(rng);
    try {
      vals.push_back(reduced_gradient(spec, p));
      pts.push_back(std::move(p));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDomainViolation) throw;
    }
  }
  double theta = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      double dx = 0.0, dg = 0.0;
      for (std::size_t k = 0; k < z0.size(); ++k) {
        dx += (pts[a][k] - pts[b][k]) * (pts[a][k] - pts[b][k]);
        dg += (vals[a][k] - vals[b][k]) * (vals[a][k] - vals[b][k]);
      }
      if (dx > 0.0) theta = std::max(theta, std::sqrt(dg / dx));
    }
  }
  if (!(theta > 0.0)) theta = 1.0;
  return theta;
}

NeResult solve_ne(const GameSpec& spec, std::span<const double> z0,
                  const NeOptions& options) {
  if (z0.size() != spec.cluster_count() * spec.q) {
    throw Error(ErrorCode::kDimensionMismatch, "z0 must have N * q entries");
  }
  std::vector<double> z(z0.begin(), z0.end());
  if (options.method == NeMethod::kFixedPoint) {
    return fixed_point(spec, std::move(z), options, 0);
  }
  return damped_newton(spec, std::move(z), options);
}

MultiStartResult solve_ne_multistart(const GameSpec& spec,
                                     const NeOptions& options,
                                     std::size_t restarts, std::uint64_t seed,
                                     double radius) {
  const std::size_t dim = spec.cluster_count() * spec.q;
  MultiStartResult out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-radius, radius);
  for (std::size_t r = 0; r <= restarts; ++r) {
    std::vector<double> z0(dim, 0.0);
    if (r > 0) {
      for (auto& v : z0) v = dist(rng);
    }
    out.runs.push_back(solve_ne(spec, z0, options));
  }
  out.best = *std::min_element(
      out.runs.begin(), out.runs.end(),
      [](const auto& a, const auto& b) { return a.residual < b.residual; });
  for (const auto& run : out.runs) {
    if (!run.converged) continue;
    for (std::size_t k = 0; k < dim; ++k) {
      out.max_disagreement =
          std::max(out.max_disagreement, std::fabs(run.z[k] - out.best.z[k]));
    }
  }
  return out;
}

}  // namespace mcg
