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

#include "mcg/report.hpp"

#include <algorithm>
#include <cmath>

#include "mcg/error.hpp"
#include "mcg/graph.hpp"

namespace mcg {

using nlohmann::json;

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

// JSON has no infinity; unbounded values are written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

GainsReport gains_report(const Scenario& s) {
  GainsReport r;
  const auto& game = s.game;
  const auto& gains = s.gains;
  const std::size_t n = gains.order();

  if (s.assumptions.omega && s.assumptions.theta) {
    r.omega = *s.assumptions.omega;
    r.theta = *s.assumptions.theta;
  } else {
    const auto est = estimate_monotonicity_lipschitz(
        game, s.assumptions.box, s.assumptions.samples, s.integrator.seed);
    r.omega_theta_sampled = true;
    r.sampled_monotone = est.monotone;
    r.omega = s.assumptions.omega.value_or(est.omega);
    r.theta = s.assumptions.theta.value_or(est.theta);
  }

  r.companion = companion_matrix(gains.k);
  if (n > 1) {
    r.p1 = solve_p1(r.companion);
    r.p1_residual = lyapunov_residual_p1(r.p1, r.companion);
  }
  r.a_bar1 = compute_a_bar1(r.p1, gains.k);

  const Eigen::MatrixXd s_op = estimator_operator(s.topology);
  const auto spec_s = symmetric_spectrum(s_op);
  r.lambda_min_s = spec_s.min;
  r.lambda_max_s = spec_s.max;
  const P2Certificate p2 = solve_p2(s_op);
  r.p2_residual = lyapunov_residual_p2(p2, s_op);
  r.norm_l = spectral_norm(block_cluster_laplacian(s.topology));

  if (gains.mu) {
    r.mu = *gains.mu;
  } else {
    r.mu_defaulted = true;
    r.mu = r.omega > 0.0 ? 1.01 * mu_lower_bound(r.omega, n, gains.k) : 1.0;
  }

  BoundInputs in;
  in.omega = r.omega;
  in.theta = r.theta;
  in.n = n;
  in.a_bar1 = r.a_bar1;
  in.lambda_min_q = p2.lambda_min_q;
  in.lambda_max_p2 = p2.lambda_max_p2;
  in.norm_l = r.norm_l;
  in.k = gains.k;
  in.epsilon = gains.epsilon;
  in.mu = r.mu;
  try {
    r.bounds = gain_bounds(in);
    r.certification = certify(gains, r.mu, *r.bounds);
  } catch (const Error& e) {
    r.bounds_error = e.what();
    r.certification.verdict = "not certified";
    r.certification.certified = false;
  }

  r.stability_cap = ClosedLoop(game, s.topology, gains).stability_cap();
  return r;
}

OracleSummary run_oracle(const GameSpec& spec, const NeOptions& options) {
  const auto ms = solve_ne_multistart(spec, options);
  OracleSummary o;
  o.z = ms.best.z;
  o.residual = ms.best.residual;
  o.iterations = ms.best.iterations;
  o.converged = ms.best.converged;
  o.method = std::string(to_string(ms.best.method_used));
  o.max_disagreement = ms.max_disagreement;
  return o;
}

RunMetrics run_metrics(const GameSpec& spec, const TrajectoryTable& table,
                       const std::vector<double>& z_star) {
  if (table.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "trajectory has no samples");
  }
  RunMetrics m;
  const std::size_t last = table.size() - 1;
  const std::vector<double> x_ref = lift(spec, z_star);
  m.t_final = table.times[last];
  m.samples = table.size();
  m.x_final = table.x[last];
  m.ne_residual = ne_residual(spec, m.x_final);
  m.consensus_err = consensus_error(spec, m.x_final);
  m.est_err = table.metrics[last].est_err;
  for (std::size_t k = 0; k < x_ref.size(); ++k) {
    m.max_error_to_ne =
        std::max(m.max_error_to_ne, std::fabs(m.x_final[k] - x_ref[k]));
  }

  std::vector<double> errors(table.size());
  m.residual_min = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < table.size(); ++r) {
    const double res = ne_residual(spec, table.x[r]);
    if (r == 0) m.residual_initial = res;
    m.residual_min = std::min(m.residual_min, res);
    m.residual_max = std::max(m.residual_max, res);
    double e = 0.0;
    for (std::size_t k = 0; k < x_ref.size(); ++k) {
      e += (table.x[r][k] - x_ref[k]) * (table.x[r][k] - x_ref[k]);
    }
    errors[r] = std::sqrt(e);
    for (std::size_t j = 0; j < spec.cluster_count(); ++j) {
      const std::size_t off = spec.cluster_offset(j);
      double norm = 0.0;
      for (std::size_t d = 0; d < spec.q; ++d) {
        double sum = 0.0;
        for (std::size_t i = 0; i < spec.cluster_size(j); ++i) {
          sum += table.y[r][(off + i) * spec.q + d];
        }
        norm += sum * sum;
      }
      m.max_y_cluster_sum = std::max(m.max_y_cluster_sum, std::sqrt(norm));
    }
  }

  m.rate_t1 = m.t_final / 3.0;
  m.rate_t2 = 2.0 * m.t_final / 3.0;
  try {
    m.rate = rate_fit(table.times, errors, m.rate_t1, m.rate_t2);
  } catch (const Error& e) {
    m.rate_error = e.what();
  }

  const bool ok = m.consensus_err <= kConsensusTol &&
                  m.ne_residual <= kResidualTol &&
                  m.max_error_to_ne <= kNeDistanceTol;
  m.verdict = ok ? "converged" : "not converged";
  return m;
}

json to_json(const CertificationReport& r) {
  json lines = json::array();
  for (const auto& l : r.lines) {
    lines.push_back({{"name", l.name},
                     {"relation", l.relation},
                     {"value", finite_or_null(l.value)},
                     {"bound", finite_or_null(l.bound)},
                     {"margin", finite_or_null(l.margin)},
                     {"pass", l.pass}});
  }
  return {{"lines", lines}, {"certified", r.certified}, {"verdict", r.verdict}};
}

json to_json(const GainsReport& r) {
  json bounds = nullptr;
  if (r.bounds) {
    const auto& b = *r.bounds;
    bounds = {{"epsilon_min", finite_or_null(b.epsilon_min)},
              {"mu_min", finite_or_null(b.mu_min)},
              {"kappa2_min", finite_or_null(b.kappa2_min)},
              {"kappa1_max", finite_or_null(b.kappa1_max)},
              {"kappa1_terms",
               {finite_or_null(b.kappa1_terms[0]),
                finite_or_null(b.kappa1_terms[1]),
                finite_or_null(b.kappa1_terms[2])}}};
  }
  json out = {
      {"omega", r.omega},
      {"theta", r.theta},
      {"omega_theta_sampled", r.omega_theta_sampled},
      {"sampled_monotone", r.sampled_monotone},
      {"companion", matrix_json(r.companion)},
      {"p1", matrix_json(r.p1)},
      {"p1_residual", r.p1_residual},
      {"p2_residual", r.p2_residual},
      {"a_bar1", r.a_bar1},
      {"lambda_min_s", r.lambda_min_s},
      {"lambda_max_s", r.lambda_max_s},
      {"norm_l", r.norm_l},
      {"mu", r.mu},
      {"mu_defaulted", r.mu_defaulted},
      {"bounds", bounds},
      {"certification", to_json(r.certification)},
      {"stability_cap", r.stability_cap},
  };
  if (!r.bounds_error.empty()) out["bounds_error"] = r.bounds_error;
  return out;
}

json to_json(const OracleSummary& r) {
  return {{"z", r.z},
          {"residual", r.residual},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"method", r.method},
          {"max_disagreement", r.max_disagreement}};
}

json to_json(const RunMetrics& m) {
  json rate = nullptr;
  if (m.rate) {
    rate = {{"rate", m.rate->rate},
            {"r2", m.rate->r2},
            {"samples", m.rate->samples}};
  }
  json out = {
      {"t_final", m.t_final},
      {"samples", m.samples},
      {"x_final", m.x_final},
      {"ne_residual", m.ne_residual},
      {"consensus_err", m.consensus_err},
      {"est_err", m.est_err},
      {"max_error_to_ne", m.max_error_to_ne},
      {"residual_summary",
       {{"initial", m.residual_initial},
        {"min", m.residual_min},
        {"max", m.residual_max}}},
      {"max_y_cluster_sum", m.max_y_cluster_sum},
      {"rate_window", {m.rate_t1, m.rate_t2}},
      {"rate_fit", rate},
      {"verdict", m.verdict},
  };
  if (!m.rate_error.empty()) out["rate_error"] = m.rate_error;
  return out;
}

json to_json(const RunReport& r) {
  json out = {
      {"scenario", r.scenario},
      {"seed", r.seed},
      {"config_hash", r.config_hash},
      {"oracle", to_json(r.oracle)},
      {"metrics", to_json(r.metrics)},
      {"steps", r.steps},
      {"early_stopped", r.early_stopped},
      {"timings",
       {{"oracle_seconds", r.oracle_seconds},
        {"simulate_seconds", r.simulate_seconds}}},
  };
  out["certification"] =
      r.certification ? to_json(*r.certification) : json(nullptr);
  return out;
}

}  // namespace mcg
