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

#include "mcg/gains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcg/error.hpp"
#include "mcg/graph.hpp"

namespace mcg {

namespace {

constexpr double kHurwitzTol = 1e-10;

double max_real_eigenvalue(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace

Eigen::MatrixXd companion_matrix(const std::vector<double>& k) {
  const Eigen::Index m = static_cast<Eigen::Index>(k.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  if (m == 0) return a;
  for (Eigen::Index r = 0; r + 1 < m; ++r) a(r, r + 1) = 1.0;
  for (Eigen::Index c = 0; c < m; ++c) a(m - 1, c) = -k[c];
  return a;
}

bool is_hurwitz(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "is_hurwitz needs a square matrix");
  }
  return max_real_eigenvalue(a) < -kHurwitzTol;
}

Eigen::MatrixXd solve_p1(const Eigen::MatrixXd& a) {
  if (!is_hurwitz(a)) {
    throw Error(ErrorCode::kNotHurwitz,
                "companion matrix has an eigenvalue with real part >= 0");
  }
  const Eigen::Index m = a.rows();
  if (m == 0) return Eigen::MatrixXd(0, 0);
  // Column-major vec, P(r, c) at c * m + r:
  //   (P A)(r, c)   = sum_s P(r, s) A(s, c)
  //   (A^T P)(r, c) = sum_s A(s, r) P(s, c)
  const Eigen::Index mm = m * m;
  Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(mm, mm);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      for (Eigen::Index s = 0; s < m; ++s) {
        kmat(c * m + r, s * m + r) += a(s, c);
        kmat(c * m + r, c * m + s) += a(s, r);
      }
    }
  }
  Eigen::VectorXd rhs = -Eigen::MatrixXd::Identity(m, m).reshaped();
  Eigen::VectorXd vecp = kmat.fullPivLu().solve(rhs);
  Eigen::MatrixXd p = vecp.reshaped(m, m);
  return 0.5 * (p + p.transpose());
}

P2Certificate solve_p2(const Eigen::MatrixXd& s) {
  const Spectrum spec = symmetric_spectrum(s);
  if (!(spec.min > kSpectralTol)) {
    throw Error(ErrorCode::kSingularOperator,
                "estimator operator is not positive definite");
  }
  P2Certificate cert;
  cert.p2 = 0.5 * Eigen::MatrixXd::Identity(s.rows(), s.cols());
  cert.q = s;
  cert.lambda_max_p2 = 0.5;
  cert.lambda_min_q = spec.min;
  return cert;
}

double compute_a_bar1(const Eigen::MatrixXd& p1, const std::vector<double>& k) {
  const std::size_t m = k.size();  // n - 1
  if (m == 0) return 0.0;
  if (static_cast<std::size_t>(p1.rows()) != m ||
      static_cast<std::size_t>(p1.cols()) != m) {
    throw Error(ErrorCode::kDimensionMismatch, "P1 must be (n-1)x(n-1)");
  }
  const Eigen::Index last = static_cast<Eigen::Index>(m) - 1;
  double best = std::pow(2.0 * p1(last, last) + 1.0, 2);
  for (std::size_t l = 0; l + 1 < m; ++l) {
    const double term =
        std::pow(2.0 * p1(static_cast<Eigen::Index>(l), last) + k[l + 1], 2);
    best = std::max(best, term);
  }
  return best;
}

double mu_lower_bound(double omega, std::size_t n,
                      const std::vector<double>& k) {
  const double k1 = k.empty() ? 0.0 : k.front();
  return k1 / omega + (2.0 * static_cast<double>(n) - 1.0) / 4.0;
}

GainBounds gain_bounds(const BoundInputs& in) {
  if (!(in.omega > 0.0) || !(in.theta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "gain bounds need omega > 0 and theta > 0");
  }
  if (in.k.size() + 1 != in.n) {
    throw Error(ErrorCode::kDimensionMismatch, "k must have n - 1 entries");
  }
  const double w = in.omega;
  const double th = in.theta;
  const double n = static_cast<double>(in.n);
  const double k1 = in.k.empty() ? 0.0 : in.k.front();
  double kmax = 1.0;
  for (std::size_t l = 1; l < in.k.size(); ++l) kmax = std::max(kmax, in.k[l]);
  const double eps = in.epsilon;
  const double mu = in.mu;
  const double nl = in.norm_l;

  GainBounds b;
  b.epsilon_min = std::pow(0.75 * (th * in.a_bar1 + in.a_bar1), 1.0 / n);
  b.mu_min = mu_lower_bound(w, in.n, in.k);

  const double k2_den = 2.0 * w * std::pow(eps, n - 1.0) * in.lambda_min_q;
  if (!(k2_den > 0.0)) {
    throw Error(ErrorCode::kNonPositiveBound,
                "kappa2 bound: 2 omega eps^(n-1) lambda_min(Q) <= 0");
  }
  b.kappa2_min = (12.0 * w * std::pow(eps, n) * in.lambda_max_p2 *
                      in.lambda_max_p2 +
                  th * th * k1 + 2.0 * w * mu * mu * th * th +
                  w * th * (n - 1.0)) /
                 k2_den;

  const double t1_den = 2.0 * std::pow(eps, n - 2.0) *
                        (3.0 * n + eps * mu * mu + 2.0 * eps * mu * k1 * nl - 3.0);
  if (!(t1_den > 0.0)) {
    throw Error(ErrorCode::kNonPositiveBound,
                "kappa1 bound, first term: denominator <= 0");
  }
  b.kappa1_terms[0] = w * k1 / t1_den;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (nl == 0.0) {
    b.kappa1_terms[1] = kInf;
    b.kappa1_terms[2] = kInf;
  } else {
    const double t2_den = nl * nl * mu * mu * kmax * kmax;
    const double t3_den = 2.0 * w * nl * nl * mu * mu * std::pow(eps, n - 1.0);
    if (!(t2_den > 0.0)) {
      throw Error(ErrorCode::kNonPositiveBound,
                  "kappa1 bound, second term: denominator <= 0");
    }
    if (!(t3_den > 0.0)) {
      throw Error(ErrorCode::kNonPositiveBound,
                  "kappa1 bound, third term: denominator <= 0");
    }
    b.kappa1_terms[1] = 1.0 / t2_den;
    b.kappa1_terms[2] = (4.0 * w * mu + 2.0 * w * n + 4.0 * k1 - w) / t3_den;
  }
  b.kappa1_max =
      std::min({b.kappa1_terms[0], b.kappa1_terms[1], b.kappa1_terms[2]});
  return b;
}

CertificationReport certify(const FeedbackGains& gains, double mu,
                            const GainBounds& bounds) {
  CertificationReport rep;
  auto add = [&rep](std::string name, std::string rel, double value,
                    double bound, double margin) {
    rep.lines.push_back({std::move(name), std::move(rel), value, bound, margin,
                         margin > 0.0});
  };
  const double max_re = max_real_eigenvalue(companion_matrix(gains.k));
  add("hurwitz", "max Re(eig A) < 0", max_re, 0.0,
      gains.k.empty() ? std::numeric_limits<double>::infinity() : -max_re);
  add("epsilon", "epsilon > epsilon_min", gains.epsilon, bounds.epsilon_min,
      gains.epsilon - bounds.epsilon_min);
  add("mu", "mu > mu_min", mu, bounds.mu_min, mu - bounds.mu_min);
  add("kappa1", "0 < kappa1 < kappa1_max", gains.kappa1, bounds.kappa1_max,
      std::min(gains.kappa1, bounds.kappa1_max - gains.kappa1));
  add("kappa2", "kappa2 > kappa2_min", gains.kappa2, bounds.kappa2_min,
      gains.kappa2 - bounds.kappa2_min);
  rep.certified = std::all_of(rep.lines.begin(), rep.lines.end(),
                              [](const auto& l) { return l.pass; });
  rep.verdict = rep.certified ? "certified" : "not certified";
  return rep;
}

double lyapunov_residual_p1(const Eigen::MatrixXd& p1,
                            const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return (p1 * a + a.transpose() * p1 +
          Eigen::MatrixXd::Identity(a.rows(), a.cols()))
      .norm();
}

double lyapunov_residual_p2(const P2Certificate& cert,
                            const Eigen::MatrixXd& s) {
  return (cert.p2 * s + s.transpose() * cert.p2 - cert.q).norm();
}

}  // namespace mcg
