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

// Feedback gains, Lyapunov certificates and the sufficient gain conditions
// for the high-order Nash-seeking law.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace mcg {

struct FeedbackGains {
  std::vector<double> k;  // k_1 .. k_{n-1}; empty for n = 1
  double epsilon = 1.0;
  // Only enters the certification bounds. Unset means "pick just above mu_min".
  std::optional<double> mu;
  double kappa1 = 1.0;
  double kappa2 = 1.0;

  std::size_t order() const { return k.size() + 1; }

  bool operator==(const FeedbackGains&) const = default;
};

// (n-1)x(n-1) companion matrix [0 | I; -k1 -k2 ... -k_{n-1}].
Eigen::MatrixXd companion_matrix(const std::vector<double>& k);

// Max real part of the spectrum < -1e-10. The empty matrix counts as Hurwitz.
bool is_hurwitz(const Eigen::MatrixXd& a);

// Symmetric P1 with P1 A + A^T P1 = -I. Throws NotHurwitz.
Eigen::MatrixXd solve_p1(const Eigen::MatrixXd& a);

struct P2Certificate {
  Eigen::MatrixXd p2;  // 0.5 I
  Eigen::MatrixXd q;   // S
  double lambda_max_p2 = 0.5;
  double lambda_min_q = 0.0;
};

// P2 S + S^T P2 = Q with P2 = I/2, Q = S. Throws SingularOperator.
P2Certificate solve_p2(const Eigen::MatrixXd& s);

// max over the last column of P1 of (2 p_{l,n-1} + k_{l+1})^2, using 1 in
// place of k_n for the last row. Zero for n = 1.
double compute_a_bar1(const Eigen::MatrixXd& p1, const std::vector<double>& k);

struct BoundInputs {
  double omega = 0.0;
  double theta = 0.0;
  std::size_t n = 1;
  double a_bar1 = 0.0;
  double lambda_min_q = 0.0;
  double lambda_max_p2 = 0.5;
  double norm_l = 0.0;  // spectral norm of diag(L^1..L^N)
  std::vector<double> k;
  double epsilon = 0.0;
  double mu = 0.0;
};

struct GainBounds {
  double epsilon_min = 0.0;
  double mu_min = 0.0;
  double kappa2_min = 0.0;
  double kappa1_max = 0.0;
  // The three candidates whose minimum is kappa1_max.
  double kappa1_terms[3] = {0.0, 0.0, 0.0};
};

// Throws NonPositiveBound naming the term whose denominator is <= 0. When
// ||L|| = 0 (single-player clusters) the two terms dividing by ||L||^2 are
// +inf: the consensus variable never moves.
GainBounds gain_bounds(const BoundInputs& in);

// mu_min = k1 / omega + (2n - 1) / 4; k1 = 0 for n = 1.
double mu_lower_bound(double omega, std::size_t n, const std::vector<double>& k);

struct CertificationLine {
  std::string name;      // "epsilon", "mu", "kappa1", "kappa2", "hurwitz"
  std::string relation;  // e.g. "epsilon > epsilon_min"
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // positive when satisfied
  bool pass = false;
};

struct CertificationReport {
  std::vector<CertificationLine> lines;
  bool certified = false;
  std::string verdict;  // "certified" or "not certified"
};

// Advisory check of user gains against the bounds; never throws.
CertificationReport certify(const FeedbackGains& gains, double mu,
                            const GainBounds& bounds);

// Residual ||P1 A + A^T P1 + I||_F.
double lyapunov_residual_p1(const Eigen::MatrixXd& p1, const Eigen::MatrixXd& a);
// Residual ||P2 S + S^T P2 - Q||_F.
double lyapunov_residual_p2(const P2Certificate& cert, const Eigen::MatrixXd& s);

}  // namespace mcg
