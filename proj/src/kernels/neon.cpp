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

#include <arm_neon.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace mcg::kernels::neon {

namespace {
constexpr std::size_t kLanes = 2;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void offset(const double* x, double a, const double* k, double* out,
            std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out + i,
              vaddq_f64(vld1q_f64(x + i), vmulq_f64(va, vld1q_f64(k + i))));
  }
  for (; i < n; ++i) out[i] = x[i] + a * k[i];
}

void rk4_combine(const double* x, double h, const double* k1,
                 const double* k2, const double* k3, const double* k4,
                 double* out, std::size_t n) {
  const float64x2_t vh = vdupq_n_f64(h);
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    float64x2_t s = vaddq_f64(vld1q_f64(k1 + i), vmulq_f64(two, vld1q_f64(k2 + i)));
    s = vaddq_f64(s, vmulq_f64(two, vld1q_f64(k3 + i)));
    s = vaddq_f64(s, vld1q_f64(k4 + i));
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(x + i), vmulq_f64(vh, s)));
  }
  for (; i < n; ++i) {
    double s = k1[i] + 2.0 * k2[i];
    s = s + 2.0 * k3[i];
    s = s + k4[i];
    out[i] = x[i] + h * s;
  }
}

void weighted_diff_acc(double w, const double* a, const double* b,
                       double* acc, std::size_t n) {
  const float64x2_t vw = vdupq_n_f64(w);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vmulq_f64(vw, d)));
  }
  for (; i < n; ++i) acc[i] = acc[i] + w * (a[i] - b[i]);
}

void masked_diff_acc(const double* m, const double* a, const double* b,
                     double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    vst1q_f64(acc + i,
              vaddq_f64(vld1q_f64(acc + i), vmulq_f64(vld1q_f64(m + i), d)));
  }
  for (; i < n; ++i) acc[i] = acc[i] + m[i] * (a[i] - b[i]);
}

void scale(double s, const double* x, double* out, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out + i, vmulq_f64(vs, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) out[i] = s * x[i];
}

bool all_finite(const double* x, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t v = vld1q_f64(x + i);
    const uint64x2_t eq = vceqq_f64(vsubq_f64(v, v), zero);
    if (vgetq_lane_u64(eq, 0) == 0 || vgetq_lane_u64(eq, 1) == 0) return false;
  }
  for (; i < n; ++i) {
    if (!std::isfinite(x[i])) return false;
  }
  return true;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t d = vabsq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    const double d0 = vgetq_lane_f64(d, 0);
    const double d1 = vgetq_lane_f64(d, 1);
    if (d0 > m) m = d0;
    if (d1 > m) m = d1;
  }
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

}  // namespace mcg::kernels::neon
