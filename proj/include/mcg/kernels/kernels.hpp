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

// Elementwise double-precision kernels used by the integrator.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// picked once at runtime from CPU features and can be overridden with the
// MCG_SIMD environment variable ("scalar", "avx2", "neon") or
// set_active_isa(). All variants use the same per-element operation order
// and no fused multiply-add, so their results are bitwise identical to the
// scalar reference.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mcg::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out = x + a * k
  void (*offset)(const double* x, double a, const double* k, double* out,
                 std::size_t n);
  // out = x + h * (((k1 + 2 k2) + 2 k3) + k4)
  void (*rk4_combine)(const double* x, double h, const double* k1,
                      const double* k2, const double* k3, const double* k4,
                      double* out, std::size_t n);
  // acc += w * (a - b)
  void (*weighted_diff_acc)(double w, const double* a, const double* b,
                            double* acc, std::size_t n);
  // acc += m .* (a - b)
  void (*masked_diff_acc)(const double* m, const double* a, const double* b,
                          double* acc, std::size_t n);
  // out = s * x
  void (*scale)(double s, const double* x, double* out, std::size_t n);
  // true iff no NaN/Inf
  bool (*all_finite)(const double* x, std::size_t n);
  // max |a - b|
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();
// Variants compiled into this build and supported by the running CPU,
// scalar first.
std::vector<Isa> available_isas();
const KernelTable& table_for(Isa isa);

const KernelTable& active();
void set_active_isa(Isa isa);

// Span wrappers over active(). Sizes must agree; checked in debug builds.
void axpy(double a, std::span<const double> x, std::span<double> y);
void offset(std::span<const double> x, double a, std::span<const double> k,
            std::span<double> out);
void rk4_combine(std::span<const double> x, double h,
                 std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4,
                 std::span<double> out);
void weighted_diff_acc(double w, std::span<const double> a,
                       std::span<const double> b, std::span<double> acc);
void masked_diff_acc(std::span<const double> m, std::span<const double> a,
                     std::span<const double> b, std::span<double> acc);
void scale(double s, std::span<const double> x, std::span<double> out);
bool all_finite(std::span<const double> x);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace mcg::kernels
