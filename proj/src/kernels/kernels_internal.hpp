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

#include <cstddef>

#include "mcg/kernels/kernels.hpp"

namespace mcg::kernels {

#define MCG_KERNEL_DECLS                                                     \
  void axpy(double a, const double* x, double* y, std::size_t n);            \
  void offset(const double* x, double a, const double* k, double* out,       \
              std::size_t n);                                                \
  void rk4_combine(const double* x, double h, const double* k1,              \
                   const double* k2, const double* k3, const double* k4,     \
                   double* out, std::size_t n);                              \
  void weighted_diff_acc(double w, const double* a, const double* b,         \
                         double* acc, std::size_t n);                        \
  void masked_diff_acc(const double* m, const double* a, const double* b,    \
                       double* acc, std::size_t n);                          \
  void scale(double s, const double* x, double* out, std::size_t n);         \
  bool all_finite(const double* x, std::size_t n);                           \
  double max_abs_diff(const double* a, const double* b, std::size_t n);

namespace scalar {
MCG_KERNEL_DECLS
}
namespace avx2 {
MCG_KERNEL_DECLS
}
namespace neon {
MCG_KERNEL_DECLS
}

#undef MCG_KERNEL_DECLS

}  // namespace mcg::kernels
