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

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "mcg/error.hpp"

namespace mcg::kernels {

namespace {

constexpr KernelTable kScalarTable{
    Isa::kScalar,           scalar::axpy,
    scalar::offset,         scalar::rk4_combine,
    scalar::weighted_diff_acc, scalar::masked_diff_acc,
    scalar::scale,          scalar::all_finite,
    scalar::max_abs_diff,
};

#ifdef MCG_HAVE_AVX2
constexpr KernelTable kAvx2Table{
    Isa::kAvx2,           avx2::axpy,
    avx2::offset,         avx2::rk4_combine,
    avx2::weighted_diff_acc, avx2::masked_diff_acc,
    avx2::scale,          avx2::all_finite,
    avx2::max_abs_diff,
};
#endif

#ifdef MCG_HAVE_NEON
constexpr KernelTable kNeonTable{
    Isa::kNeon,           neon::axpy,
    neon::offset,         neon::rk4_combine,
    neon::weighted_diff_acc, neon::masked_diff_acc,
    neon::scale,          neon::all_finite,
    neon::max_abs_diff,
};
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(MCG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#ifdef MCG_HAVE_NEON
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* lookup(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &kScalarTable;
    case Isa::kAvx2:
#ifdef MCG_HAVE_AVX2
      return &kAvx2Table;
#else
      return nullptr;
#endif
    case Isa::kNeon:
#ifdef MCG_HAVE_NEON
      return &kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("MCG_SIMD")) {
    const std::string want(env);
    for (Isa isa : available_isas()) {
      if (want == to_string(isa)) return lookup(isa);
    }
  }
  const auto isas = available_isas();
  return lookup(isas.back());
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

const KernelTable& scalar_table() { return kScalarTable; }

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
    if (lookup(isa) != nullptr && cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& table_for(Isa isa) {
  const KernelTable* t = lookup(isa);
  if (t == nullptr || !cpu_supports(isa)) {
    throw Error(ErrorCode::kInvalidArgument,
                "kernel variant '" + std::string(to_string(isa)) +
                    "' is not available on this build/CPU");
  }
  return *t;
}

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = pick_default();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void set_active_isa(Isa isa) {
  g_active.store(&table_for(isa), std::memory_order_release);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(a, x.data(), y.data(), y.size());
}

void offset(std::span<const double> x, double a, std::span<const double> k,
            std::span<double> out) {
  assert(x.size() == out.size() && k.size() == out.size());
  active().offset(x.data(), a, k.data(), out.data(), out.size());
}

void rk4_combine(std::span<const double> x, double h,
                 std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4,
                 std::span<double> out) {
  assert(x.size() == out.size() && k1.size() == out.size() &&
         k2.size() == out.size() && k3.size() == out.size() &&
         k4.size() == out.size());
  active().rk4_combine(x.data(), h, k1.data(), k2.data(), k3.data(),
                       k4.data(), out.data(), out.size());
}

void weighted_diff_acc(double w, std::span<const double> a,
                       std::span<const double> b, std::span<double> acc) {
  assert(a.size() == acc.size() && b.size() == acc.size());
  active().weighted_diff_acc(w, a.data(), b.data(), acc.data(), acc.size());
}

void masked_diff_acc(std::span<const double> m, std::span<const double> a,
                     std::span<const double> b, std::span<double> acc) {
  assert(m.size() == acc.size() && a.size() == acc.size() &&
         b.size() == acc.size());
  active().masked_diff_acc(m.data(), a.data(), b.data(), acc.data(),
                           acc.size());
}

void scale(double s, std::span<const double> x, std::span<double> out) {
  assert(x.size() == out.size());
  active().scale(s, x.data(), out.data(), out.size());
}

bool all_finite(std::span<const double> x) {
  return active().all_finite(x.data(), x.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace mcg::kernels
