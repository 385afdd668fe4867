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

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "mcg/kernels/kernels.hpp"

using namespace mcg::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 144, 1001};

}  // namespace

TEST_CASE("scalar table is always available and first") {
  const auto isas = available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == Isa::kScalar);
  CHECK(table_for(Isa::kScalar).isa == Isa::kScalar);
}

TEST_CASE("scalar reference values") {
  const auto& t = scalar_table();
  std::vector<double> x{1, 2, 3}, y{10, 20, 30}, out(3);
  t.axpy(2.0, x.data(), y.data(), 3);
  CHECK(y == std::vector<double>{12, 24, 36});
  t.offset(x.data(), 0.5, y.data(), out.data(), 3);
  CHECK(out == std::vector<double>{7, 14, 21});
  std::vector<double> k1{1, 1, 1}, k2{2, 2, 2}, k3{3, 3, 3}, k4{4, 4, 4};
  t.rk4_combine(x.data(), 1.0 / 6.0, k1.data(), k2.data(), k3.data(),
                k4.data(), out.data(), 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out[i] == doctest::Approx(x[i] + (1 + 4 + 6 + 4) / 6.0));
  }
  std::vector<double> acc{0, 0, 0}, m{1, 0, 2};
  t.masked_diff_acc(m.data(), y.data(), x.data(), acc.data(), 3);
  CHECK(acc == std::vector<double>{11, 0, 66});
  t.weighted_diff_acc(-1.0, y.data(), x.data(), acc.data(), 3);
  CHECK(acc == std::vector<double>{0, -22, 33});
  CHECK(t.max_abs_diff(x.data(), y.data(), 3) == 33.0);
  CHECK(t.all_finite(x.data(), 3));
  x[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(t.all_finite(x.data(), 3));
}

TEST_CASE("every available variant is bitwise equal to scalar") {
  std::mt19937_64 rng(42);
  const auto& ref = scalar_table();
  for (Isa isa : available_isas()) {
    const auto& t = table_for(isa);
    CAPTURE(to_string(isa));
    for (std::size_t n : kLengths) {
      CAPTURE(n);
      const auto x = random_vec(rng, n), k1 = random_vec(rng, n),
                 k2 = random_vec(rng, n), k3 = random_vec(rng, n),
                 k4 = random_vec(rng, n), m = random_vec(rng, n);
      std::vector<double> a(n), b(n);

      a = k1, b = k1;
      ref.axpy(0.37, x.data(), a.data(), n);
      t.axpy(0.37, x.data(), b.data(), n);
      CHECK(same_bits(a, b));

      ref.offset(x.data(), 1e-4, k1.data(), a.data(), n);
      t.offset(x.data(), 1e-4, k1.data(), b.data(), n);
      CHECK(same_bits(a, b));

      ref.rk4_combine(x.data(), 2e-4 / 6.0, k1.data(), k2.data(), k3.data(),
                      k4.data(), a.data(), n);
      t.rk4_combine(x.data(), 2e-4 / 6.0, k1.data(), k2.data(), k3.data(),
                    k4.data(), b.data(), n);
      CHECK(same_bits(a, b));

      a = k3, b = k3;
      ref.weighted_diff_acc(0.7, x.data(), k1.data(), a.data(), n);
      t.weighted_diff_acc(0.7, x.data(), k1.data(), b.data(), n);
      CHECK(same_bits(a, b));

      a = k4, b = k4;
      ref.masked_diff_acc(m.data(), x.data(), k2.data(), a.data(), n);
      t.masked_diff_acc(m.data(), x.data(), k2.data(), b.data(), n);
      CHECK(same_bits(a, b));

      ref.scale(-3.1, x.data(), a.data(), n);
      t.scale(-3.1, x.data(), b.data(), n);
      CHECK(same_bits(a, b));

      CHECK(ref.max_abs_diff(x.data(), k1.data(), n) ==
            t.max_abs_diff(x.data(), k1.data(), n));
      CHECK(ref.all_finite(x.data(), n) == t.all_finite(x.data(), n));
    }
  }
}

TEST_CASE("non-finite detection in every lane position") {
  for (Isa isa : available_isas()) {
    const auto& t = table_for(isa);
    for (std::size_t n : {1u, 4u, 5u, 13u}) {
      for (std::size_t pos = 0; pos < n; ++pos) {
        for (double bad : {std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::quiet_NaN()}) {
          std::vector<double> v(n, 1.0);
          v[pos] = bad;
          CHECK_FALSE(t.all_finite(v.data(), n));
        }
      }
    }
  }
}

TEST_CASE("set_active_isa switches the span wrappers") {
  std::vector<double> x{1, 2, 3, 4, 5}, y(5, 1.0);
  for (Isa isa : available_isas()) {
    set_active_isa(isa);
    CHECK(active().isa == isa);
    std::vector<double> out(5);
    offset(x, 2.0, y, out);
    CHECK(out == std::vector<double>{3, 4, 5, 6, 7});
  }
  set_active_isa(Isa::kScalar);
}

TEST_CASE("unavailable variant is rejected") {
  const auto isas = available_isas();
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (std::find(isas.begin(), isas.end(), isa) == isas.end()) {
      CHECK_THROWS(table_for(isa));
    }
  }
}
