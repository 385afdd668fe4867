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
#include <span>
#include <vector>

namespace mcg {

// Flat layout of the closed-loop state:
//   [ x | x^(1) | ... | x^(n-1) | y | x-hat ]
// x, each derivative and y have length q-bar; x-hat has N-bar * q-bar
// entries, observer-major (row o is player o's estimate of every decision).
struct StateLayout {
  std::size_t qbar = 0;
  std::size_t nbar = 0;
  std::size_t order = 1;

  std::size_t x_offset() const { return 0; }
  // l in [1, order - 1]
  std::size_t deriv_offset(std::size_t l) const { return l * qbar; }
  std::size_t y_offset() const { return order * qbar; }
  std::size_t estimates_offset() const { return (order + 1) * qbar; }
  std::size_t estimates_size() const { return nbar * qbar; }
  std::size_t size() const { return estimates_offset() + estimates_size(); }

  bool operator==(const StateLayout&) const = default;
};

class SystemState {
 public:
  explicit SystemState(StateLayout layout);
  SystemState(StateLayout layout, std::vector<double> data);

  // Decisions set to x0; derivatives, consensus variable and estimates zero.
  static SystemState initial(StateLayout layout, std::span<const double> x0);

  const StateLayout& layout() const { return layout_; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::span<double> x() { return block(layout_.x_offset(), layout_.qbar); }
  std::span<const double> x() const {
    return block(layout_.x_offset(), layout_.qbar);
  }
  std::span<double> deriv(std::size_t l) {
    return block(layout_.deriv_offset(l), layout_.qbar);
  }
  std::span<const double> deriv(std::size_t l) const {
    return block(layout_.deriv_offset(l), layout_.qbar);
  }
  std::span<double> y() { return block(layout_.y_offset(), layout_.qbar); }
  std::span<const double> y() const {
    return block(layout_.y_offset(), layout_.qbar);
  }
  std::span<double> estimates() {
    return block(layout_.estimates_offset(), layout_.estimates_size());
  }
  std::span<const double> estimates() const {
    return block(layout_.estimates_offset(), layout_.estimates_size());
  }

  bool operator==(const SystemState&) const = default;

 private:
  std::span<double> block(std::size_t off, std::size_t n) {
    return std::span<double>(data_).subspan(off, n);
  }
  std::span<const double> block(std::size_t off, std::size_t n) const {
    return std::span<const double>(data_).subspan(off, n);
  }

  StateLayout layout_;
  std::vector<double> data_;
};

}  // namespace mcg
