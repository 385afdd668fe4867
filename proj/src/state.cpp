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

#include "mcg/state.hpp"

#include <algorithm>
#include <utility>

#include "mcg/error.hpp"

namespace mcg {

SystemState::SystemState(StateLayout layout)
    : layout_(layout), data_(layout.size(), 0.0) {}

SystemState::SystemState(StateLayout layout, std::vector<double> data)
    : layout_(layout), data_(std::move(data)) {
  if (data_.size() != layout_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "state data does not match its layout");
  }
}

SystemState SystemState::initial(StateLayout layout,
                                 std::span<const double> x0) {
  if (x0.size() != layout.qbar) {
    throw Error(ErrorCode::kDimensionMismatch, "x0 must have length q-bar");
  }
  SystemState s(layout);
  std::copy(x0.begin(), x0.end(), s.x().begin());
  return s;
}

}  // namespace mcg
