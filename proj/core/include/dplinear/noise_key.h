//
// Copyright 2026 The dplinear Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPLINEAR_NOISE_KEY_H_
#define DPLINEAR_NOISE_KEY_H_

#include <compare>
#include <cstdint>
#include <string>

namespace dplinear {

enum class StatisticId : std::uint32_t {
  kGradient = 1,
  kHessian = 2,
  kGram = 3,
  kClassGram = 4,
  kClassRhs = 5,
};

std::string StatisticName(StatisticId id);

// Names one Gaussian draw within a run. Each key maps to an independent
// stream, so the order in which classes or iterations are processed has no
// effect on the noise any of them receives.
struct NoiseKey {
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;
  std::uint64_t class_index = 0;
  StatisticId statistic = StatisticId::kGradient;

  auto operator<=>(const NoiseKey&) const = default;
};

std::string ToString(const NoiseKey& key);

}  // namespace dplinear

#endif  // DPLINEAR_NOISE_KEY_H_
