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

#ifndef DPLINEAR_SYNTHETIC_H_
#define DPLINEAR_SYNTHETIC_H_

#include <cstdint>

#include "dplinear/dataset.h"

namespace dplinear {

// m isotropic Gaussian clusters in R^d. Class means are drawn at random and
// then rescaled so that the closest pair is exactly `margin` apart; each
// example is its class mean plus N(0, noise^2 I). Classes are assigned
// round-robin and shuffled, so every class gets floor(n/m) or ceil(n/m)
// examples. The first 80% of examples form the training split.
struct SyntheticSpec {
  std::int64_t n = 1000;
  std::int64_t d = 8;
  std::int64_t m = 2;
  double margin = 1.0;
  double noise = 0.1;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  FeatureDataset train;
  FeatureDataset test;
};

// Throws Error(kInvalidArgument) if m > n, n < 2, or any field is out of
// range. Deterministic in the spec.
SyntheticData GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace dplinear

#endif  // DPLINEAR_SYNTHETIC_H_
