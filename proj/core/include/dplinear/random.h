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

#ifndef DPLINEAR_RANDOM_H_
#define DPLINEAR_RANDOM_H_

#include <cstdint>
#include <initializer_list>

#include "dplinear/noise_key.h"

namespace dplinear {

// Counter-based stream: the n-th output is SplitMix64's finalizer applied to
// (stream base + n * golden gamma). The base is derived from the key words by
// the same finalizer, so distinct keys give unrelated streams and nothing
// depends on how many values other streams consumed.
//
// Normals use the Box-Muller transform on 53-bit uniforms; both outputs of
// each pair are used. Output is bit-exact for a given key on IEEE-754
// hardware with the same libm.
class KeyedStream {
 public:
  explicit KeyedStream(const NoiseKey& key);
  // Free-form key words, for non-noise uses such as synthetic data.
  KeyedStream(std::initializer_list<std::uint64_t> words);

  std::uint64_t NextBits();
  // Uniform on [0, 1) with 53 random bits.
  double NextUniform();
  double NextGaussian();
  // Uniform integer in [0, bound); bound must be positive.
  std::uint64_t NextBelow(std::uint64_t bound);

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t Mix64(std::uint64_t x);

}  // namespace dplinear

#endif  // DPLINEAR_RANDOM_H_
