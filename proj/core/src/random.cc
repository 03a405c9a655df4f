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

#include "dplinear/random.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dplinear/error.h"

namespace dplinear {
namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
// Domain separator so noise keys and free-form keys never collide.
constexpr std::uint64_t kNoiseDomain = 0x6e6f6973652d6b31ULL;
constexpr std::uint64_t kFreeDomain = 0x667265652d6b6579ULL;

std::uint64_t Absorb(std::uint64_t state, std::uint64_t word) {
  return Mix64(state ^ Mix64(word + kGoldenGamma));
}

}  // namespace

std::uint64_t Mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string StatisticName(StatisticId id) {
  switch (id) {
    case StatisticId::kGradient:
      return "gradient";
    case StatisticId::kHessian:
      return "hessian";
    case StatisticId::kGram:
      return "gram";
    case StatisticId::kClassGram:
      return "class_gram";
    case StatisticId::kClassRhs:
      return "class_rhs";
  }
  return "unknown";
}

std::string ToString(const NoiseKey& key) {
  std::ostringstream os;
  os << "(seed=" << key.seed << ", t=" << key.iteration
     << ", j=" << key.class_index << ", " << StatisticName(key.statistic)
     << ")";
  return os.str();
}

KeyedStream::KeyedStream(const NoiseKey& key) {
  std::uint64_t state = Mix64(kNoiseDomain);
  state = Absorb(state, key.seed);
  state = Absorb(state, key.iteration);
  state = Absorb(state, key.class_index);
  state = Absorb(state, static_cast<std::uint64_t>(key.statistic));
  base_ = state;
}

KeyedStream::KeyedStream(std::initializer_list<std::uint64_t> words) {
  std::uint64_t state = Mix64(kFreeDomain);
  for (std::uint64_t w : words) state = Absorb(state, w);
  base_ = state;
}

std::uint64_t KeyedStream::NextBits() {
  ++counter_;
  return Mix64(base_ + counter_ * kGoldenGamma);
}

double KeyedStream::NextUniform() {
  return static_cast<double>(NextBits() >> 11) * 0x1.0p-53;
}

double KeyedStream::NextGaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - NextUniform();
  const double u2 = NextUniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t KeyedStream::NextBelow(std::uint64_t bound) {
  if (bound == 0) {
    throw Error(ErrorCode::kInvalidArgument, "NextBelow: bound must be > 0");
  }
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = NextBits();
  } while (x >= limit);
  return x % bound;
}

}  // namespace dplinear
