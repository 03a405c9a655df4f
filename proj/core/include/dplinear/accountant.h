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

// zCDP accounting for full-batch Gaussian releases.
//
// A Gaussian release whose noise standard deviation is sigma times its L2
// sensitivity costs rho = 1 / (2 sigma^2), and costs add under composition.
// Conversion to (epsilon, delta)-DP uses the standard bound
//
//   epsilon = rho + 2 sqrt(rho ln(1/delta)),
//
// which is inverted in closed form by RhoFromEpsilonDelta.

#ifndef DPLINEAR_ACCOUNTANT_H_
#define DPLINEAR_ACCOUNTANT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dplinear/noise_key.h"

namespace dplinear {

struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 1e-5;
};

// Throws Error(kInvalidArgument) unless epsilon is finite and positive and
// delta lies in (0, 1).
void ValidateBudget(const PrivacyBudget& budget);

// The unique rho >= 0 with epsilon = rho + 2 sqrt(rho L), L = ln(1/delta):
// rho = (sqrt(L + epsilon) - sqrt(L))^2.
double RhoFromEpsilonDelta(const PrivacyBudget& budget);

double EpsilonFromRho(double rho, double delta);

enum class Method {
  kFirstOrder,
  kNewton,
  kLeastSquares,
  kFeatureCovariance,
};

// Canonical names: "first_order", "newton", "least_squares",
// "feature_covariance". ParseMethod also accepts "dp-adam", "dp-sgd",
// "dp-newton", "dp-ls" and "dp-fc".
std::string_view MethodName(Method method);
Method ParseMethod(std::string_view name);

struct MechanismCost {
  Method method = Method::kFirstOrder;
  std::int64_t iterations = 1;

  // Total rho of one run is RhoCoefficient() / sigma^2:
  //   first_order         T / 2
  //   newton              T
  //   least_squares       3 / 2   (independent of T and of the class count)
  //   feature_covariance  (T + 1) / 2
  double RhoCoefficient() const;
};

// sigma = sqrt(coefficient / rho_target). Throws on rho_target <= 0.
double CalibrateSigma(const MechanismCost& cost, double rho_target);
double CalibrateSigma(const MechanismCost& cost, const PrivacyBudget& budget);

// Append-only record of every Gaussian release in one run.
class ZcdpLedger {
 public:
  struct Entry {
    std::string label;
    double rho = 0.0;
    // The draws the release consumed. A release over a concatenation of
    // blocks (e.g. all class statistics at once) lists one key per block.
    std::vector<NoiseKey> keys;
  };

  // Throws Error(kInvalidArgument) on negative or NaN rho. +inf is accepted:
  // it is the honest cost of a release made with zero noise.
  void Charge(std::string label, double rho, std::vector<NoiseKey> keys = {});

  const std::vector<Entry>& entries() const { return entries_; }
  // Compensated sum of entry rhos.
  double total_rho() const { return total_ + compensation_; }

  // First key consumed by more than one release, if any.
  std::optional<NoiseKey> FindReusedKey() const;

 private:
  std::vector<Entry> entries_;
  double total_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace dplinear

#endif  // DPLINEAR_ACCOUNTANT_H_
