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

#include "dplinear/accountant.h"

#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "dplinear/error.h"

namespace dplinear {

void ValidateBudget(const PrivacyBudget& budget) {
  if (!(std::isfinite(budget.epsilon) && budget.epsilon > 0.0)) {
    std::ostringstream os;
    os << "epsilon must be finite and positive, got " << budget.epsilon;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  if (!(budget.delta > 0.0 && budget.delta < 1.0)) {
    std::ostringstream os;
    os << "delta must lie in (0, 1), got " << budget.delta;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

double RhoFromEpsilonDelta(const PrivacyBudget& budget) {
  ValidateBudget(budget);
  const double log_inv_delta = -std::log(budget.delta);
  // (sqrt(L + eps) - sqrt(L))^2 rewritten without the cancellation.
  const double root_sum =
      std::sqrt(log_inv_delta + budget.epsilon) + std::sqrt(log_inv_delta);
  const double root_rho = budget.epsilon / root_sum;
  return root_rho * root_rho;
}

double EpsilonFromRho(double rho, double delta) {
  if (!(rho >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must be non-negative");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  }
  if (std::isinf(rho)) return rho;
  return rho + 2.0 * std::sqrt(rho * -std::log(delta));
}

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kFirstOrder:
      return "first_order";
    case Method::kNewton:
      return "newton";
    case Method::kLeastSquares:
      return "least_squares";
    case Method::kFeatureCovariance:
      return "feature_covariance";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  if (name == "first_order" || name == "dp-adam" || name == "dp-sgd") {
    return Method::kFirstOrder;
  }
  if (name == "newton" || name == "dp-newton") return Method::kNewton;
  if (name == "least_squares" || name == "dp-ls") return Method::kLeastSquares;
  if (name == "feature_covariance" || name == "dp-fc") {
    return Method::kFeatureCovariance;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown method '" + std::string(name) + "'");
}

double MechanismCost::RhoCoefficient() const {
  if (method != Method::kLeastSquares && iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  }
  const double t = static_cast<double>(iterations);
  switch (method) {
    case Method::kFirstOrder:
      return t / 2.0;
    case Method::kNewton:
      return t;
    case Method::kLeastSquares:
      return 1.5;
    case Method::kFeatureCovariance:
      return (t + 1.0) / 2.0;
  }
  return 0.0;
}

double CalibrateSigma(const MechanismCost& cost, double rho_target) {
  if (!(rho_target > 0.0) || std::isinf(rho_target)) {
    std::ostringstream os;
    os << "target rho must be finite and positive, got " << rho_target;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  return std::sqrt(cost.RhoCoefficient() / rho_target);
}

double CalibrateSigma(const MechanismCost& cost, const PrivacyBudget& budget) {
  return CalibrateSigma(cost, RhoFromEpsilonDelta(budget));
}

void ZcdpLedger::Charge(std::string label, double rho,
                        std::vector<NoiseKey> keys) {
  if (!(rho >= 0.0)) {
    std::ostringstream os;
    os << "cannot charge rho=" << rho << " for '" << label << "'";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  // Neumaier summation keeps totals of thousands of equal per-class charges
  // within a few ulps of the closed form.
  const double sum = total_ + rho;
  if (std::isfinite(sum)) {
    if (std::abs(total_) >= std::abs(rho)) {
      compensation_ += (total_ - sum) + rho;
    } else {
      compensation_ += (rho - sum) + total_;
    }
  } else {
    compensation_ = 0.0;
  }
  total_ = sum;
  entries_.push_back(Entry{std::move(label), rho, std::move(keys)});
}

std::optional<NoiseKey> ZcdpLedger::FindReusedKey() const {
  std::set<NoiseKey> seen;
  for (const Entry& entry : entries_) {
    for (const NoiseKey& key : entry.keys) {
      if (!seen.insert(key).second) return key;
    }
  }
  return std::nullopt;
}

}  // namespace dplinear
