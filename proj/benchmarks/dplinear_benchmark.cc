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

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include <benchmark/benchmark.h>

#include "dplinear/accountant.h"
#include "dplinear/linalg.h"
#include "dplinear/sanitizers.h"
#include "dplinear/solvers.h"
#include "dplinear/synthetic.h"

namespace dplinear {
namespace {

const SyntheticData& Data(std::int64_t d, std::int64_t m) {
  static std::map<std::pair<std::int64_t, std::int64_t>, SyntheticData> cache;
  auto it = cache.find({d, m});
  if (it == cache.end()) {
    it = cache.emplace(std::make_pair(d, m),
                       GenerateSynthetic({2500, d, m, 1.0, 0.25, 1}))
             .first;
  }
  return it->second;
}

void BM_WeightedGram(benchmark::State& state) {
  const FeatureDataset& ds = Data(state.range(0), 10).train;
  for (auto _ : state) {
    benchmark::DoNotOptimize(WeightedGram(ds.features()));
  }
  state.SetItemsProcessed(state.iterations() * ds.num_examples());
}
BENCHMARK(BM_WeightedGram)->Arg(16)->Arg(64)->Arg(256);

void BM_SolveLinear(benchmark::State& state) {
  const Eigen::Index d = state.range(0);
  const Matrix a = Matrix::Random(d, d) + static_cast<double>(d) *
                                              Matrix::Identity(d, d);
  const Vector b = Vector::Random(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveLinear(a, b));
  }
}
BENCHMARK(BM_SolveLinear)->Arg(16)->Arg(64)->Arg(256);

void BM_GaussianNoise(benchmark::State& state) {
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(GaussianNoise(
        state.range(0), state.range(0), 1.0,
        NoiseKey{1, ++t, 0, StatisticId::kGradient}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) *
                          state.range(0));
}
BENCHMARK(BM_GaussianNoise)->Arg(16)->Arg(256);

// One private training run on n = 2000, m = 100.
void BM_Train(benchmark::State& state) {
  const auto method = static_cast<Method>(state.range(0));
  const FeatureDataset& ds = Data(state.range(1), 100).train;
  SolverConfig c;
  c.method = method;
  c.iterations = method == Method::kNewton ? 2 : 10;
  c.sigma = 4.0;
  c.lambda = 1.0;
  c.learning_rate = 0.1;
  c.track_objective = false;
  for (auto _ : state) {
    ZcdpLedger ledger;
    benchmark::DoNotOptimize(Train(ds, c, ledger));
  }
  state.SetLabel(std::string(MethodName(method)));
}
BENCHMARK(BM_Train)
    ->ArgsProduct({{static_cast<int>(Method::kFirstOrder),
                    static_cast<int>(Method::kNewton),
                    static_cast<int>(Method::kLeastSquares),
                    static_cast<int>(Method::kFeatureCovariance)},
                   {16, 64}})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dplinear

BENCHMARK_MAIN();
