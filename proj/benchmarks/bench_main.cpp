// Copyright 2026 The ensemble-forge Authors.
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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "forge/data.hpp"
#include "forge/diversity.hpp"
#include "forge/ga.hpp"
#include "forge/ids.hpp"
#include "forge/mlp.hpp"

namespace {

std::vector<forge::IdentityDescriptor> random_pool(int n) {
  std::mt19937_64 rng(1);
  std::vector<forge::IdentityDescriptor> out;
  for (int i = 0; i < n; ++i) out.push_back(forge::encode(forge::random_spec(rng, 7), 7));
  return out;
}

forge::Dataset random_batch(int n) {
  std::mt19937_64 rng(2);
  return forge::synth_conflict(static_cast<std::size_t>(n), 0.3, 0.1, rng);
}

void BM_KwVariance(benchmark::State& state) {
  const auto pool = random_pool(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(forge::kw_variance(pool));
}
BENCHMARK(BM_KwVariance)->Arg(9)->Arg(60);

void BM_Forward(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const forge::ClassifierSpec spec{forge::MachineType::kMlp, 30, forge::Activation::kSoftmax, 2};
  const auto batch = random_batch(64);
  const auto net = forge::train(spec, batch, rng, 1).network;
  for (auto _ : state) benchmark::DoNotOptimize(forge::forward(net, batch.row(0)));
}
BENCHMARK(BM_Forward);

void BM_Gradient(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const forge::ClassifierSpec spec{forge::MachineType::kMlp, 30, forge::Activation::kLogistic, 2};
  const auto batch = random_batch(static_cast<int>(state.range(0)));
  const auto net = forge::train(spec, batch, rng, 1).network;
  for (auto _ : state) benchmark::DoNotOptimize(forge::loss_gradient(net, batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gradient)->Arg(100)->Arg(1006);

void BM_Evolve(benchmark::State& state) {
  const auto pool = random_pool(60);
  forge::GaConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forge::evolve(pool, 0.15, config));
    ++config.seed;
  }
}
BENCHMARK(BM_Evolve);

}  // namespace
