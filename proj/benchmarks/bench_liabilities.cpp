// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "solvkit/bytes.hpp"
#include "solvkit/liabilities.hpp"

namespace {

std::vector<solvkit::UserLeaf> sample_users(std::size_t count) {
  std::vector<solvkit::UserLeaf> leaves;
  leaves.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string id = "user-" + std::to_string(i);
    solvkit::Digest32 salt{};
    salt[0] = static_cast<std::uint8_t>(i >> 8);
    salt[1] = static_cast<std::uint8_t>(i);
    salt[31] = 0x5a;
    leaves.push_back(solvkit::make_user_leaf(
        solvkit::view(id),
        {{solvkit::AssetKey{"eth", solvkit::Address{}},
          solvkit::Amount::from_u64(1000 + i)},
         {solvkit::AssetKey{"btc", solvkit::Address{}},
          solvkit::Amount::from_u64(10 + i)}},
        salt));
  }
  return leaves;
}

void BM_LiabilityTreeBuild(benchmark::State& state) {
  auto users = sample_users(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto copy = users;
    benchmark::DoNotOptimize(solvkit::build_liability_tree(std::move(copy)));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_LiabilityTreeBuild)->Arg(10)->Arg(100)->Arg(1024);

void BM_LiabilityRelationCheck(benchmark::State& state) {
  auto tree = solvkit::build_liability_tree(
      sample_users(static_cast<std::size_t>(state.range(0))));
  solvkit::LiabilityStatement statement{tree.root(), tree.sum_leaf_index};
  solvkit::LiabilityWitness witness = solvkit::witness_of(tree);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solvkit::check_liability_relation(statement, witness));
  }
}
BENCHMARK(BM_LiabilityRelationCheck)->Arg(100)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
