// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "solvkit/bytes.hpp"
#include "solvkit/merkle.hpp"

namespace {

std::vector<solvkit::Bytes> sample_leaves(std::size_t count) {
  std::vector<solvkit::Bytes> leaves(count);
  for (std::size_t i = 0; i < count; ++i) {
    leaves[i].assign(64, static_cast<std::uint8_t>(i * 7 + 1));
    leaves[i][0] = static_cast<std::uint8_t>(i >> 8);
    leaves[i][1] = static_cast<std::uint8_t>(i);
  }
  return leaves;
}

void BM_MerkleBuild(benchmark::State& state) {
  auto leaves = sample_leaves(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solvkit::MerkleTree::build(leaves));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_MerkleBuild)->Arg(64)->Arg(1024)->Arg(16384);

void BM_MerkleProveVerify(benchmark::State& state) {
  auto leaves = sample_leaves(1024);
  auto tree = solvkit::MerkleTree::build(leaves);
  std::size_t i = 0;
  for (auto _ : state) {
    std::size_t index = i++ % leaves.size();
    auto path = tree.prove(index);
    benchmark::DoNotOptimize(solvkit::MerkleTree::verify(
        tree.root(), solvkit::view(leaves[index]), path));
  }
}
BENCHMARK(BM_MerkleProveVerify);

}  // namespace

BENCHMARK_MAIN();
