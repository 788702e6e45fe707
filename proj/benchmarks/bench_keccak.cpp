// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "solvkit/bytes.hpp"
#include "solvkit/hash.hpp"

namespace {

void BM_Keccak256(benchmark::State& state) {
  solvkit::Bytes input(static_cast<std::size_t>(state.range(0)), 0xa5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solvkit::keccak256(solvkit::view(input)));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_Keccak256)->Arg(32)->Arg(136)->Arg(1024)->Arg(65536);

void BM_Sha256d(benchmark::State& state) {
  solvkit::Bytes input(static_cast<std::size_t>(state.range(0)), 0x5a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solvkit::sha256d(solvkit::view(input)));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_Sha256d)->Arg(80)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
