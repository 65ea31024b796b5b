// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "lilguard/guardian.hpp"
#include "lilguard/lz77.hpp"

namespace lz = lilguard::lz77;

namespace {

lz::Bytes random_input(std::size_t n) {
  std::mt19937_64 rng(1);
  lz::Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng() >> 56);
  return b;
}

lz::Bytes text_input(std::size_t n) {
  static const char* words[] = {"the ", "guard ", "watches ", "every ", "token ", "stream ",
                                "until ", "it ", "plateaus ", "again ", ".\n"};
  std::mt19937_64 rng(2);
  lz::Bytes b;
  while (b.size() < n) {
    const std::string w = words[rng() % 11];
    b.insert(b.end(), w.begin(), w.end());
  }
  b.resize(n);
  return b;
}

void run_compress(benchmark::State& state, const lz::Bytes& input, const lz::WindowConfig& config) {
  for (auto _ : state) benchmark::DoNotOptimize(lz::compress(input, config));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(input.size()));
}

void BM_CompressRandom(benchmark::State& state) {
  run_compress(state, random_input(state.range(0)), lz::WindowConfig::gzip_like());
}

void BM_CompressText(benchmark::State& state) {
  run_compress(state, text_input(state.range(0)), lz::WindowConfig::gzip_like());
}

void BM_CompressConstant(benchmark::State& state) {
  run_compress(state, lz::Bytes(state.range(0), 'a'), lz::WindowConfig::gzip_like());
}

void BM_CompressTextMonitor(benchmark::State& state) {
  run_compress(state, text_input(state.range(0)), lz::WindowConfig::monitor_default());
}

void BM_Decompress(benchmark::State& state) {
  const auto seq = lz::compress(text_input(state.range(0)), lz::WindowConfig::gzip_like());
  for (auto _ : state) benchmark::DoNotOptimize(lz::decompress(seq));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}

void BM_GuardianCheck(benchmark::State& state) {
  const auto prefill = text_input(state.range(0));
  for (auto _ : state) {
    auto s = lilguard::guardian::init(prefill, lilguard::guardian::GuardianConfig{});
    for (int i = 0; i < 250; ++i) benchmark::DoNotOptimize(s.observe("more "));
  }
}

}  // namespace

BENCHMARK(BM_CompressRandom)->RangeMultiplier(4)->Range(1 << 12, 1 << 19);
BENCHMARK(BM_CompressText)->RangeMultiplier(4)->Range(1 << 12, 1 << 19);
BENCHMARK(BM_CompressConstant)->RangeMultiplier(4)->Range(1 << 12, 1 << 19);
BENCHMARK(BM_CompressTextMonitor)->Arg(1 << 17);
BENCHMARK(BM_Decompress)->RangeMultiplier(4)->Range(1 << 12, 1 << 19);
BENCHMARK(BM_GuardianCheck)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK_MAIN();
