// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference vs OpenMP kernels on a plane Gabor block.
// Argument: half extent T of the grid [-T, T]^2 with spacing 0.25.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "berezin/frames.hpp"
#include "berezin/kernels.hpp"

namespace {

using namespace berezin;

struct Fixture {
  QuadGrid grid;
  FrameFamily family;
  FrameBlock block;
  std::vector<double> coeff;
  std::vector<cplx> signal;

  explicit Fixture(double T)
      : grid(plane_grid(T, T, 0.25, 0.25)),
        family(make_plane_gabor(builtin_window("gaussian", matched_lattice(grid)), grid, "gaussian")),
        block(build_block(family, grid)) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    coeff.resize(grid.size());
    for (double& c : coeff) c = u(rng);
    signal.resize(block.lattice.n);
    for (cplx& v : signal) v = {u(rng), u(rng)};
  }
};

const Fixture& fixture(int T) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(T);
  if (it == cache.end()) it = cache.emplace(T, Fixture(T)).first;
  return it->second;
}

template <auto Fn>
void BM_analysis(benchmark::State& state) {
  const Fixture& f = fixture(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.block, f.signal));
  state.SetItemsProcessed(state.iterations() * f.block.size());
}

template <auto Fn>
void BM_toeplitz(benchmark::State& state) {
  const Fixture& f = fixture(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.block, f.coeff));
  state.SetItemsProcessed(state.iterations() * f.block.size());
}

template <auto Fn>
void BM_berezin(benchmark::State& state) {
  const Fixture& f = fixture(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.block, f.coeff, f.block));
  state.SetItemsProcessed(state.iterations() * f.block.size());
}

}  // namespace

BENCHMARK(BM_analysis<serial::analysis>)->Name("analysis/serial")->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_analysis<omp::analysis>)->Name("analysis/omp")->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_toeplitz<serial::toeplitz>)->Name("toeplitz/serial")->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_toeplitz<omp::toeplitz>)->Name("toeplitz/omp")->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_berezin<serial::berezin>)->Name("berezin/serial")->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_berezin<omp::berezin>)->Name("berezin/omp")->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
