// Serial reference vs OpenMP path for the two hot kernels.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "specorder/flow.hpp"
#include "specorder/hamiltonian.hpp"
#include "specorder/parallel.hpp"

using namespace specorder;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

void BM_WeightedGram(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto cols = 2 * rows;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> samples(rows * cols), weights(cols);
  for (auto& s : samples) s = u(rng);
  for (auto& w : weights) w = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_gram(samples, rows, cols, weights, mode(state)));
  state.SetLabel(mode(state) == Execution::serial ? "serial" : "openmp");
}

void BM_FlowMatrices(benchmark::State& state) {
  const basis::BasisSpec b{0, static_cast<std::size_t>(state.range(0)), 0.6};
  const auto h1 = ham::assemble(ham::NonRel{1.0}, ham::Coulomb{1.0}, b);
  const auto h2 = ham::assemble(ham::NonRel{1.0}, ham::TangentHarmonic{1.0, 1.0}, b);
  const std::vector<flow::LevelKey> levels{{0, 0}, {1, 0}};
  const auto grid = flow::uniform_grid(101);
  flow::FlowOptions options;
  options.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(flow::flow_matrices(h1, h2, levels, grid, options));
  state.SetLabel(options.exec == Execution::serial ? "serial" : "openmp");
}

}  // namespace

BENCHMARK(BM_WeightedGram)->ArgsProduct({{100, 300}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlowMatrices)->ArgsProduct({{20, 40}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
