#include "zsl/eval.hpp"
#include "zsl/hubness.hpp"
#include "zsl/neighbors.hpp"
#include "zsl/regression.hpp"
#include "zsl/rng.hpp"
#include "zsl/theory.hpp"

#include <benchmark/benchmark.h>

namespace {

zsl::DataMatrix random_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed) {
  zsl::Rng rng(seed);
  return rng.normal_matrix(rows, cols);
}

void BM_FitRidge(benchmark::State& state) {
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  const auto n = static_cast<Eigen::Index>(state.range(1));
  const auto a = random_matrix(dim, n, 1);
  const auto b = random_matrix(dim, n, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(zsl::fit_ridge(a, b, 1.0));
  state.SetComplexityN(n);
}
BENCHMARK(BM_FitRidge)->Args({100, 200})->Args({100, 1600})->Args({300, 1600});

void BM_FitRidgeMinNorm(benchmark::State& state) {
  const auto a = random_matrix(100, static_cast<Eigen::Index>(state.range(0)), 3);
  const auto b = random_matrix(100, static_cast<Eigen::Index>(state.range(0)), 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(zsl::fit_ridge(a, b, 0.0));
}
BENCHMARK(BM_FitRidgeMinNorm)->Arg(200)->Arg(800);

void BM_PairwiseEuclidean(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto queries = random_matrix(100, n, 5);
  const auto targets = random_matrix(100, n, 6);
  for (auto _ : state)
    benchmark::DoNotOptimize(zsl::pairwise_euclidean(queries, targets));
}
BENCHMARK(BM_PairwiseEuclidean)->Arg(200)->Arg(400)->Arg(1000);

void BM_Nicdm(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto dist = zsl::pairwise_euclidean(random_matrix(50, n, 7),
                                            random_matrix(50, n, 8));
  for (auto _ : state)
    benchmark::DoNotOptimize(zsl::nicdm(dist, 10));
}
BENCHMARK(BM_Nicdm)->Arg(200)->Arg(400)->Arg(1000);

void BM_RankAll(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto dist = zsl::pairwise_euclidean(random_matrix(50, n, 9),
                                            random_matrix(50, n, 10));
  for (auto _ : state)
    benchmark::DoNotOptimize(zsl::rank_all(dist));
}
BENCHMARK(BM_RankAll)->Arg(200)->Arg(400)->Arg(1000);

void BM_HubnessReport(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto rankings = zsl::rank_all(zsl::pairwise_euclidean(
      random_matrix(50, n, 11), random_matrix(50, n, 12)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        zsl::hubness_report(rankings, 10, static_cast<int>(n)));
}
BENCHMARK(BM_HubnessReport)->Arg(400)->Arg(1000);

void BM_DeltaMonteCarlo(benchmark::State& state) {
  zsl::DeltaParams params;
  params.gamma = 1.0;
  params.dim = static_cast<int>(state.range(0));
  params.num_samples = 10000;
  params.seed = 13;
  for (auto _ : state)
    benchmark::DoNotOptimize(zsl::delta_monte_carlo(params));
}
BENCHMARK(BM_DeltaMonteCarlo)->Arg(10)->Arg(100);

void BM_SpectralNorm(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto m = random_matrix(n, n, 14);
  for (auto _ : state)
    benchmark::DoNotOptimize(zsl::spectral_norm(m));
}
BENCHMARK(BM_SpectralNorm)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
