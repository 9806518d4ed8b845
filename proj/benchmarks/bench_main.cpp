#include <benchmark/benchmark.h>

#include <array>
#include <cmath>
#include <string>
#include <numeric>
#include <random>
#include <vector>

#include "gaborface/gabor_bank.hpp"
#include "gaborface/nmds.hpp"
#include "gaborface/rank_stats.hpp"

using namespace gaborface;

namespace {

ImageRaster noise_image(int size) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 255);
  std::vector<double> px(static_cast<std::size_t>(size) * size);
  for (auto& v : px) v = u(rng);
  return ImageRaster(size, size, std::move(px));
}

PairMatrix random_dissimilarities(std::size_t n) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<std::array<double, 3>> pts(n);
  for (auto& p : pts) p = {g(rng), g(rng), g(rng)};
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("x" + std::to_string(i));
  PairMatrix m(ids, MatrixKind::kDissimilarity);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m.set(i, j, std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1], pts[i][2] - pts[j][2]));
  return m;
}

void BM_ComputeJet(benchmark::State& state) {
  const auto img = noise_image(256);
  const auto bank = FilterBank::standard();
  for (auto _ : state) benchmark::DoNotOptimize(compute_jet(img, bank, {128, 128}));
}
BENCHMARK(BM_ComputeJet);

void BM_IsotonicFit(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> y(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.01 * i + g(rng);
  std::vector<std::size_t> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(isotonic_fit(y, order));
}
BENCHMARK(BM_IsotonicFit)->Arg(231)->Arg(4371);

void BM_Embed(benchmark::State& state) {
  const auto m = random_dissimilarities(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(embed(m, 2));
}
BENCHMARK(BM_Embed)->Arg(22)->Arg(94)->Unit(benchmark::kMillisecond);

void BM_Spearman(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> u(0, 50);
  std::vector<double> x(static_cast<std::size_t>(state.range(0))), y(x.size());
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(spearman_rho(x, y));
}
BENCHMARK(BM_Spearman)->Arg(231)->Arg(4371);

void BM_PermutationSignificance(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(significance(0.3, 231, 10000));
}
BENCHMARK(BM_PermutationSignificance)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
