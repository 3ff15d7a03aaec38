#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "mixgan/divergences.hpp"
#include "mixgan/game.hpp"
#include "mixgan/tensor.hpp"

namespace {

mixgan::Tensor random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  mixgan::Rng rng(seed);
  mixgan::Tensor t({r, c});
  for (double& v : t.values()) v = rng.uniform(-1, 1);
  return t;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(64, n, 1), b = random_matrix(n, 240, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mixgan::matmul_values(a, b));
  state.SetItemsProcessed(state.iterations() * 64 * static_cast<long>(n) * 240);
}
BENCHMARK(BM_Matmul)->Arg(100)->Arg(784);

void BM_TrainStepSynthetic(benchmark::State& state) {
  mixgan::GameConfig cfg;
  cfg.generator = mixgan::MlpSpec{{8, 32, 2}, mixgan::Activation::kRelu, mixgan::Activation::kIdentity};
  auto s = mixgan::init_game(cfg);
  const auto real = random_matrix(cfg.batch_size, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mixgan::train_step(s, real));
}
BENCHMARK(BM_TrainStepSynthetic);

void BM_TrainStepMnist(benchmark::State& state) {
  mixgan::GameConfig cfg;
  auto s = mixgan::init_game(cfg);
  auto real = random_matrix(cfg.batch_size, 784, 4);
  for (double& v : real.values()) v = 0.5 * (v + 1);
  for (auto _ : state) benchmark::DoNotOptimize(mixgan::train_step(s, real));
}
BENCHMARK(BM_TrainStepMnist)->Unit(benchmark::kMillisecond);

void BM_ValueForms(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  auto dist = [&] {
    std::vector<double> w(n);
    for (auto& v : w) v = u(rng);
    return mixgan::DiscreteDistribution::normalized(w);
  };
  const auto real = dist();
  const mixgan::MixtureModel m({dist(), dist(), dist()});
  for (auto _ : state) {
    benchmark::DoNotOptimize(mixgan::value_at_optimum(real, m));
    benchmark::DoNotOptimize(mixgan::value_js_form(real, m));
  }
}
BENCHMARK(BM_ValueForms)->Arg(16)->Arg(1024);

}  // namespace
BENCHMARK_MAIN();
