// Serial reference kernels against their OpenMP counterparts on a synthetic
// workload. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <map>

#include "emopair/kernels.hpp"
#include "emopair/simulate.hpp"

namespace {

using namespace emopair;
using namespace emopair::kernels;

struct Workload {
  std::vector<EmotionSet> sets;
  PairColumnTable table{};
  std::size_t n_cols = 0;
  SparseBinaryRows x;
  std::vector<double> beta, eta, weight, residual;
  std::vector<std::uint8_t> y;
};

const Workload& workload(std::size_t n) {
  static std::map<std::size_t, Workload> cache;
  auto [it, fresh] = cache.try_emplace(n);
  Workload& w = it->second;
  if (!fresh) return w;

  FixtureRng rng(99);
  w.sets.resize(n);
  for (auto& s : w.sets) {
    const auto k = 1 + rng.below(6);
    for (std::size_t j = 0; j < k; ++j) s.insert(emotion_at(rng.below(kEmotionCount - 1)));
  }
  w.table.fill(-1);
  for (std::size_t a = 0; a < kEmotionCount; ++a) {
    for (std::size_t b = a + 1; b < kEmotionCount; ++b) {
      if (rng.bernoulli(0.25)) {
        w.table[a * kEmotionCount + b] = w.table[b * kEmotionCount + a] = static_cast<std::int32_t>(w.n_cols++);
      }
    }
  }
  w.x = pair_rows_serial(w.sets, w.table, w.n_cols);
  w.beta.resize(w.n_cols + 1);
  for (auto& b : w.beta) b = rng.uniform() - 0.5;
  w.eta.resize(n);
  w.weight.resize(n);
  w.residual.resize(n);
  w.y.resize(n);
  linear_predictor_serial(w.x, w.beta, w.eta);
  for (std::size_t i = 0; i < n; ++i) {
    w.weight[i] = 0.25 * rng.uniform();
    w.residual[i] = rng.uniform() - 0.5;
    w.y[i] = rng.bernoulli(0.4);
  }
  return w;
}

template <PairCounts (*Kernel)(std::span<const EmotionSet>)>
void BM_Cooccurrence(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(w.sets));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <SparseBinaryRows (*Kernel)(std::span<const EmotionSet>, const PairColumnTable&, std::size_t)>
void BM_PairRows(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(w.sets, w.table, w.n_cols));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <double (*Kernel)(std::span<const double>, std::span<const std::uint8_t>)>
void BM_LogLikelihood(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(w.eta, w.y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <CrossProducts (*Kernel)(const SparseBinaryRows&, std::span<const double>, std::span<const double>)>
void BM_CrossProducts(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(w.x, w.weight, w.residual));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

constexpr std::int64_t kSmall = 20'000;
constexpr std::int64_t kLarge = 1'000'000;

BENCHMARK(BM_Cooccurrence<cooccurrence_serial>)->Arg(kSmall)->Arg(kLarge)->Name("cooccurrence/serial");
BENCHMARK(BM_Cooccurrence<cooccurrence_parallel>)->Arg(kSmall)->Arg(kLarge)->Name("cooccurrence/parallel");
BENCHMARK(BM_PairRows<pair_rows_serial>)->Arg(kSmall)->Arg(kLarge)->Name("pair_rows/serial");
BENCHMARK(BM_PairRows<pair_rows_parallel>)->Arg(kSmall)->Arg(kLarge)->Name("pair_rows/parallel");
BENCHMARK(BM_LogLikelihood<bernoulli_log_likelihood_serial>)->Arg(kSmall)->Arg(kLarge)->Name("loglik/serial");
BENCHMARK(BM_LogLikelihood<bernoulli_log_likelihood_parallel>)->Arg(kSmall)->Arg(kLarge)->Name("loglik/parallel");
BENCHMARK(BM_CrossProducts<cross_products_serial>)->Arg(kSmall)->Arg(kLarge)->Name("cross_products/serial");
BENCHMARK(BM_CrossProducts<cross_products_parallel>)->Arg(kSmall)->Arg(kLarge)->Name("cross_products/parallel");

}  // namespace

BENCHMARK_MAIN();
