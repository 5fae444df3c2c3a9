#include <benchmark/benchmark.h>

#include <random>

#include "emogan/collisions.hpp"
#include "emogan/gan.hpp"
#include "emogan/synth.hpp"

using namespace emogan;

namespace {

std::vector<LabeledExample> table_data(std::size_t per_combo) {
  SyntheticSpec spec;
  spec.examples_per_combo = per_combo;
  spec.seed = 1;
  spec.combos = all_emotion_combinations();
  spec.combos.erase(spec.combos.begin());  // drop all-zero
  return synthesize(spec);
}

void BM_Cosine512(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  Vec a(512), b(512);
  for (double& x : a) x = g(rng);
  for (double& x : b) x = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(cosine_similarity(a, b));
}
BENCHMARK(BM_Cosine512);

void BM_GeneratorForward(benchmark::State& state) {
  const auto gen = Generator::random(512, 1);
  const EmotionVector v{1, 0, 1, 0, 0, 1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(gen(v));
}
BENCHMARK(BM_GeneratorForward);

void BM_GeneratorEpoch(benchmark::State& state) {
  const auto data = table_data(4);
  auto gen = Generator::random(512, 1);
  TrainConfig cfg;
  cfg.seed = 2;
  for (auto _ : state) benchmark::DoNotOptimize(fit_generator(gen, data, cfg, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_GeneratorEpoch)->Unit(benchmark::kMillisecond);

void BM_DiscriminatorEpoch(benchmark::State& state) {
  const auto d2 = generate_dataset2(Generator::random(512, 1));
  TrainConfig cfg = default_discriminator_config();
  cfg.epochs = 1;
  cfg.seed = 3;
  Discriminator disc(fm_init(d2));
  for (auto _ : state) benchmark::DoNotOptimize(train_discriminator(disc, d2, cfg));
}
BENCHMARK(BM_DiscriminatorEpoch)->Unit(benchmark::kMillisecond);

void BM_MarkCollisions(benchmark::State& state) {
  const auto data = table_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mark_collisions(data, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_MarkCollisions)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
