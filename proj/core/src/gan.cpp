#include "emogan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "emogan/error.hpp"
#include "emogan/eval.hpp"
#include "emogan/rng.hpp"

namespace emogan {

namespace {

void fill_uniform(std::span<double> out, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& x : out) x = dist(rng);
}

void require_finite(double loss, const char* what, int epoch) {
  if (!std::isfinite(loss)) {
    throw NumericalError(std::string(what) + ": non-finite loss at epoch " +
                         std::to_string(epoch));
  }
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

bool all_zero(const EmotionVector& v) { return active_count(v) == 0; }

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 0) throw UsageError("epochs must be >= 0");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw UsageError("split_fraction must lie strictly between 0 and 1");
  }
  if (finetune_rounds < 0) throw UsageError("finetune_rounds must be >= 0");
  if (!(adam.lr > 0.0) || !(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.eps > 0.0)) {
    throw UsageError("invalid Adam hyperparameters");
  }
}

TrainConfig default_generator_config() {
  TrainConfig cfg;
  cfg.epochs = 10;
  return cfg;
}

TrainConfig default_discriminator_config() {
  TrainConfig cfg;
  cfg.epochs = 50;
  return cfg;
}

Generator Generator::random(std::size_t dim, std::uint64_t seed, std::size_t hidden,
                            AdamConfig adam) {
  if (dim == 0 || hidden == 0) throw UsageError("generator dimensions must be >= 1");
  std::mt19937_64 rng(derive_seed(seed, "generator-init"));
  Generator g;
  g.w1 = Mat(hidden, kNumEmotions);
  g.b1 = Vec(hidden);
  g.w2 = Mat(dim, hidden);
  g.b2 = Vec(dim);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(kNumEmotions));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  fill_uniform(g.w1.flat(), bound1, rng);
  fill_uniform(g.b1, bound1, rng);
  fill_uniform(g.w2.flat(), bound2, rng);
  fill_uniform(g.b2, bound2, rng);
  g.w1_state = AdamState(g.w1.size(), adam);
  g.b1_state = AdamState(g.b1.size(), adam);
  g.w2_state = AdamState(g.w2.size(), adam);
  g.b2_state = AdamState(g.b2.size(), adam);
  return g;
}

Vec Generator::operator()(const EmotionVector& v) const {
  const Vec h = linear_forward(w1, b1, v);
  return linear_forward(w2, b2, h);
}

Discriminator::Discriminator(Mat protos, AdamConfig adam)
    : prototypes(std::move(protos)), state(prototypes.size(), adam) {
  if (prototypes.rows() != kNumEmotions) {
    throw DimensionError("discriminator needs exactly 7 prototype rows, got " +
                         std::to_string(prototypes.rows()));
  }
}

std::vector<std::vector<double>> enumerate_combinations(int n) {
  if (n < 1 || n > 16) throw UsageError("enumerate_combinations: n must be in 1..16");
  const std::size_t count = std::size_t{1} << n;
  std::vector<std::vector<double>> out(count, std::vector<double>(static_cast<std::size_t>(n)));
  for (std::size_t i = 0; i < count; ++i) {
    for (int j = 0; j < n; ++j) out[i][static_cast<std::size_t>(j)] = (i >> (n - 1 - j)) & 1U;
  }
  return out;
}

std::vector<EmotionVector> all_emotion_combinations() {
  const auto combos = enumerate_combinations(static_cast<int>(kNumEmotions));
  std::vector<EmotionVector> out(combos.size());
  for (std::size_t i = 0; i < combos.size(); ++i) {
    std::copy(combos[i].begin(), combos[i].end(), out[i].begin());
  }
  return out;
}

std::vector<double> fit_generator(Generator& gen, std::span<const LabeledExample> dataset,
                                  const TrainConfig& cfg, int epochs) {
  cfg.validate();
  if (dataset.empty()) throw EmptyInputError("train_generator: empty dataset");
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].embedding.size() != gen.dim()) {
      throw DimensionError("train_generator: example " + std::to_string(i) +
                           " has embedding length " +
                           std::to_string(dataset[i].embedding.size()) + ", expected " +
                           std::to_string(gen.dim()));
    }
  }

  // The step counter makes successive calls draw different shuffles.
  std::mt19937_64 rng(derive_seed(cfg.seed ^ static_cast<std::uint64_t>(gen.w1_state.t),
                                  "generator-shuffle"));
  const std::size_t batch = cfg.batch_size == 0 ? dataset.size() : cfg.batch_size;
  auto order = iota_indices(dataset.size());

  Mat dw1(gen.w1.rows(), gen.w1.cols());
  Vec db1(gen.b1.size());
  Mat dw2(gen.w2.rows(), gen.w2.cols());
  Vec db2(gen.b2.size());

  std::vector<double> curve;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::fill(dw1.flat().begin(), dw1.flat().end(), 0.0);
      std::fill(db1.begin(), db1.end(), 0.0);
      std::fill(dw2.flat().begin(), dw2.flat().end(), 0.0);
      std::fill(db2.begin(), db2.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const auto& ex = dataset[order[k]];
        const Vec h = linear_forward(gen.w1, gen.b1, ex.emotions);
        const Vec y = linear_forward(gen.w2, gen.b2, h);
        const auto lg = mse_loss(y, ex.embedding);
        epoch_loss += lg.loss;
        accumulate_linear_param_grads(h, lg.grad, dw2, db2);
        const Vec dh = linear_input_grad(gen.w2, lg.grad);
        accumulate_linear_param_grads(ex.emotions, dh, dw1, db1);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (double& g : dw1.flat()) g *= scale;
      for (double& g : db1) g *= scale;
      for (double& g : dw2.flat()) g *= scale;
      for (double& g : db2) g *= scale;
      adam_step(gen.w1.flat(), dw1.flat(), gen.w1_state);
      adam_step(gen.b1, db1, gen.b1_state);
      adam_step(gen.w2.flat(), dw2.flat(), gen.w2_state);
      adam_step(gen.b2, db2, gen.b2_state);
    }
    epoch_loss /= static_cast<double>(dataset.size());
    require_finite(epoch_loss, "generator", epoch);
    curve.push_back(epoch_loss);
  }
  return curve;
}

GeneratorTraining train_generator(std::span<const LabeledExample> dataset,
                                  const TrainConfig& cfg, std::size_t hidden) {
  cfg.validate();
  if (dataset.empty()) throw EmptyInputError("train_generator: empty dataset");
  GeneratorTraining out{
      Generator::random(dataset.front().embedding.size(), cfg.seed, hidden, cfg.adam), {}};
  out.epoch_loss = fit_generator(out.generator, dataset, cfg, cfg.epochs);
  return out;
}

GeneratorAccuracy generator_accuracy(const Generator& gen,
                                     std::span<const LabeledExample> dataset,
                                     double threshold) {
  GeneratorAccuracy acc;
  if (dataset.empty()) return acc;
  std::size_t hits = 0;
  for (const auto& ex : dataset) {
    const double c = cosine_similarity(gen(ex.emotions), ex.embedding);
    acc.mean_cosine += c;
    if (c >= threshold) ++hits;
  }
  acc.fraction = static_cast<double>(hits) / static_cast<double>(dataset.size());
  acc.mean_cosine /= static_cast<double>(dataset.size());
  return acc;
}

Dataset2 generate_dataset2(const Generator& gen) {
  Dataset2 out;
  out.reserve(kNumCombinations);
  for (const auto& v1 : all_emotion_combinations()) out.push_back({v1, gen(v1)});
  return out;
}

std::vector<LabeledExample> dataset2_examples(const Dataset2& d2) {
  std::vector<LabeledExample> out;
  out.reserve(d2.size());
  for (const auto& p : d2) out.push_back({p.v2, p.v1, std::nullopt, false});
  return out;
}

Dataset2 dataset2_from_examples(std::span<const LabeledExample> examples) {
  Dataset2 out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back({e.emotions, e.embedding});
  return out;
}

Mat fm_init(const Mat& labels, const Mat& embeddings) {
  if (labels.rows() == 0) throw EmptyInputError("fm_init: no pairs");
  if (labels.rows() != embeddings.rows()) {
    throw DimensionError("fm_init: label and embedding row counts differ");
  }
  Mat f(labels.cols(), embeddings.cols());
  for (std::size_t n = 0; n < labels.rows(); ++n) {
    const auto b = embeddings.row(n);
    for (std::size_t j = 0; j < labels.cols(); ++j) {
      const double e = labels(n, j);
      auto out = f.row(j);
      for (std::size_t d = 0; d < b.size(); ++d) out[d] += e * b[d];
    }
  }
  return f;
}

Mat fm_init(std::span<const Dataset2Pair> pairs) {
  if (pairs.empty()) throw EmptyInputError("fm_init: no pairs");
  const std::size_t dim = pairs.front().v2.size();
  Mat labels(pairs.size(), kNumEmotions);
  Mat embeddings(pairs.size(), dim);
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    if (pairs[n].v2.size() != dim) throw DimensionError("fm_init: ragged embeddings");
    std::copy(pairs[n].v1.begin(), pairs[n].v1.end(), labels.row(n).begin());
    std::copy(pairs[n].v2.begin(), pairs[n].v2.end(), embeddings.row(n).begin());
  }
  return fm_init(labels, embeddings);
}

DiscriminatorOutput discriminator_forward(const Discriminator& disc, std::span<const double> x) {
  if (x.size() != disc.dim()) {
    throw DimensionError("discriminator: input length " + std::to_string(x.size()) +
                         ", expected " + std::to_string(disc.dim()));
  }
  DiscriminatorOutput out;
  for (std::size_t j = 0; j < kNumEmotions; ++j) {
    out.raw[j] = cosine_similarity(x, disc.prototypes.row(j));
  }
  const Vec f = normalize_forecast(out.raw);
  std::copy(f.begin(), f.end(), out.forecast.begin());
  return out;
}

Split split_indices(std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw UsageError("split fraction must lie strictly between 0 and 1");
  }
  auto order = iota_indices(n);
  std::mt19937_64 rng(derive_seed(seed, "split"));
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  Split s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return s;
}

double discriminator_loss(const Discriminator& disc, std::span<const Dataset2Pair> pairs,
                          std::span<const std::size_t> indices) {
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t i : indices) {
    if (all_zero(pairs[i].v1)) continue;
    const auto out = discriminator_forward(disc, pairs[i].v2);
    total += cosine_loss(out.raw, pairs[i].v1).loss;
    ++used;
  }
  return used == 0 ? 0.0 : total / static_cast<double>(used);
}

double discriminator_overlap_accuracy(const Discriminator& disc,
                                      std::span<const Dataset2Pair> pairs,
                                      std::span<const std::size_t> indices) {
  std::size_t hits = 0;
  std::size_t used = 0;
  for (std::size_t i : indices) {
    const auto& v1 = pairs[i].v1;
    if (all_zero(v1)) continue;
    const Top2 t = top2(discriminator_forward(disc, pairs[i].v2).forecast);
    if (v1[t.first] != 0.0 || v1[t.second] != 0.0) ++hits;
    ++used;
  }
  return used == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(used);
}

DiscriminatorTraining train_discriminator(Discriminator& disc, const Dataset2& dataset2,
                                          const TrainConfig& cfg) {
  cfg.validate();
  for (const auto& p : dataset2) {
    if (p.v2.size() != disc.dim()) {
      throw DimensionError("train_discriminator: Dataset_2 embedding length " +
                           std::to_string(p.v2.size()) + ", expected " +
                           std::to_string(disc.dim()));
    }
  }
  DiscriminatorTraining result;
  result.split = split_indices(dataset2.size(), cfg.split_fraction, cfg.seed);
  if (result.split.train.empty() || result.split.test.empty()) {
    throw EmptyInputError("train_discriminator: empty train or test split");
  }

  std::vector<std::size_t> usable;
  for (std::size_t i : result.split.train) {
    if (!all_zero(dataset2[i].v1)) usable.push_back(i);
  }

  std::mt19937_64 rng(derive_seed(cfg.seed ^ static_cast<std::uint64_t>(disc.state.t),
                                  "discriminator-shuffle"));
  const std::size_t batch = cfg.batch_size == 0 ? usable.size() : cfg.batch_size;
  Mat grad(disc.prototypes.rows(), disc.prototypes.cols());

  for (int epoch = 0; epoch < cfg.epochs && !usable.empty(); ++epoch) {
    std::shuffle(usable.begin(), usable.end(), rng);
    for (std::size_t start = 0; start < usable.size(); start += batch) {
      const std::size_t end = std::min(usable.size(), start + batch);
      std::fill(grad.flat().begin(), grad.flat().end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const auto& pair = dataset2[usable[k]];
        const auto out = discriminator_forward(disc, pair.v2);
        const auto lg = cosine_loss(out.raw, pair.v1);
        for (std::size_t j = 0; j < kNumEmotions; ++j) {
          if (lg.grad[j] == 0.0) continue;
          const Vec dcos = cosine_similarity_grad(disc.prototypes.row(j), pair.v2);
          auto row = grad.row(j);
          for (std::size_t d = 0; d < row.size(); ++d) row[d] += lg.grad[j] * dcos[d];
        }
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (double& g : grad.flat()) g *= scale;
      adam_step(disc.prototypes.flat(), grad.flat(), disc.state);
    }
    result.train_loss.push_back(discriminator_loss(disc, dataset2, result.split.train));
    result.test_loss.push_back(discriminator_loss(disc, dataset2, result.split.test));
    require_finite(result.train_loss.back(), "discriminator", epoch);
    require_finite(result.test_loss.back(), "discriminator", epoch);
  }
  result.train_accuracy = discriminator_overlap_accuracy(disc, dataset2, result.split.train);
  result.test_accuracy = discriminator_overlap_accuracy(disc, dataset2, result.split.test);
  return result;
}

FinetuneHistory joint_finetune(Generator& gen, Discriminator& disc,
                               std::span<const LabeledExample> dataset1,
                               const TrainConfig& gen_cfg, const TrainConfig& disc_cfg,
                               int rounds) {
  if (rounds < 0) throw UsageError("finetune rounds must be >= 0");
  FinetuneHistory history;
  for (int r = 0; r < rounds; ++r) {
    const Dataset2 d2 = generate_dataset2(gen);
    const auto dt = train_discriminator(disc, d2, disc_cfg);
    history.discriminator_loss.push_back(dt.train_loss.empty()
                                             ? discriminator_loss(disc, d2, dt.split.train)
                                             : dt.train_loss.back());
    const auto gl = fit_generator(gen, dataset1, gen_cfg, 1);
    history.generator_loss.push_back(gl.back());
  }
  return history;
}

}  // namespace emogan
