#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "emogan/emotext.hpp"
#include "emogan/mathkit.hpp"

namespace emogan {

inline constexpr std::size_t kDefaultEmbeddingDim = 512;
inline constexpr std::size_t kGeneratorHidden = 128;
inline constexpr std::size_t kNumCombinations = std::size_t{1} << kNumEmotions;

struct TrainConfig {
  int epochs = 10;
  AdamConfig adam;
  std::size_t batch_size = 16;  // 0 means full batch
  std::uint64_t seed = 0;
  double split_fraction = 0.7;
  int finetune_rounds = 0;

  void validate() const;  // throws UsageError

  bool operator==(const TrainConfig&) const = default;
};

TrainConfig default_generator_config();      // 10 epochs
TrainConfig default_discriminator_config();  // 50 epochs

// Two stacked linear layers with no activation: 7 -> hidden -> D.
struct Generator {
  Mat w1;  // hidden x 7
  Vec b1;
  Mat w2;  // D x hidden
  Vec b2;
  AdamState w1_state, b1_state, w2_state, b2_state;

  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases.
  static Generator random(std::size_t dim, std::uint64_t seed,
                          std::size_t hidden = kGeneratorHidden, AdamConfig adam = {});

  std::size_t dim() const { return w2.rows(); }
  std::size_t hidden() const { return w1.rows(); }

  Vec operator()(const EmotionVector& v) const;

  bool operator==(const Generator&) const = default;
};

// One class-prototype row per emotion; scores are cosine similarities.
struct Discriminator {
  Mat prototypes;  // 7 x D
  AdamState state;

  explicit Discriminator(Mat protos = Mat(kNumEmotions, 1), AdamConfig adam = {});

  std::size_t dim() const { return prototypes.cols(); }

  bool operator==(const Discriminator&) const = default;
};

// 2^n binary vectors in ascending order. Bit j of index i, counted from the
// most significant of the n bits, is component j.
std::vector<std::vector<double>> enumerate_combinations(int n);
// enumerate_combinations(7) as EmotionVectors.
std::vector<EmotionVector> all_emotion_combinations();

struct GeneratorTraining {
  Generator generator;
  std::vector<double> epoch_loss;
};

// Fresh seeded generator trained on (emotions -> embedding) pairs with MSE
// and Adam.
GeneratorTraining train_generator(std::span<const LabeledExample> dataset,
                                  const TrainConfig& cfg,
                                  std::size_t hidden = kGeneratorHidden);

// Continues training an existing generator for `epochs` epochs; returns
// per-epoch mean loss. Throws NumericalError on a non-finite loss.
std::vector<double> fit_generator(Generator& gen, std::span<const LabeledExample> dataset,
                                  const TrainConfig& cfg, int epochs);

struct GeneratorAccuracy {
  double fraction = 0.0;
  double mean_cosine = 0.0;
};

// Fraction of pairs whose generated embedding has cosine >= threshold with
// the real one.
GeneratorAccuracy generator_accuracy(const Generator& gen,
                                     std::span<const LabeledExample> dataset,
                                     double threshold = 0.9);

struct Dataset2Pair {
  EmotionVector v1{};
  Vec v2;

  bool operator==(const Dataset2Pair&) const = default;
};
using Dataset2 = std::vector<Dataset2Pair>;

Dataset2 generate_dataset2(const Generator& gen);

std::vector<LabeledExample> dataset2_examples(const Dataset2& d2);
Dataset2 dataset2_from_examples(std::span<const LabeledExample> examples);

// Frequency matrix E^T B: row j is the sum of embeddings labelled with
// class j. `labels` is N x C, `embeddings` is N x D.
Mat fm_init(const Mat& labels, const Mat& embeddings);
Mat fm_init(std::span<const Dataset2Pair> pairs);

struct DiscriminatorOutput {
  EmotionVector raw{};       // cosine against each prototype
  EmotionVector forecast{};  // normalize_forecast(raw)
};

DiscriminatorOutput discriminator_forward(const Discriminator& disc, std::span<const double> x);

// Seeded shuffle of 0..n-1; the first floor(fraction * n) indices train.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
Split split_indices(std::size_t n, double fraction, std::uint64_t seed);

struct DiscriminatorTraining {
  std::vector<double> train_loss;  // after each epoch
  std::vector<double> test_loss;
  double train_accuracy = 0.0;  // top-2 overlap on the final model
  double test_accuracy = 0.0;
  Split split;
};

// Mean cosine loss of raw scores against V1 over the given pairs. Pairs with
// an all-zero V1 carry no direction and are skipped.
double discriminator_loss(const Discriminator& disc, std::span<const Dataset2Pair> pairs,
                          std::span<const std::size_t> indices);

// Fraction of pairs (non-zero V1) whose top-2 classes intersect V1.
double discriminator_overlap_accuracy(const Discriminator& disc,
                                      std::span<const Dataset2Pair> pairs,
                                      std::span<const std::size_t> indices);

// Trains prototypes in place with cosine loss on the raw cosine scores.
DiscriminatorTraining train_discriminator(Discriminator& disc, const Dataset2& dataset2,
                                          const TrainConfig& cfg);

struct FinetuneHistory {
  std::vector<double> generator_loss;      // one entry per round
  std::vector<double> discriminator_loss;  // final train loss per round
};

// Each round regenerates Dataset_2, retrains the discriminator on it and
// fine-tunes the generator on dataset1 for one epoch.
FinetuneHistory joint_finetune(Generator& gen, Discriminator& disc,
                               std::span<const LabeledExample> dataset1,
                               const TrainConfig& gen_cfg, const TrainConfig& disc_cfg,
                               int rounds);

}  // namespace emogan
