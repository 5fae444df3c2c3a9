#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emogan/collisions.hpp"
#include "emogan/emotext.hpp"
#include "emogan/eval.hpp"
#include "emogan/gan.hpp"
#include "emogan/model_io.hpp"

namespace emogan {

// Everything a pipeline run needs. Paths are optional; each stage checks
// the ones it uses.
struct PipelineConfig {
  std::size_t dim = kDefaultEmbeddingDim;
  std::optional<std::uint64_t> seed;
  std::filesystem::path dictionary;
  std::filesystem::path corpus;
  std::filesystem::path dataset;
  std::filesystem::path embeddings;  // precomputed provider; stub embedder when empty
  std::filesystem::path output_dir = "out";
  bool keep_zero_label = false;
  CollisionParams collisions;
  TrainConfig generator = default_generator_config();
  TrainConfig discriminator = default_discriminator_config();
};

// Overlays a JSON config object onto base. Recognized keys: D, seed,
// dictionary, corpus, dataset, embeddings, output_dir, keep_zero_label,
// collisions{k,tau}, generator{...}, discriminator{...} where the training
// blocks accept epochs, lr, beta1, beta2, eps, batch_size, split_fraction,
// finetune_rounds. Unknown keys are rejected.
PipelineConfig parse_pipeline_config(std::string_view json_text, PipelineConfig base = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path, PipelineConfig base = {});

// Fixed names inside the output directory.
namespace artifacts {
inline constexpr const char* kDataset = "dataset.jsonl";
inline constexpr const char* kFlagged = "flagged.jsonl";
inline constexpr const char* kFiltered = "filtered.jsonl";
inline constexpr const char* kCollisionReport = "collisions.json";
inline constexpr const char* kDataset2 = "dataset2.jsonl";
inline constexpr const char* kModel = "model.json";
inline constexpr const char* kCurves = "curves.json";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kReportText = "report.txt";
inline constexpr const char* kRecords = "records.jsonl";
}  // namespace artifacts

struct TrainResult {
  Model model;
  Dataset2 dataset2;
  std::vector<double> generator_loss;
  GeneratorAccuracy generator_train_accuracy;
  GeneratorAccuracy generator_test_accuracy;
  DiscriminatorTraining discriminator;
  FinetuneHistory finetune;
  Split golden_split;  // indices into dataset1
  EvalReport report;
};

// Generator on the training share of dataset1 -> Dataset_2 -> FM-initialized
// discriminator -> optional joint rounds -> evaluation on the held-out
// share. The stage seeds are derived from `seed`.
TrainResult train_pipeline(std::span<const LabeledExample> dataset1, std::uint64_t seed,
                           TrainConfig generator_cfg, TrainConfig discriminator_cfg);

std::string collision_report_json(const CollisionResult& result, const CollisionParams& params);
std::string curves_json(const TrainResult& result);

struct VectorizeSummary {
  std::size_t sentences = 0;
  std::size_t labelled = 0;
  std::size_t dropped = 0;
};

// Stage runners used by the CLI. Each reads its inputs from cfg, writes its
// fixed-name outputs into cfg.output_dir, and returns a summary.
VectorizeSummary run_vectorize(const PipelineConfig& cfg,
                               const std::filesystem::path& out_path);
CollisionResult run_find_collisions(const PipelineConfig& cfg,
                                    const std::filesystem::path& dataset_path);
TrainResult run_train(const PipelineConfig& cfg, const std::filesystem::path& dataset_path);
EvalReport run_evaluate(const std::filesystem::path& model_path,
                        const std::filesystem::path& dataset_path,
                        const std::filesystem::path& output_dir);

struct PredictInput {
  std::optional<std::string> text;
  std::optional<Vec> embedding;
  std::optional<EmotionVector> gold;
};

// JSON-lines: each object carries "embedding" and/or "text", and optionally
// binary "emotions" as the gold label.
std::vector<PredictInput> parse_predict_inputs(std::string_view jsonl,
                                               std::string_view source = "input");

struct Prediction {
  std::optional<std::string> text;
  EmotionVector raw{};
  EmotionVector forecast{};
  Top2 top2;
  std::optional<EmotionVector> gold;
  std::optional<bool> correct;  // set when gold has one or two classes
};

// Inputs without an embedding are embedded by `provider`; a null provider
// makes that a DataError.
std::vector<Prediction> predict(const Model& model, std::span<const PredictInput> inputs,
                                const EmbeddingProvider* provider);

std::string prediction_line(const Prediction& p);
std::string predictions_to_table(std::span<const Prediction> predictions);

void write_report(const std::filesystem::path& output_dir, const EvalReport& report);

}  // namespace emogan
