#include "emogan/pipeline.hpp"

#include <memory>

#include "emogan/dataset_io.hpp"
#include "emogan/error.hpp"
#include "emogan/rng.hpp"
#include "json.hpp"

namespace emogan {

using nlohmann::json;

namespace {

std::uint64_t require_seed(const PipelineConfig& cfg) {
  if (!cfg.seed) throw UsageError("--seed is required");
  return *cfg.seed;
}

std::vector<LabeledExample> pick(std::span<const LabeledExample> all,
                                 std::span<const std::size_t> idx) {
  std::vector<LabeledExample> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(all[i]);
  return out;
}

void apply_train_config(const json& j, TrainConfig& c, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (key == "epochs") {
      c.epochs = value.get<int>();
    } else if (key == "lr") {
      c.adam.lr = value.get<double>();
    } else if (key == "beta1") {
      c.adam.beta1 = value.get<double>();
    } else if (key == "beta2") {
      c.adam.beta2 = value.get<double>();
    } else if (key == "eps") {
      c.adam.eps = value.get<double>();
    } else if (key == "batch_size") {
      c.batch_size = value.get<std::size_t>();
    } else if (key == "split_fraction") {
      c.split_fraction = value.get<double>();
    } else if (key == "finetune_rounds") {
      c.finetune_rounds = value.get<int>();
    } else {
      throw UsageError("config: unknown key '" + where + "." + key + "'");
    }
  }
}

}  // namespace

PipelineConfig parse_pipeline_config(std::string_view json_text, PipelineConfig cfg) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "D") {
        cfg.dim = value.get<std::size_t>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "dictionary") {
        cfg.dictionary = value.get<std::string>();
      } else if (key == "corpus") {
        cfg.corpus = value.get<std::string>();
      } else if (key == "dataset") {
        cfg.dataset = value.get<std::string>();
      } else if (key == "embeddings") {
        cfg.embeddings = value.get<std::string>();
      } else if (key == "output_dir") {
        cfg.output_dir = value.get<std::string>();
      } else if (key == "keep_zero_label") {
        cfg.keep_zero_label = value.get<bool>();
      } else if (key == "collisions") {
        for (const auto& [ck, cv] : value.items()) {
          if (ck == "k") {
            cfg.collisions.k = cv.get<int>();
          } else if (ck == "tau") {
            cfg.collisions.tau = cv.get<double>();
          } else {
            throw UsageError("config: unknown key 'collisions." + ck + "'");
          }
        }
      } else if (key == "generator") {
        apply_train_config(value, cfg.generator, "generator");
      } else if (key == "discriminator") {
        apply_train_config(value, cfg.discriminator, "discriminator");
      } else {
        throw UsageError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path, PipelineConfig base) {
  try {
    return parse_pipeline_config(read_text_file(path), std::move(base));
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

TrainResult train_pipeline(std::span<const LabeledExample> dataset1, std::uint64_t seed,
                           TrainConfig generator_cfg, TrainConfig discriminator_cfg) {
  generator_cfg.validate();
  discriminator_cfg.validate();
  if (dataset1.empty()) throw EmptyInputError("train: empty dataset");
  generator_cfg.seed = derive_seed(seed, "generator");
  discriminator_cfg.seed = derive_seed(seed, "discriminator");

  TrainResult result;
  result.golden_split =
      split_indices(dataset1.size(), generator_cfg.split_fraction, derive_seed(seed, "golden"));
  if (result.golden_split.train.empty() || result.golden_split.test.empty()) {
    throw EmptyInputError("train: dataset too small for a train/test split");
  }
  const auto train = pick(dataset1, result.golden_split.train);
  const auto golden = pick(dataset1, result.golden_split.test);

  auto gt = train_generator(train, generator_cfg);
  result.generator_loss = std::move(gt.epoch_loss);
  Generator gen = std::move(gt.generator);

  result.dataset2 = generate_dataset2(gen);
  Discriminator disc(fm_init(result.dataset2), discriminator_cfg.adam);
  result.discriminator = train_discriminator(disc, result.dataset2, discriminator_cfg);

  if (discriminator_cfg.finetune_rounds > 0) {
    result.finetune = joint_finetune(gen, disc, train, generator_cfg, discriminator_cfg,
                                     discriminator_cfg.finetune_rounds);
    result.dataset2 = generate_dataset2(gen);
  }

  result.generator_train_accuracy = generator_accuracy(gen, train);
  result.generator_test_accuracy = generator_accuracy(gen, golden);
  result.report = evaluate(disc, golden);
  result.model = Model{std::move(gen), std::move(disc), seed, generator_cfg, discriminator_cfg};
  return result;
}

std::string collision_report_json(const CollisionResult& result, const CollisionParams& params) {
  json j;
  j["k"] = params.k;
  j["tau"] = params.tau;
  j["examples"] = result.examples.size();
  j["clusters"] = result.clusters.size();
  j["flagged_clusters"] = result.flagged_clusters;
  j["flagged_examples"] = result.flagged_examples;
  json clusters = json::array();
  for (const auto& c : result.clusters) {
    clusters.push_back({{"id", c.id},
                        {"size", c.size},
                        {"class_sums", c.class_sums},
                        {"mean", c.mean},
                        {"Z", c.z},
                        {"collision", c.collision}});
  }
  j["cluster_report"] = std::move(clusters);
  return j.dump(2) + "\n";
}

std::string curves_json(const TrainResult& r) {
  json j;
  j["generator"] = {{"epoch_loss", r.generator_loss},
                    {"train_accuracy", r.generator_train_accuracy.fraction},
                    {"train_mean_cosine", r.generator_train_accuracy.mean_cosine},
                    {"test_accuracy", r.generator_test_accuracy.fraction},
                    {"test_mean_cosine", r.generator_test_accuracy.mean_cosine},
                    {"train_size", r.golden_split.train.size()},
                    {"test_size", r.golden_split.test.size()}};
  j["discriminator"] = {{"train_loss", r.discriminator.train_loss},
                        {"test_loss", r.discriminator.test_loss},
                        {"train_accuracy", r.discriminator.train_accuracy},
                        {"test_accuracy", r.discriminator.test_accuracy},
                        {"train_size", r.discriminator.split.train.size()},
                        {"test_size", r.discriminator.split.test.size()}};
  j["finetune"] = {{"generator_loss", r.finetune.generator_loss},
                   {"discriminator_loss", r.finetune.discriminator_loss}};
  return j.dump(2) + "\n";
}

VectorizeSummary run_vectorize(const PipelineConfig& cfg, const std::filesystem::path& out_path) {
  if (cfg.dictionary.empty()) throw UsageError("--dictionary is required");
  if (cfg.corpus.empty()) throw UsageError("--corpus is required");
  const auto dict = load_dictionary(cfg.dictionary);
  const auto texts = read_corpus(cfg.corpus);

  std::unique_ptr<EmbeddingProvider> provider;
  if (!cfg.embeddings.empty()) {
    provider = std::make_unique<PrecomputedEmbedder>(PrecomputedEmbedder::load(cfg.embeddings));
  } else {
    provider = stub_embedder(cfg.dim, cfg.seed.value_or(0));
  }
  if (provider->dim() != cfg.dim) {
    throw DimensionError("embedding provider has D=" + std::to_string(provider->dim()) +
                         " but config asks for D=" + std::to_string(cfg.dim));
  }
  auto res = vectorize_corpus(texts, dict, *provider, {cfg.keep_zero_label});
  write_dataset(out_path, res.examples);
  return {res.sentences, res.labelled, res.dropped};
}

CollisionResult run_find_collisions(const PipelineConfig& cfg,
                                    const std::filesystem::path& dataset_path) {
  cfg.collisions.validate();
  auto examples = read_dataset(dataset_path);
  auto result = mark_collisions(std::move(examples), cfg.collisions);
  const auto& dir = cfg.output_dir;
  write_dataset(dir / artifacts::kFlagged, result.examples);
  write_dataset(dir / artifacts::kFiltered, filter_collisions(result.examples));
  write_text_file(dir / artifacts::kCollisionReport,
                  collision_report_json(result, cfg.collisions));
  return result;
}

std::vector<PredictInput> parse_predict_inputs(std::string_view jsonl, std::string_view source) {
  std::vector<PredictInput> out;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    ++lineno;
    const auto line = jsonl.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = std::string(source) + ":" + std::to_string(lineno) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + "malformed JSON: " + e.what());
    }
    PredictInput in;
    try {
      if (j.contains("text") && !j["text"].is_null()) in.text = j["text"].get<std::string>();
      if (j.contains("embedding")) in.embedding = j["embedding"].get<Vec>();
      if (j.contains("emotions")) {
        const auto g = j["emotions"].get<std::vector<double>>();
        if (g.size() != kNumEmotions) throw ParseError(where + "\"emotions\" needs 7 entries");
        EmotionVector gold{};
        std::copy(g.begin(), g.end(), gold.begin());
        if (!is_binary(gold)) throw ParseError(where + "\"emotions\" entries must be 0 or 1");
        in.gold = gold;
      }
    } catch (const json::exception& e) {
      throw ParseError(where + e.what());
    }
    if (!in.text && !in.embedding) throw ParseError(where + "needs \"text\" or \"embedding\"");
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<Prediction> predict(const Model& model, std::span<const PredictInput> inputs,
                                const EmbeddingProvider* provider) {
  std::vector<Prediction> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    Vec x;
    if (in.embedding) {
      x = *in.embedding;
    } else if (provider != nullptr) {
      x = provider->embed(*in.text);
    } else {
      throw DataError("input " + std::to_string(i + 1) +
                      " has no embedding and no embedding provider is configured");
    }
    if (x.size() != model.dim()) {
      throw DimensionError("input " + std::to_string(i + 1) + " has length " +
                           std::to_string(x.size()) + ", model expects D=" +
                           std::to_string(model.dim()));
    }
    const auto fwd = discriminator_forward(model.discriminator, x);
    Prediction p;
    p.text = in.text;
    p.raw = fwd.raw;
    p.forecast = fwd.forecast;
    p.top2 = top2(fwd.forecast);
    p.gold = in.gold;
    if (in.gold) {
      const auto n = active_count(*in.gold);
      if (n == 1 || n == 2) p.correct = example_correct(p.top2, *in.gold);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string prediction_line(const Prediction& p) {
  json j;
  j["text"] = p.text ? json(*p.text) : json(nullptr);
  j["forecast"] = p.forecast;
  j["top2"] = {std::string(kEmotionNames[p.top2.first]),
               std::string(kEmotionNames[p.top2.second])};
  json flags = json::array();
  for (std::size_t c = 0; c < kNumEmotions; ++c) flags.push_back(p.top2.contains(c));
  j["top2_flags"] = std::move(flags);
  if (p.gold) {
    json gold = json::array();
    for (std::size_t c = 0; c < kNumEmotions; ++c) {
      if ((*p.gold)[c] != 0.0) gold.push_back(std::string(kEmotionNames[c]));
    }
    j["gold"] = std::move(gold);
  }
  if (p.correct) j["correct"] = *p.correct;
  return j.dump();
}

std::string predictions_to_table(std::span<const Prediction> predictions) {
  std::vector<EvalRecord> rows;
  rows.reserve(predictions.size());
  for (const auto& p : predictions) {
    EvalRecord r;
    r.text = p.text;
    r.gold = p.gold.value_or(EmotionVector{});
    r.forecast = p.forecast;
    r.top2 = p.top2;
    r.correct = p.correct.value_or(false);
    rows.push_back(std::move(r));
  }
  return records_to_table(rows);
}

void write_report(const std::filesystem::path& output_dir, const EvalReport& report) {
  write_text_file(output_dir / artifacts::kReport, report_to_json(report));
  write_text_file(output_dir / artifacts::kReportText, report_to_text(report));
  write_text_file(output_dir / artifacts::kRecords, records_to_jsonl(report.records));
}

TrainResult run_train(const PipelineConfig& cfg, const std::filesystem::path& dataset_path) {
  const std::uint64_t seed = require_seed(cfg);
  const auto dataset1 = filter_collisions(read_dataset(dataset_path, cfg.dim));
  auto result = train_pipeline(dataset1, seed, cfg.generator, cfg.discriminator);
  const auto& dir = cfg.output_dir;
  write_dataset(dir / artifacts::kDataset2, dataset2_examples(result.dataset2));
  save_model(dir / artifacts::kModel, result.model);
  write_text_file(dir / artifacts::kCurves, curves_json(result));
  write_report(dir, result.report);
  return result;
}

EvalReport run_evaluate(const std::filesystem::path& model_path,
                        const std::filesystem::path& dataset_path,
                        const std::filesystem::path& output_dir) {
  const Model model = load_model(model_path);
  const auto golden = read_dataset(dataset_path, model.dim());
  auto report = evaluate(model.discriminator, golden);
  write_report(output_dir, report);
  return report;
}

}  // namespace emogan
