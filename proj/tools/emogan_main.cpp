// emogan: command-line driver for the emotion pipeline.
//
//   emogan synth           --seed S --combos data/observed_combinations.csv --out synth.jsonl
//   emogan vectorize       --dictionary dict.json --corpus corpus.jsonl --out dataset.jsonl
//   emogan find-collisions --dataset dataset.jsonl --output-dir out
//   emogan train           --dataset filtered.jsonl --seed S --output-dir out
//   emogan evaluate        --model out/model.json --dataset golden.jsonl --output-dir eval
//   emogan predict         --model out/model.json --input inputs.jsonl [--table]
//   emogan pipeline        (--corpus ... --dictionary ... | --dataset ...) --seed S
//
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "emogan/dataset_io.hpp"
#include "emogan/error.hpp"
#include "emogan/pipeline.hpp"
#include "emogan/synth.hpp"

namespace fs = std::filesystem;
using namespace emogan;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

// Flags shared by most subcommands. Every field is optional so that a JSON
// config can supply the value and an explicit flag overrides it.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::size_t> dim;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> dictionary, corpus, dataset, embeddings, output_dir;
  bool keep_zero_label = false;
  std::optional<int> k;
  std::optional<double> tau;
  std::optional<int> gen_epochs, disc_epochs, finetune_rounds;
  std::optional<double> gen_lr, disc_lr, split;
  std::optional<std::size_t> batch_size;
};

void add_config(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file; flags override its values");
}
void add_dim(CLI::App* cmd, Flags& f) {
  cmd->add_option("--D,--dim", f.dim, "Embedding dimension (default 512)");
}
void add_seed(CLI::App* cmd, Flags& f, const char* help) {
  cmd->add_option("--seed", f.seed, help);
}
void add_output_dir(CLI::App* cmd, Flags& f) {
  cmd->add_option("--output-dir", f.output_dir, "Directory for outputs (default ./out)");
}
void add_vectorize_inputs(CLI::App* cmd, Flags& f) {
  cmd->add_option("--dictionary", f.dictionary, "Emoticon dictionary (JSON)");
  cmd->add_option("--corpus", f.corpus, "Corpus (JSON-lines {\"text\": ...})");
  cmd->add_option("--embeddings", f.embeddings,
                  "Precomputed embeddings (JSON-lines {\"text\", \"embedding\"}); "
                  "a seeded stub embedder is used when omitted");
  cmd->add_flag("--keep-zero-label", f.keep_zero_label,
                "Keep sentences without any emoticon as all-zero examples");
}
void add_collision_params(CLI::App* cmd, Flags& f) {
  cmd->add_option("--k", f.k, "Allowed number of dominant classes per cluster (default 2)");
  cmd->add_option("--tau", f.tau, "Cosine clustering threshold (default 0.995)");
}
void add_train_params(CLI::App* cmd, Flags& f) {
  cmd->add_option("--gen-epochs", f.gen_epochs, "Generator epochs (default 10)");
  cmd->add_option("--disc-epochs", f.disc_epochs, "Discriminator epochs (default 50)");
  cmd->add_option("--gen-lr", f.gen_lr, "Generator Adam learning rate (default 1e-3)");
  cmd->add_option("--disc-lr", f.disc_lr, "Discriminator Adam learning rate (default 1e-3)");
  cmd->add_option("--batch-size", f.batch_size, "Minibatch size, 0 = full batch (default 16)");
  cmd->add_option("--split", f.split, "Train fraction for both splits (default 0.7)");
  cmd->add_option("--finetune-rounds", f.finetune_rounds,
                  "Joint generator/discriminator rounds (default 0)");
}

PipelineConfig resolve(const Flags& f) {
  PipelineConfig cfg;
  if (f.config) cfg = load_pipeline_config(*f.config);
  if (f.dim) cfg.dim = *f.dim;
  if (f.seed) cfg.seed = *f.seed;
  if (f.dictionary) cfg.dictionary = *f.dictionary;
  if (f.corpus) cfg.corpus = *f.corpus;
  if (f.dataset) cfg.dataset = *f.dataset;
  if (f.embeddings) cfg.embeddings = *f.embeddings;
  if (f.output_dir) cfg.output_dir = *f.output_dir;
  if (f.keep_zero_label) cfg.keep_zero_label = true;
  if (f.k) cfg.collisions.k = *f.k;
  if (f.tau) cfg.collisions.tau = *f.tau;
  if (f.gen_epochs) cfg.generator.epochs = *f.gen_epochs;
  if (f.disc_epochs) cfg.discriminator.epochs = *f.disc_epochs;
  if (f.gen_lr) cfg.generator.adam.lr = *f.gen_lr;
  if (f.disc_lr) cfg.discriminator.adam.lr = *f.disc_lr;
  if (f.batch_size) {
    cfg.generator.batch_size = *f.batch_size;
    cfg.discriminator.batch_size = *f.batch_size;
  }
  if (f.split) {
    cfg.generator.split_fraction = *f.split;
    cfg.discriminator.split_fraction = *f.split;
  }
  if (f.finetune_rounds) cfg.discriminator.finetune_rounds = *f.finetune_rounds;
  if (cfg.dim == 0) throw UsageError("D must be >= 1");
  cfg.collisions.validate();
  cfg.generator.validate();
  cfg.discriminator.validate();
  return cfg;
}

fs::path require_path(const fs::path& p, const char* flag) {
  if (p.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::exists(p)) throw UsageError(std::string(flag) + ": no such file " + p.string());
  return p;
}

void print_train_summary(const TrainResult& r, const fs::path& dir) {
  std::printf("generator: %zu epochs, loss %.6g -> %.6g\n", r.generator_loss.size(),
              r.generator_loss.empty() ? 0.0 : r.generator_loss.front(),
              r.generator_loss.empty() ? 0.0 : r.generator_loss.back());
  std::printf("dataset2: %zu pairs; discriminator split %zu/%zu\n", r.dataset2.size(),
              r.discriminator.split.train.size(), r.discriminator.split.test.size());
  std::printf("golden split: %zu train / %zu held out (%zu evaluated, %zu excluded)\n",
              r.golden_split.train.size(), r.golden_split.test.size(), r.report.evaluated,
              r.report.excluded);
  std::printf("top-2 hit rate %.4f, mean class accuracy %.4f\n", r.report.overall_top2_hit_rate,
              r.report.mean_accuracy);
  std::printf("artifacts written to %s\n", dir.string().c_str());
}

int cmd_vectorize(const Flags& f, const std::optional<std::string>& out) {
  PipelineConfig cfg = resolve(f);
  require_path(cfg.dictionary, "--dictionary");
  require_path(cfg.corpus, "--corpus");
  const fs::path out_path = out ? fs::path(*out) : cfg.output_dir / artifacts::kDataset;
  const auto s = run_vectorize(cfg, out_path);
  std::printf("sentences %zu labelled %zu dropped %zu -> %s\n", s.sentences, s.labelled,
              s.dropped, out_path.string().c_str());
  return kOk;
}

int cmd_find_collisions(const Flags& f) {
  PipelineConfig cfg = resolve(f);
  require_path(cfg.dataset, "--dataset");
  const auto r = run_find_collisions(cfg, cfg.dataset);
  std::printf("examples %zu clusters %zu collision clusters %zu flagged examples %zu\n",
              r.examples.size(), r.clusters.size(), r.flagged_clusters, r.flagged_examples);
  return kOk;
}

int cmd_train(const Flags& f) {
  PipelineConfig cfg = resolve(f);
  if (!cfg.seed) throw UsageError("--seed is required for train");
  require_path(cfg.dataset, "--dataset");
  print_train_summary(run_train(cfg, cfg.dataset), cfg.output_dir);
  return kOk;
}

struct SynthFlags {
  std::optional<std::uint64_t> seed;
  std::size_t dim = 512;
  double sigma = 0.05;
  std::size_t per_combo = 20;
  std::optional<std::string> combos_file;
  bool all_combos = false;
  std::string out = "synthetic.jsonl";
};

int cmd_synth(const SynthFlags& s) {
  if (!s.seed) throw UsageError("--seed is required for synth");
  SyntheticSpec spec;
  spec.dim = s.dim;
  spec.noise_sigma = s.sigma;
  spec.examples_per_combo = s.per_combo;
  spec.seed = *s.seed;
  if (s.all_combos) {
    spec.combos = all_emotion_combinations();
  } else if (s.combos_file) {
    spec.combos = load_combinations_csv(require_path(*s.combos_file, "--combos"));
  } else {
    throw UsageError("give --combos FILE or --all-combos");
  }
  const auto data = synthesize(spec);
  write_dataset(s.out, data);
  std::printf("wrote %zu examples (%zu combos x %zu) to %s\n", data.size(), spec.combos.size(),
              spec.examples_per_combo, s.out.c_str());
  return kOk;
}

int cmd_evaluate(const Flags& f, const std::string& model) {
  PipelineConfig cfg = resolve(f);
  require_path(cfg.dataset, "--dataset");
  const auto report = run_evaluate(require_path(model, "--model"), cfg.dataset, cfg.output_dir);
  std::fputs(report_to_text(report).c_str(), stdout);
  return kOk;
}

int cmd_predict(const Flags& f, const std::string& model_path, const std::string& input,
                const std::optional<std::string>& out, bool table) {
  PipelineConfig cfg = resolve(f);
  const Model model = load_model(require_path(model_path, "--model"));
  const auto inputs = parse_predict_inputs(read_text_file(require_path(input, "--input")), input);

  std::unique_ptr<EmbeddingProvider> provider;
  if (!cfg.embeddings.empty()) {
    provider = std::make_unique<PrecomputedEmbedder>(PrecomputedEmbedder::load(cfg.embeddings));
  } else if (cfg.seed) {
    provider = stub_embedder(model.dim(), *cfg.seed);
  }
  const auto preds = predict(model, inputs, provider.get());

  std::string lines;
  for (const auto& p : preds) lines += prediction_line(p) + "\n";
  if (out) {
    write_text_file(*out, lines);
  } else {
    std::fputs(lines.c_str(), stdout);
  }
  if (table) std::fputs(predictions_to_table(preds).c_str(), out ? stdout : stderr);
  return kOk;
}

int cmd_pipeline(const Flags& f) {
  PipelineConfig cfg = resolve(f);
  if (!cfg.seed) throw UsageError("--seed is required for pipeline");
  fs::path dataset;
  if (!cfg.corpus.empty()) {
    require_path(cfg.dictionary, "--dictionary");
    require_path(cfg.corpus, "--corpus");
    dataset = cfg.output_dir / artifacts::kDataset;
    const auto s = run_vectorize(cfg, dataset);
    std::printf("vectorize: sentences %zu labelled %zu dropped %zu\n", s.sentences, s.labelled,
                s.dropped);
  } else {
    dataset = require_path(cfg.dataset, "--dataset or --corpus");
  }
  const auto c = run_find_collisions(cfg, dataset);
  std::printf("find-collisions: %zu of %zu examples flagged\n", c.flagged_examples,
              c.examples.size());
  print_train_summary(run_train(cfg, cfg.output_dir / artifacts::kFiltered), cfg.output_dir);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emotion recognition pipeline: emoticon labelling, collision purging, "
               "generator-balanced training and top-2 evaluation"};
  app.require_subcommand(1);

  Flags f;
  std::optional<std::string> vec_out;
  auto* vectorize = app.add_subcommand("vectorize", "Label a corpus with emoticons and embed it");
  add_config(vectorize, f);
  add_dim(vectorize, f);
  add_seed(vectorize, f, "Seed for the stub embedder");
  add_vectorize_inputs(vectorize, f);
  add_output_dir(vectorize, f);
  vectorize->add_option("--out", vec_out, "Dataset path (default OUTPUT_DIR/dataset.jsonl)");

  auto* collisions = app.add_subcommand("find-collisions", "Flag and remove label collisions");
  add_config(collisions, f);
  collisions->add_option("--dataset", f.dataset, "Dataset (JSON-lines)");
  add_collision_params(collisions, f);
  add_output_dir(collisions, f);

  auto* train = app.add_subcommand("train", "Train generator and discriminator, then evaluate");
  add_config(train, f);
  add_dim(train, f);
  add_seed(train, f, "Seed for every random choice (required)");
  train->add_option("--dataset", f.dataset, "Collision-free dataset (JSON-lines)");
  add_train_params(train, f);
  add_output_dir(train, f);

  SynthFlags sf;
  auto* synth = app.add_subcommand("synth", "Write a synthetic labelled dataset");
  synth->add_option("--seed", sf.seed, "Seed (required)");
  synth->add_option("--D,--dim", sf.dim, "Embedding dimension (>= 7)")->capture_default_str();
  synth->add_option("--sigma", sf.sigma, "Gaussian noise per component")->capture_default_str();
  synth->add_option("--per-combo", sf.per_combo, "Examples per combination")
      ->capture_default_str();
  synth->add_option("--combos", sf.combos_file, "CSV of emotion combinations");
  synth->add_flag("--all-combos", sf.all_combos, "Use all 128 combinations");
  synth->add_option("--out", sf.out, "Output dataset path")->capture_default_str();

  std::string eval_model;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Top-2 evaluation of a model on a dataset");
  add_config(evaluate_cmd, f);
  evaluate_cmd->add_option("--model", eval_model, "Model file")->required();
  evaluate_cmd->add_option("--dataset", f.dataset, "Golden dataset (JSON-lines)");
  add_output_dir(evaluate_cmd, f);

  std::string pred_model, pred_input;
  std::optional<std::string> pred_out;
  bool pred_table = false;
  auto* predict_cmd = app.add_subcommand("predict", "Forecast emotions for texts or embeddings");
  add_config(predict_cmd, f);
  predict_cmd->add_option("--model", pred_model, "Model file")->required();
  predict_cmd->add_option("--input", pred_input,
                          "JSON-lines with \"embedding\" and/or \"text\" (optional \"emotions\")")
      ->required();
  predict_cmd->add_option("--embeddings", f.embeddings, "Precomputed embeddings for texts");
  add_seed(predict_cmd, f, "Stub embedder seed for texts without embeddings");
  predict_cmd->add_option("--out", pred_out, "Write JSON-lines here instead of stdout");
  predict_cmd->add_flag("--table", pred_table, "Also print a table with top-2 marked *x*");

  auto* pipeline = app.add_subcommand("pipeline", "vectorize -> find-collisions -> train");
  add_config(pipeline, f);
  add_dim(pipeline, f);
  add_seed(pipeline, f, "Seed for every random choice (required)");
  add_vectorize_inputs(pipeline, f);
  pipeline->add_option("--dataset", f.dataset, "Start from an existing dataset instead");
  add_collision_params(pipeline, f);
  add_train_params(pipeline, f);
  add_output_dir(pipeline, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*vectorize) return cmd_vectorize(f, vec_out);
    if (*collisions) return cmd_find_collisions(f);
    if (*train) return cmd_train(f);
    if (*synth) return cmd_synth(sf);
    if (*evaluate_cmd) return cmd_evaluate(f, eval_model);
    if (*predict_cmd) return cmd_predict(f, pred_model, pred_input, pred_out, pred_table);
    if (*pipeline) return cmd_pipeline(f);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
