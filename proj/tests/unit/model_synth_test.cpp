#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "emogan/dataset_io.hpp"
#include "emogan/error.hpp"
#include "emogan/model_io.hpp"
#include "emogan/pipeline.hpp"
#include "emogan/synth.hpp"

using namespace emogan;

TEST_CASE("model save -> load -> save is byte-identical") {
  Model m;
  m.generator = Generator::random(12, 3);
  m.discriminator = Discriminator(fm_init(generate_dataset2(m.generator)));
  m.seed = 0xFFFFFFFFFFFFFFFFull;
  m.generator_config.adam.lr = 0.0123;
  const auto text = model_to_json(m);
  const Model back = model_from_json(text);
  CHECK(model_to_json(back) == text);
  CHECK(back.generator.w2 == m.generator.w2);
  CHECK(back.discriminator.prototypes == m.discriminator.prototypes);
  CHECK(back.seed == m.seed);
  CHECK(back.generator_config == m.generator_config);

  const auto path = std::filesystem::temp_directory_path() / "emogan_model_test.json";
  save_model(path, m);
  CHECK(read_text_file(path) == text);
  CHECK(model_to_json(load_model(path)) == text);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(model_from_json("{\"format_version\":99}"), ParseError);
  CHECK_THROWS_AS(model_from_json("nope"), ParseError);
}

TEST_CASE("synthetic data") {
  SUBCASE("anchors are orthonormal") {
    const Mat a = make_anchors(64, 5);
    for (std::size_t i = 0; i < 7; ++i) {
      CHECK(norm(a.row(i)) == doctest::Approx(1.0).epsilon(1e-12));
      for (std::size_t j = i + 1; j < 7; ++j) CHECK(std::abs(dot(a.row(i), a.row(j))) < 1e-9);
    }
  }
  SUBCASE("noiseless single class is its anchor") {
    SyntheticSpec spec;
    spec.dim = 32;
    spec.noise_sigma = 0.0;
    spec.examples_per_combo = 2;
    spec.seed = 8;
    spec.combos = {{0, 0, 0, 0, 0, 0, 1}};
    const auto data = synthesize(spec);
    REQUIRE(data.size() == 2);
    const Mat a = make_anchors(32, 8);
    for (std::size_t d = 0; d < 32; ++d) CHECK(data[0].embedding[d] == a(6, d));
  }
  SUBCASE("fixture combos give rows x per_combo examples") {
    SyntheticSpec spec;
    spec.dim = 16;
    spec.examples_per_combo = 3;
    spec.seed = 1;
    spec.combos = load_combinations_csv(EMOGAN_DATA_DIR "/observed_combinations.csv");
    CHECK(synthesize(spec).size() == spec.combos.size() * 3);
    CHECK(synthesize(spec) == synthesize(spec));
  }
  SUBCASE("errors") {
    SyntheticSpec spec;
    spec.dim = 6;
    spec.combos = {{1, 0, 0, 0, 0, 0, 0}};
    CHECK_THROWS_AS(synthesize(spec), UsageError);
    spec.dim = 8;
    spec.combos.push_back(spec.combos.front());
    CHECK_THROWS_AS(synthesize(spec), UsageError);
    CHECK_THROWS_AS(parse_combinations_csv("a,b\n1,0\n"), ParseError);
  }
}

TEST_CASE("pipeline config") {
  const auto cfg = parse_pipeline_config(
      R"({"D": 64, "seed": 9, "collisions": {"k": 3, "tau": 0.9},
          "generator": {"epochs": 4, "lr": 0.01}, "discriminator": {"batch_size": 0}})");
  CHECK(cfg.dim == 64);
  CHECK(cfg.seed == 9u);
  CHECK(cfg.collisions.k == 3);
  CHECK(cfg.collisions.tau == 0.9);
  CHECK(cfg.generator.epochs == 4);
  CHECK(cfg.generator.adam.lr == 0.01);
  CHECK(cfg.discriminator.epochs == 50);
  CHECK(cfg.discriminator.batch_size == 0);

  const auto defaults = parse_pipeline_config("{}");
  CHECK(defaults.dim == 512);
  CHECK(defaults.collisions.k == 2);
  CHECK(defaults.collisions.tau == 0.995);
  CHECK(defaults.generator.epochs == 10);
  CHECK(defaults.discriminator.split_fraction == 0.7);
  CHECK_FALSE(defaults.seed.has_value());

  CHECK_THROWS_AS(parse_pipeline_config(R"({"bogus": 1})"), UsageError);
  CHECK_THROWS_AS(parse_pipeline_config(R"({"generator": {"epochz": 1}})"), UsageError);
}

TEST_CASE("predict on an overfit toy model") {
  // Prototypes equal to the anchors: every Dataset_2 pair built from them is
  // recovered with its active classes in the top 2.
  const Mat anchors = make_anchors(16, 2);
  Model m;
  m.generator = Generator::random(16, 1);
  m.discriminator = Discriminator(anchors);
  std::vector<PredictInput> inputs;
  for (const auto& v1 : all_emotion_combinations()) {
    if (active_count(v1) < 1 || active_count(v1) > 2) continue;
    Vec e(16, 0.0);
    for (std::size_t j = 0; j < 7; ++j)
      if (v1[j] != 0.0)
        for (std::size_t d = 0; d < 16; ++d) e[d] += anchors(j, d);
    inputs.push_back({std::nullopt, e, v1});
  }
  const auto preds = predict(m, inputs, nullptr);
  REQUIRE(preds.size() == 28);
  for (const auto& p : preds) {
    double sum = 0.0;
    for (double f : p.forecast) sum += f;
    CHECK(std::abs(sum - 1.0) < 1e-9);
    for (std::size_t j = 0; j < 7; ++j)
      if ((*p.gold)[j] != 0.0) CHECK(p.top2.contains(j));
    CHECK(p.top2 == top2(p.forecast));
    CHECK(*p.correct);
  }
  const auto table = predictions_to_table(preds);
  CHECK(table.find("*") != std::string::npos);

  PredictInput text_only{std::string("hello"), std::nullopt, std::nullopt};
  CHECK_THROWS_AS(predict(m, std::vector{text_only}, nullptr), DataError);
  PredictInput wrong_dim{std::nullopt, Vec(5, 1.0), std::nullopt};
  CHECK_THROWS_AS(predict(m, std::vector{wrong_dim}, nullptr), DimensionError);
}
