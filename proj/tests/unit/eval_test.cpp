#include <random>

#include "doctest.h"
#include "emogan/error.hpp"
#include "emogan/eval.hpp"

using namespace emogan;

namespace {

constexpr std::size_t kFear = 0, kSadness = 1, kAnger = 2, kDisgust = 3, kCalm = 4, kHappiness = 5;

EmotionVector gold_of(std::initializer_list<std::size_t> classes) {
  EmotionVector v{};
  for (auto c : classes) v[c] = 1.0;
  return v;
}

Top2 pred(std::size_t a, std::size_t b) { return Top2{a, b, 0.0, 0.0}; }

}  // namespace

TEST_CASE("top2") {
  const Vec row{0.49, 0.12, 0.17, 0.13, 0.00, 0.00, 0.09};
  const auto t = top2(row);
  CHECK(t.first == kFear);
  CHECK(t.second == kAnger);
  CHECK(t.first_value == 0.49);
  CHECK(t.second_value == 0.17);

  CHECK(top2(Vec{0.5, 0.5, 0, 0, 0, 0, 0}).first == 0);
  CHECK(top2(Vec{0.5, 0.5, 0, 0, 0, 0, 0}).second == 1);
  CHECK(top2(Vec(7, 0.0)).first == 0);
  CHECK(top2(Vec(7, 0.0)).second == 1);
  CHECK(top2(Vec{0, 0, 0.3, 0, 0, 0, 0.3}).first == 2);
  CHECK(top2(Vec{0, 0, 0.3, 0, 0, 0, 0.3}).second == 6);
  CHECK_THROWS_AS(top2(Vec{1.0}), DimensionError);

  SUBCASE("unchanged by monotone transforms and normalization") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
      Vec v(7), w(7);
      for (double& x : v) x = g(rng);
      for (std::size_t j = 0; j < 7; ++j) w[j] = std::exp(3.0 * v[j]) - 2.0;
      const auto a = top2(v);
      CHECK(top2(w).first == a.first);
      CHECK(top2(w).second == a.second);
      CHECK(top2(normalize_forecast(v)).first == a.first);
      CHECK(top2(normalize_forecast(v)).second == a.second);
    }
  }
}

TEST_CASE("example_correct") {
  const Vec row{0.49, 0.12, 0.17, 0.13, 0.00, 0.00, 0.09};
  CHECK(example_correct(top2(row), gold_of({kFear, kSadness})));
  CHECK_FALSE(example_correct(pred(kCalm, kHappiness), gold_of({kAnger})));
  CHECK(example_correct(pred(kAnger, kDisgust), gold_of({kDisgust, kAnger})));
  CHECK(example_correct(pred(kDisgust, kAnger), gold_of({kAnger})) ==
        example_correct(pred(kAnger, kDisgust), gold_of({kAnger})));
  CHECK_THROWS_AS(example_correct(pred(0, 1), gold_of({})), ProtocolError);
  CHECK_THROWS_AS(example_correct(pred(0, 1), gold_of({0, 1, 2})), ProtocolError);
}

TEST_CASE("per_class_accuracy") {
  SUBCASE("perfect predictions") {
    std::vector<EvalRecord> recs;
    recs.push_back(make_record({0.9, 0.1, 0, 0, 0, 0, 0}, gold_of({kFear, kSadness})));
    recs.push_back(make_record({0, 0, 0, 0, 0, 0.9, 0.5}, gold_of({kHappiness})));
    const auto a = per_class_accuracy(recs);
    CHECK(*a.per_class[kFear] == 1.0);
    CHECK(*a.per_class[kSadness] == 1.0);
    CHECK(*a.per_class[kHappiness] == 1.0);
    CHECK_FALSE(a.per_class[kCalm].has_value());
    CHECK(a.mean == 1.0);
  }
  SUBCASE("two fear examples, one hit") {
    std::vector<EvalRecord> recs;
    recs.push_back(make_record({0.9, 0.5, 0, 0, 0, 0, 0}, gold_of({kFear})));
    recs.push_back(make_record({0, 0, 0.9, 0.5, 0, 0, 0}, gold_of({kFear})));
    const auto a = per_class_accuracy(recs);
    CHECK(*a.per_class[kFear] == 0.5);
    CHECK(a.support[kFear] == 2);
    CHECK(a.mean == 0.5);
  }
  CHECK_THROWS_AS(per_class_accuracy(std::vector<EvalRecord>{}), EmptyInputError);
}

TEST_CASE("prediction_matrix") {
  const std::vector recs{make_record({0.49, 0.12, 0.17, 0.13, 0, 0, 0.09}, gold_of({kFear}))};
  const auto m = prediction_matrix(recs);
  CHECK(m[kFear][kFear] == 1);
  CHECK(m[kFear][kAnger] == 1);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> cls(0, 6);
  std::vector<EvalRecord> many;
  std::size_t expected = 0;
  for (int i = 0; i < 300; ++i) {
    EmotionVector f;
    for (double& x : f) x = u(rng);
    const auto a = cls(rng), b = cls(rng);
    const auto g = gold_of({a, b});
    expected += 2 * static_cast<std::size_t>(active_count(g));
    many.push_back(make_record(f, g));
  }
  std::size_t total = 0;
  for (const auto& row : prediction_matrix(many))
    for (auto c : row) total += c;
  CHECK(total == expected);

  SUBCASE("perfect single-label predictor is diagonal dominant") {
    std::vector<EvalRecord> recs2;
    for (std::size_t c = 0; c < 7; ++c) {
      EmotionVector f{};
      f[c] = 1.0;
      f[(c + 1) % 7] = 0.2;
      for (int r = 0; r < 3; ++r) recs2.push_back(make_record(f, gold_of({c})));
    }
    const auto pm = prediction_matrix(recs2);
    for (std::size_t g = 0; g < 7; ++g)
      for (std::size_t p = 0; p < 7; ++p)
        if (p != g) CHECK(pm[g][g] >= pm[g][p]);
  }
}

TEST_CASE("evaluate and report serialization") {
  Discriminator disc(Mat::identity(7));
  std::vector<LabeledExample> golden;
  auto add = [&](Vec e, EmotionVector g, const char* text) {
    LabeledExample ex;
    ex.embedding = std::move(e);
    ex.emotions = g;
    ex.text = text;
    golden.push_back(ex);
  };
  add({1, 0.2, 0, 0, 0, 0, 0}, gold_of({kFear}), "afraid");
  add({0, 0, 0, 0, 1, 0.5, 0}, gold_of({kCalm, kHappiness}), "relaxed");
  add({0, 0, 1, 0, 0, 0, 0.4}, gold_of({kSadness}), "miss");
  add({0, 0, 1, 0, 0, 0, 0}, gold_of({}), "no gold");
  add({0, 0, 1, 0, 0, 0, 0}, gold_of({0, 1, 2}), "three");

  const auto r = evaluate(disc, golden);
  CHECK(r.evaluated == 3);
  CHECK(r.excluded == 2);
  CHECK(r.overall_top2_hit_rate == doctest::Approx(2.0 / 3.0));
  CHECK(*r.per_class_accuracy[kFear] == 1.0);
  CHECK(*r.per_class_accuracy[kSadness] == 0.0);
  CHECK_FALSE(r.per_class_accuracy[kAnger].has_value());
  CHECK(r.mean_accuracy == doctest::Approx(3.0 / 4.0));

  CHECK(report_from_json(report_to_json(r)) == r);
  CHECK(report_to_json(report_from_json(report_to_json(r))) == report_to_json(r));

  const auto text = report_to_text(r);
  CHECK(text.find("Emotion     Accuracy\nfear        1.00\n") == 0);
  CHECK(text.find("anger       n/a\n") != std::string::npos);
  CHECK(text.find("MEAN        0.75\n") != std::string::npos);

  const auto table = records_to_table(r.records);
  CHECK(table.find("*") != std::string::npos);
  CHECK(records_to_jsonl(r.records).find("\"correct\":true") != std::string::npos);

  CHECK_THROWS_AS(evaluate(disc, std::vector<LabeledExample>{golden[3]}), EmptyInputError);
}
