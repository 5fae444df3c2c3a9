#include "emogan/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "emogan/error.hpp"
#include "json.hpp"

namespace emogan {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

json names_of(const EmotionVector& v) {
  json out = json::array();
  for (std::size_t c = 0; c < kNumEmotions; ++c) {
    if (v[c] != 0.0) out.push_back(std::string(kEmotionNames[c]));
  }
  return out;
}

std::size_t index_of(const json& name) {
  const auto idx = emotion_index(name.get<std::string>());
  if (!idx) throw ParseError("unknown emotion name '" + name.get<std::string>() + "'");
  return *idx;
}

json record_json(const EvalRecord& r) {
  json j;
  j["text"] = r.text ? json(*r.text) : json(nullptr);
  j["gold"] = names_of(r.gold);
  j["forecast"] = r.forecast;
  j["top2"] = {std::string(kEmotionNames[r.top2.first]),
               std::string(kEmotionNames[r.top2.second])};
  json flags = json::array();
  for (std::size_t c = 0; c < kNumEmotions; ++c) flags.push_back(r.top2.contains(c));
  j["top2_flags"] = std::move(flags);
  j["correct"] = r.correct;
  return j;
}

EvalRecord record_from_json(const json& j) {
  EvalRecord r;
  if (!j.at("text").is_null()) r.text = j.at("text").get<std::string>();
  for (const auto& name : j.at("gold")) r.gold[index_of(name)] = 1.0;
  const auto f = j.at("forecast").get<std::vector<double>>();
  if (f.size() != kNumEmotions) throw ParseError("record forecast must have 7 values");
  std::copy(f.begin(), f.end(), r.forecast.begin());
  const auto& t = j.at("top2");
  r.top2.first = index_of(t.at(0));
  r.top2.second = index_of(t.at(1));
  r.top2.first_value = r.forecast[r.top2.first];
  r.top2.second_value = r.forecast[r.top2.second];
  r.correct = j.at("correct").get<bool>();
  return r;
}

}  // namespace

Top2 top2(std::span<const double> forecast) {
  if (forecast.size() < 2) throw DimensionError("top2: need at least two values");
  Top2 t;
  t.first = 0;
  for (std::size_t i = 1; i < forecast.size(); ++i) {
    if (forecast[i] > forecast[t.first]) t.first = i;
  }
  t.second = t.first == 0 ? 1 : 0;
  for (std::size_t i = 0; i < forecast.size(); ++i) {
    if (i == t.first) continue;
    if (forecast[i] > forecast[t.second]) t.second = i;
  }
  t.first_value = forecast[t.first];
  t.second_value = forecast[t.second];
  return t;
}

bool example_correct(const Top2& pred, const EmotionVector& gold) {
  const std::size_t n = active_count(gold);
  if (n == 0 || n > 2) {
    throw ProtocolError("gold label must name one or two emotions, got " + std::to_string(n));
  }
  return gold[pred.first] != 0.0 || gold[pred.second] != 0.0;
}

EvalRecord make_record(const EmotionVector& forecast, const EmotionVector& gold,
                       std::optional<std::string> text) {
  EvalRecord r;
  r.text = std::move(text);
  r.gold = gold;
  r.forecast = forecast;
  r.top2 = top2(forecast);
  r.correct = example_correct(r.top2, gold);
  return r;
}

ClassAccuracy per_class_accuracy(std::span<const EvalRecord> records) {
  if (records.empty()) throw EmptyInputError("per_class_accuracy: no records");
  std::array<std::size_t, kNumEmotions> hits{};
  ClassAccuracy out;
  for (const auto& r : records) {
    for (std::size_t c = 0; c < kNumEmotions; ++c) {
      if (r.gold[c] == 0.0) continue;
      ++out.support[c];
      if (r.top2.contains(c)) ++hits[c];
    }
  }
  double sum = 0.0;
  std::size_t classes = 0;
  for (std::size_t c = 0; c < kNumEmotions; ++c) {
    if (out.support[c] == 0) continue;
    const double acc = static_cast<double>(hits[c]) / static_cast<double>(out.support[c]);
    out.per_class[c] = acc;
    sum += acc;
    ++classes;
  }
  out.mean = classes == 0 ? 0.0 : sum / static_cast<double>(classes);
  return out;
}

ClassMatrix prediction_matrix(std::span<const EvalRecord> records) {
  ClassMatrix m{};
  for (const auto& r : records) {
    for (std::size_t g = 0; g < kNumEmotions; ++g) {
      if (r.gold[g] == 0.0) continue;
      ++m[g][r.top2.first];
      ++m[g][r.top2.second];
    }
  }
  return m;
}

EvalReport build_report(std::vector<EvalRecord> records, std::size_t excluded) {
  EvalReport report;
  const auto acc = per_class_accuracy(records);
  report.per_class_accuracy = acc.per_class;
  report.support = acc.support;
  report.mean_accuracy = acc.mean;
  report.prediction_matrix = prediction_matrix(records);
  const auto hits = std::count_if(records.begin(), records.end(),
                                  [](const EvalRecord& r) { return r.correct; });
  report.overall_top2_hit_rate =
      static_cast<double>(hits) / static_cast<double>(records.size());
  report.evaluated = records.size();
  report.excluded = excluded;
  report.records = std::move(records);
  return report;
}

EvalReport evaluate(const Discriminator& disc, std::span<const LabeledExample> golden) {
  std::vector<EvalRecord> records;
  std::size_t excluded = 0;
  for (const auto& ex : golden) {
    const std::size_t n = active_count(ex.emotions);
    if (n == 0 || n > 2) {
      ++excluded;
      continue;
    }
    const auto out = discriminator_forward(disc, ex.embedding);
    records.push_back(make_record(out.forecast, ex.emotions, ex.text));
  }
  if (records.empty()) {
    throw EmptyInputError("evaluate: no golden examples with one or two emotions");
  }
  return build_report(std::move(records), excluded);
}

std::string report_to_json(const EvalReport& report) {
  json j;
  json per_class = json::array();
  for (std::size_t c = 0; c < kNumEmotions; ++c) {
    json row;
    row["emotion"] = std::string(kEmotionNames[c]);
    row["accuracy"] =
        report.per_class_accuracy[c] ? json(*report.per_class_accuracy[c]) : json(nullptr);
    row["support"] = report.support[c];
    per_class.push_back(std::move(row));
  }
  j["per_class"] = std::move(per_class);
  j["mean_accuracy"] = report.mean_accuracy;
  j["overall_top2_hit_rate"] = report.overall_top2_hit_rate;
  j["evaluated"] = report.evaluated;
  j["excluded"] = report.excluded;
  j["prediction_matrix"] = report.prediction_matrix;
  json records = json::array();
  for (const auto& r : report.records) records.push_back(record_json(r));
  j["records"] = std::move(records);
  return j.dump(2) + "\n";
}

EvalReport report_from_json(std::string_view json_text) {
  EvalReport report;
  try {
    const json j = json::parse(json_text);
    const auto& per_class = j.at("per_class");
    if (per_class.size() != kNumEmotions) throw ParseError("report: per_class needs 7 rows");
    for (std::size_t c = 0; c < kNumEmotions; ++c) {
      const auto& row = per_class.at(c);
      if (!row.at("accuracy").is_null()) {
        report.per_class_accuracy[c] = row.at("accuracy").get<double>();
      }
      report.support[c] = row.at("support").get<std::size_t>();
    }
    report.mean_accuracy = j.at("mean_accuracy").get<double>();
    report.overall_top2_hit_rate = j.at("overall_top2_hit_rate").get<double>();
    report.evaluated = j.at("evaluated").get<std::size_t>();
    report.excluded = j.at("excluded").get<std::size_t>();
    report.prediction_matrix = j.at("prediction_matrix").get<ClassMatrix>();
    for (const auto& r : j.at("records")) report.records.push_back(record_from_json(r));
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return report;
}

std::string report_to_text(const EvalReport& report) {
  constexpr std::size_t kNameWidth = 12;
  std::string out;
  out += pad_right("Emotion", kNameWidth) + "Accuracy\n";
  for (std::size_t c = 0; c < kNumEmotions; ++c) {
    const auto& acc = report.per_class_accuracy[c];
    out += pad_right(std::string(kEmotionNames[c]), kNameWidth) +
           (acc ? fixed(*acc, 2) : std::string("n/a")) + "\n";
  }
  out += pad_right("MEAN", kNameWidth) + fixed(report.mean_accuracy, 2) + "\n";
  out += "\n";
  out += "Top-2 hit rate: " + fixed(report.overall_top2_hit_rate, 4) + " (" +
         std::to_string(report.evaluated) + " evaluated, " + std::to_string(report.excluded) +
         " excluded)\n";
  out += "\n";
  out += "Prediction matrix (rows: gold, columns: predicted top-2)\n";
  constexpr std::size_t kCell = 10;
  out += pad_right("", kNameWidth);
  for (auto name : kEmotionNames) out += pad_left(std::string(name), kCell);
  out += "\n";
  for (std::size_t g = 0; g < kNumEmotions; ++g) {
    out += pad_right(std::string(kEmotionNames[g]), kNameWidth);
    for (std::size_t p = 0; p < kNumEmotions; ++p) {
      out += pad_left(std::to_string(report.prediction_matrix[g][p]), kCell);
    }
    out += "\n";
  }
  return out;
}

std::string record_line(const EvalRecord& record) { return record_json(record).dump(); }

std::string records_to_jsonl(std::span<const EvalRecord> records) {
  std::string out;
  for (const auto& r : records) out += record_line(r) + "\n";
  return out;
}

std::string records_to_table(std::span<const EvalRecord> records) {
  constexpr std::size_t kText = 40;
  constexpr std::size_t kGold = 22;
  constexpr std::size_t kCell = 11;
  std::string out = pad_right("#", 5) + pad_right("sentence", kText) + pad_right("gold", kGold);
  for (auto name : kEmotionNames) out += pad_left(std::string(name), kCell);
  out += "\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::string text = r.text.value_or("");
    if (text.size() > kText - 2) text = text.substr(0, kText - 5) + "...";
    std::string gold = active_names(r.gold);
    if (gold.empty()) gold = "-";
    out += pad_right(std::to_string(i + 1), 5) + pad_right(text, kText) + pad_right(gold, kGold);
    for (std::size_t c = 0; c < kNumEmotions; ++c) {
      std::string v = fixed(r.forecast[c], 2);
      if (r.top2.contains(c)) v = "*" + v + "*";
      out += pad_left(v, kCell);
    }
    out += "\n";
  }
  return out;
}

}  // namespace emogan
