#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emogan/emotext.hpp"
#include "emogan/gan.hpp"

namespace emogan {

// The two largest forecast components; ties go to the lower index.
struct Top2 {
  std::size_t first = 0;
  std::size_t second = 1;
  double first_value = 0.0;
  double second_value = 0.0;

  bool contains(std::size_t c) const { return first == c || second == c; }

  bool operator==(const Top2&) const = default;
};

Top2 top2(std::span<const double> forecast);

// True iff either predicted class is active in gold. Gold must have one or
// two active classes; anything else throws ProtocolError.
bool example_correct(const Top2& pred, const EmotionVector& gold);

struct EvalRecord {
  std::optional<std::string> text;
  EmotionVector gold{};
  EmotionVector forecast{};
  Top2 top2;
  bool correct = false;

  bool operator==(const EvalRecord&) const = default;
};

EvalRecord make_record(const EmotionVector& forecast, const EmotionVector& gold,
                       std::optional<std::string> text = {});

using ClassMatrix = std::array<std::array<std::size_t, kNumEmotions>, kNumEmotions>;

struct EvalReport {
  // Empty optional for a class with no gold support.
  std::array<std::optional<double>, kNumEmotions> per_class_accuracy{};
  std::array<std::size_t, kNumEmotions> support{};
  double mean_accuracy = 0.0;
  double overall_top2_hit_rate = 0.0;
  ClassMatrix prediction_matrix{};  // [gold][predicted]
  std::size_t evaluated = 0;
  std::size_t excluded = 0;  // gold with 0 or >2 classes, skipped by evaluate()
  std::vector<EvalRecord> records;

  bool operator==(const EvalReport&) const = default;
};

struct ClassAccuracy {
  std::array<std::optional<double>, kNumEmotions> per_class{};
  std::array<std::size_t, kNumEmotions> support{};
  double mean = 0.0;
};

// accuracy(c) = share of records with c in gold whose top-2 contains c;
// mean over classes with support. Throws EmptyInputError on no records.
ClassAccuracy per_class_accuracy(std::span<const EvalRecord> records);

// cell (g, p) += 1 for every gold class g and each of the two predicted p.
ClassMatrix prediction_matrix(std::span<const EvalRecord> records);

EvalReport build_report(std::vector<EvalRecord> records, std::size_t excluded = 0);

// Scores every example whose gold label has one or two classes; the rest
// are counted in EvalReport::excluded.
EvalReport evaluate(const Discriminator& disc, std::span<const LabeledExample> golden);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view json_text);

// Accuracy table (7 classes + MEAN) followed by the 7x7 prediction matrix.
std::string report_to_text(const EvalReport& report);

// One JSON object per record: text, gold, forecast, top-2 flags, correct.
std::string record_line(const EvalRecord& record);
std::string records_to_jsonl(std::span<const EvalRecord> records);

// Prediction listing with the top-2 values wrapped in *asterisks*.
std::string records_to_table(std::span<const EvalRecord> records);

}  // namespace emogan
