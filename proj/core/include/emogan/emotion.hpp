#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace emogan {

inline constexpr std::size_t kNumEmotions = 7;

// Fixed class order used by every vector in the project.
enum class Emotion : int {
  kFear = 0,
  kSadness,
  kAnger,
  kDisgust,
  kCalm,
  kHappiness,
  kSurprise,
};

inline constexpr std::array<std::string_view, kNumEmotions> kEmotionNames = {
    "fear", "sadness", "anger", "disgust", "calm", "happiness", "surprise"};

// 7 reals in the order above. Labels are binary multi-hot; forecasts lie on
// the simplex.
using EmotionVector = std::array<double, kNumEmotions>;

std::string_view emotion_name(std::size_t index);
std::optional<std::size_t> emotion_index(std::string_view name);

bool is_binary(const EmotionVector& v);
std::size_t active_count(const EmotionVector& v);

// "fear, sadness" style listing of the active classes.
std::string active_names(const EmotionVector& v);

}  // namespace emogan
