#include "emogan/emotion.hpp"

#include <algorithm>

#include "emogan/error.hpp"

namespace emogan {

std::string_view emotion_name(std::size_t index) {
  if (index >= kNumEmotions) throw UsageError("emotion index out of range");
  return kEmotionNames[index];
}

std::optional<std::size_t> emotion_index(std::string_view name) {
  const auto it = std::find(kEmotionNames.begin(), kEmotionNames.end(), name);
  if (it == kEmotionNames.end()) return std::nullopt;
  return static_cast<std::size_t>(it - kEmotionNames.begin());
}

bool is_binary(const EmotionVector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0 || x == 1.0; });
}

std::size_t active_count(const EmotionVector& v) {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

std::string active_names(const EmotionVector& v) {
  std::string out;
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    if (v[i] == 0.0) continue;
    if (!out.empty()) out += ", ";
    out += kEmotionNames[i];
  }
  return out;
}

}  // namespace emogan
