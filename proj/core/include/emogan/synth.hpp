#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "emogan/emotext.hpp"
#include "emogan/mathkit.hpp"

namespace emogan {

// Labelled data with a known answer: each class owns an orthonormal anchor
// direction and a combination's embedding is the normalized sum of its
// anchors plus isotropic gaussian noise.
struct SyntheticSpec {
  std::size_t dim = 512;
  double noise_sigma = 0.05;
  std::size_t examples_per_combo = 20;
  std::vector<EmotionVector> combos;
  std::uint64_t seed = 0;

  void validate() const;  // throws UsageError
};

// 7 x dim matrix with orthonormal rows. Requires dim >= 7.
Mat make_anchors(std::size_t dim, std::uint64_t seed);

// Examples ordered by combo, then by repetition.
std::vector<LabeledExample> synthesize(const SyntheticSpec& spec);

// CSV with a header row naming the 7 classes and one binary row per
// combination (the shipped data/observed_combinations.csv).
std::vector<EmotionVector> parse_combinations_csv(std::string_view csv);
std::vector<EmotionVector> load_combinations_csv(const std::filesystem::path& path);

}  // namespace emogan
