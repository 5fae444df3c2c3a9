#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "emogan/gan.hpp"

namespace emogan {

inline constexpr int kModelFormatVersion = 1;

struct Model {
  Generator generator;
  Discriminator discriminator;
  std::uint64_t seed = 0;
  TrainConfig generator_config = default_generator_config();
  TrainConfig discriminator_config = default_discriminator_config();

  std::size_t dim() const { return discriminator.dim(); }
};

// {format_version, D, generator:{W1,b1,W2,b2}, discriminator:{prototypes},
// seed, train_config}. Optimizer moments are not persisted; a loaded model
// starts with fresh Adam state. save -> load -> save is byte-identical.
std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

}  // namespace emogan
