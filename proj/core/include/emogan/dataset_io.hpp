#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emogan/emotext.hpp"

namespace emogan {

// Corpus file: JSON-lines {"text": string}. Errors name the offending line.
std::vector<std::string> read_corpus(const std::filesystem::path& path);
std::vector<std::string> parse_corpus(std::string_view jsonl, std::string_view source = "corpus");

// Dataset file: JSON-lines
// {"embedding":[D reals], "emotions":[7 x {0,1}], "text"?: string, "collision"?: bool}.
// When expected_dim is set every embedding must have that length; otherwise
// all rows must agree with the first.
std::vector<LabeledExample> read_dataset(const std::filesystem::path& path,
                                         std::optional<std::size_t> expected_dim = {});
std::vector<LabeledExample> parse_dataset(std::string_view jsonl,
                                          std::optional<std::size_t> expected_dim = {},
                                          std::string_view source = "dataset");

std::string dataset_line(const LabeledExample& example);
std::string format_dataset(const std::vector<LabeledExample>& examples);
void write_dataset(const std::filesystem::path& path,
                   const std::vector<LabeledExample>& examples);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace emogan
