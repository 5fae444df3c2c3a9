#include "emogan/dataset_io.hpp"

#include <fstream>
#include <sstream>

#include "emogan/error.hpp"
#include "json.hpp"

namespace emogan {

using nlohmann::json;

namespace {

std::string where(std::string_view source, std::size_t lineno) {
  return std::string(source) + ":" + std::to_string(lineno) + ": ";
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    const auto line = text.substr(start, end - start);
    if (!blank(line)) fn(line, lineno);
    start = end + 1;
  }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

std::vector<std::string> parse_corpus(std::string_view jsonl, std::string_view source) {
  std::vector<std::string> texts;
  for_each_line(jsonl, [&](std::string_view line, std::size_t lineno) {
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where(source, lineno) + "malformed JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
      throw ParseError(where(source, lineno) + "expected an object with a string \"text\"");
    }
    texts.push_back(j["text"].get<std::string>());
  });
  return texts;
}

std::vector<std::string> read_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_text_file(path), path.string());
}

std::vector<LabeledExample> parse_dataset(std::string_view jsonl,
                                          std::optional<std::size_t> expected_dim,
                                          std::string_view source) {
  std::vector<LabeledExample> out;
  for_each_line(jsonl, [&](std::string_view line, std::size_t lineno) {
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where(source, lineno) + "malformed JSON: " + e.what());
    }
    if (!j.is_object()) throw ParseError(where(source, lineno) + "expected a JSON object");
    LabeledExample ex;
    try {
      ex.embedding = j.at("embedding").get<Vec>();
      const auto emotions = j.at("emotions").get<std::vector<double>>();
      if (emotions.size() != kNumEmotions) {
        throw ParseError(where(source, lineno) + "\"emotions\" must have 7 entries");
      }
      std::copy(emotions.begin(), emotions.end(), ex.emotions.begin());
      if (j.contains("text") && !j["text"].is_null()) ex.text = j["text"].get<std::string>();
      if (j.contains("collision")) ex.collision = j["collision"].get<bool>();
    } catch (const json::exception& e) {
      throw ParseError(where(source, lineno) + e.what());
    }
    if (!is_binary(ex.emotions)) {
      throw ParseError(where(source, lineno) + "\"emotions\" entries must be 0 or 1");
    }
    if (ex.embedding.empty()) throw ParseError(where(source, lineno) + "empty embedding");
    if (!all_finite(ex.embedding)) {
      throw ParseError(where(source, lineno) + "non-finite embedding value");
    }
    const std::size_t want = expected_dim ? *expected_dim
                             : out.empty() ? ex.embedding.size()
                                           : out.front().embedding.size();
    if (ex.embedding.size() != want) {
      throw DimensionError(where(source, lineno) + "embedding length " +
                           std::to_string(ex.embedding.size()) + ", expected " +
                           std::to_string(want));
    }
    out.push_back(std::move(ex));
  });
  return out;
}

std::vector<LabeledExample> read_dataset(const std::filesystem::path& path,
                                         std::optional<std::size_t> expected_dim) {
  return parse_dataset(read_text_file(path), expected_dim, path.string());
}

std::string dataset_line(const LabeledExample& example) {
  json j;
  j["embedding"] = example.embedding;
  json emotions = json::array();
  for (double e : example.emotions) emotions.push_back(static_cast<int>(e));
  j["emotions"] = std::move(emotions);
  if (example.text) j["text"] = *example.text;
  j["collision"] = example.collision;
  return j.dump();
}

std::string format_dataset(const std::vector<LabeledExample>& examples) {
  std::string out;
  for (const auto& ex : examples) {
    out += dataset_line(ex);
    out += '\n';
  }
  return out;
}

void write_dataset(const std::filesystem::path& path,
                   const std::vector<LabeledExample>& examples) {
  write_text_file(path, format_dataset(examples));
}

}  // namespace emogan
