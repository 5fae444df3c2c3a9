#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "emogan/emotion.hpp"
#include "emogan/mathkit.hpp"

namespace emogan {

// Emoticons grouped by emotion class. An emoticon belongs to at most one
// class; construction rejects anything else.
class EmoticonDictionary {
 public:
  using ClassLists = std::array<std::vector<std::string>, kNumEmotions>;

  EmoticonDictionary() = default;
  // Throws DuplicateEmoticonError naming both classes on a cross-class
  // duplicate, DataError on an empty emoticon string.
  explicit EmoticonDictionary(ClassLists classes);

  const ClassLists& classes() const { return classes_; }
  std::size_t size() const { return by_length_.size(); }

  // Longest dictionary emoticon starting at text[pos], if any.
  struct Match {
    std::size_t length;
    std::size_t emotion;
  };
  std::optional<Match> match_at(std::string_view text, std::size_t pos) const;

 private:
  ClassLists classes_;
  // (emoticon, class), longest first.
  std::vector<std::pair<std::string, std::size_t>> by_length_;
};

EmoticonDictionary parse_dictionary(std::string_view json_text);
EmoticonDictionary load_dictionary(const std::filesystem::path& path);

// Splits on '.', '!', '?' and newline, trims, drops empty segments. A
// terminator that is part of a dictionary emoticon does not split.
std::vector<std::string> split_sentences(std::string_view text,
                                         const EmoticonDictionary& dict = {});

using EmotionCounts = std::array<std::size_t, kNumEmotions>;

// Non-overlapping, longest-match-first emoticon counts per class.
EmotionCounts emotion_counts(std::string_view sentence, const EmoticonDictionary& dict);

EmotionVector binarize(const EmotionCounts& counts);

struct LabeledExample {
  Vec embedding;
  EmotionVector emotions{};
  std::optional<std::string> text;
  bool collision = false;

  bool operator==(const LabeledExample&) const = default;
};

// Source of sentence embeddings (a BERT-like encoder in production).
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  // Finite vector of length dim(); identical text gives identical output.
  virtual Vec embed(std::string_view sentence) const = 0;
};

// Deterministic test double: hashes the sentence together with the seed and
// draws a pseudo-random unit vector.
class StubEmbedder final : public EmbeddingProvider {
 public:
  StubEmbedder(std::size_t dim, std::uint64_t seed);
  std::size_t dim() const override { return dim_; }
  Vec embed(std::string_view sentence) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// Looks sentences up in a table read from JSON-lines
// {"text": ..., "embedding": [...]}.
class PrecomputedEmbedder final : public EmbeddingProvider {
 public:
  PrecomputedEmbedder(std::size_t dim, std::unordered_map<std::string, Vec> table);
  static PrecomputedEmbedder load(const std::filesystem::path& path);

  std::size_t dim() const override { return dim_; }
  Vec embed(std::string_view sentence) const override;

 private:
  std::size_t dim_;
  std::unordered_map<std::string, Vec> table_;
};

std::unique_ptr<EmbeddingProvider> stub_embedder(std::size_t dim, std::uint64_t seed);

struct VectorizeOptions {
  bool keep_zero_label = false;
};

struct VectorizeResult {
  std::vector<LabeledExample> examples;
  std::size_t sentences = 0;
  std::size_t labelled = 0;
  std::size_t dropped = 0;
};

VectorizeResult vectorize_corpus(std::span<const std::string> texts,
                                 const EmoticonDictionary& dict,
                                 const EmbeddingProvider& provider,
                                 VectorizeOptions options = {});

}  // namespace emogan
