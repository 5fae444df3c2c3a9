#include "emogan/emotext.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "emogan/dataset_io.hpp"
#include "emogan/error.hpp"
#include "emogan/rng.hpp"
#include "json.hpp"

namespace emogan {

using nlohmann::json;

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?' || c == '\n'; }

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

EmoticonDictionary::EmoticonDictionary(ClassLists classes) : classes_(std::move(classes)) {
  std::unordered_map<std::string, std::size_t> owner;
  for (std::size_t c = 0; c < kNumEmotions; ++c) {
    auto& list = classes_[c];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (const auto& e : list) {
      if (e.empty()) {
        throw DataError("dictionary: empty emoticon in class '" +
                        std::string(kEmotionNames[c]) + "'");
      }
      const auto [it, inserted] = owner.emplace(e, c);
      if (!inserted) {
        throw DuplicateEmoticonError("dictionary: emoticon \"" + e + "\" listed under both '" +
                                     std::string(kEmotionNames[it->second]) + "' and '" +
                                     std::string(kEmotionNames[c]) + "'");
      }
      by_length_.emplace_back(e, c);
    }
  }
  std::stable_sort(by_length_.begin(), by_length_.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });
}

std::optional<EmoticonDictionary::Match> EmoticonDictionary::match_at(std::string_view text,
                                                                      std::size_t pos) const {
  const std::string_view rest = text.substr(pos);
  for (const auto& [emoticon, cls] : by_length_) {
    if (rest.starts_with(emoticon)) return Match{emoticon.size(), cls};
  }
  return std::nullopt;
}

EmoticonDictionary parse_dictionary(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("dictionary: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("dictionary: top level must be a JSON object");

  std::vector<std::string> missing;
  for (auto name : kEmotionNames) {
    if (!doc.contains(std::string(name))) missing.emplace_back(name);
  }
  if (!missing.empty()) {
    std::string msg = "dictionary: missing emotion class key(s):";
    for (const auto& m : missing) msg += " " + m;
    throw ParseError(msg);
  }
  for (const auto& [key, _] : doc.items()) {
    if (!emotion_index(key)) throw ParseError("dictionary: unknown emotion class '" + key + "'");
  }

  EmoticonDictionary::ClassLists lists;
  for (std::size_t c = 0; c < kNumEmotions; ++c) {
    const auto& arr = doc.at(std::string(kEmotionNames[c]));
    if (!arr.is_array()) {
      throw ParseError("dictionary: '" + std::string(kEmotionNames[c]) +
                       "' must be a list of strings");
    }
    for (const auto& item : arr) {
      if (!item.is_string()) {
        throw ParseError("dictionary: '" + std::string(kEmotionNames[c]) +
                         "' must be a list of strings");
      }
      lists[c].push_back(item.get<std::string>());
    }
  }
  return EmoticonDictionary(std::move(lists));
}

EmoticonDictionary load_dictionary(const std::filesystem::path& path) {
  return parse_dictionary(read_text_file(path));
}

std::vector<std::string> split_sentences(std::string_view text, const EmoticonDictionary& dict) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    const auto t = trim(current);
    if (!t.empty()) out.emplace_back(t);
    current.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    if (const auto m = dict.match_at(text, i)) {
      current.append(text.substr(i, m->length));
      i += m->length;
      continue;
    }
    if (is_terminator(text[i])) {
      flush();
    } else {
      current.push_back(text[i]);
    }
    ++i;
  }
  flush();
  return out;
}

EmotionCounts emotion_counts(std::string_view sentence, const EmoticonDictionary& dict) {
  EmotionCounts counts{};
  std::size_t i = 0;
  while (i < sentence.size()) {
    if (const auto m = dict.match_at(sentence, i)) {
      ++counts[m->emotion];
      i += m->length;
    } else {
      ++i;
    }
  }
  return counts;
}

EmotionVector binarize(const EmotionCounts& counts) {
  EmotionVector v{};
  for (std::size_t c = 0; c < kNumEmotions; ++c) v[c] = counts[c] > 0 ? 1.0 : 0.0;
  return v;
}

StubEmbedder::StubEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw UsageError("stub embedder: dimension must be >= 1");
}

Vec StubEmbedder::embed(std::string_view sentence) const {
  std::mt19937_64 rng(splitmix64(fnv1a(sentence) ^ splitmix64(seed_)));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim_);
  double n = 0.0;
  while (n < kEpsNorm) {
    for (double& x : v) x = gauss(rng);
    n = norm(v);
  }
  for (double& x : v) x /= n;
  return v;
}

std::unique_ptr<EmbeddingProvider> stub_embedder(std::size_t dim, std::uint64_t seed) {
  return std::make_unique<StubEmbedder>(dim, seed);
}

PrecomputedEmbedder::PrecomputedEmbedder(std::size_t dim,
                                         std::unordered_map<std::string, Vec> table)
    : dim_(dim), table_(std::move(table)) {
  for (const auto& [text, v] : table_) {
    if (v.size() != dim_) {
      throw DimensionError("precomputed embedding for \"" + text + "\" has length " +
                           std::to_string(v.size()) + ", expected " + std::to_string(dim_));
    }
    if (!all_finite(v)) throw DataError("precomputed embedding for \"" + text + "\" not finite");
  }
}

PrecomputedEmbedder PrecomputedEmbedder::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::unordered_map<std::string, Vec> table;
  std::size_t dim = 0;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      auto text = j.at("text").get<std::string>();
      auto emb = j.at("embedding").get<Vec>();
      if (dim == 0) dim = emb.size();
      table.insert_or_assign(std::move(text), std::move(emb));
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (table.empty()) throw EmptyInputError(path.string() + ": no embeddings");
  return PrecomputedEmbedder(dim, std::move(table));
}

Vec PrecomputedEmbedder::embed(std::string_view sentence) const {
  const auto it = table_.find(std::string(sentence));
  if (it == table_.end()) throw DataError("no precomputed embedding for sentence");
  return it->second;
}

VectorizeResult vectorize_corpus(std::span<const std::string> texts,
                                 const EmoticonDictionary& dict,
                                 const EmbeddingProvider& provider,
                                 VectorizeOptions options) {
  VectorizeResult result;
  for (const auto& text : texts) {
    for (auto& sentence : split_sentences(text, dict)) {
      ++result.sentences;
      const EmotionVector label = binarize(emotion_counts(sentence, dict));
      if (active_count(label) == 0 && !options.keep_zero_label) {
        ++result.dropped;
        continue;
      }
      Vec emb;
      try {
        emb = provider.embed(sentence);
      } catch (const std::exception& e) {
        throw DataError("embedding failed for sentence \"" + sentence + "\": " + e.what());
      }
      if (emb.size() != provider.dim()) {
        throw DimensionError("provider returned length " + std::to_string(emb.size()) +
                             " for sentence \"" + sentence + "\", expected " +
                             std::to_string(provider.dim()));
      }
      if (!all_finite(emb)) {
        throw DataError("provider returned non-finite embedding for sentence \"" + sentence +
                        "\"");
      }
      ++result.labelled;
      result.examples.push_back({std::move(emb), label, std::move(sentence), false});
    }
  }
  return result;
}

}  // namespace emogan
