#include "emogan/synth.hpp"

#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "emogan/dataset_io.hpp"
#include "emogan/error.hpp"
#include "emogan/rng.hpp"

namespace emogan {

namespace {

std::string combo_bits(const EmotionVector& v) {
  std::string s;
  for (double x : v) s.push_back(x != 0.0 ? '1' : '0');
  return s;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (dim < kNumEmotions) {
    throw UsageError("synthetic data needs D >= 7 for orthonormal anchors, got D=" +
                     std::to_string(dim));
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw UsageError("noise_sigma must be a finite value >= 0");
  }
  std::set<std::string> seen;
  for (const auto& c : combos) {
    if (!is_binary(c)) throw UsageError("synthetic combos must be binary");
    if (!seen.insert(combo_bits(c)).second) {
      throw UsageError("duplicate synthetic combo " + combo_bits(c));
    }
  }
}

Mat make_anchors(std::size_t dim, std::uint64_t seed) {
  if (dim < kNumEmotions) {
    throw UsageError("orthonormal anchors need D >= 7, got D=" + std::to_string(dim));
  }
  std::mt19937_64 rng(derive_seed(seed, "anchors"));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a(kNumEmotions, dim);
  for (double& x : a.flat()) x = gauss(rng);
  // Modified Gram-Schmidt, two passes for orthogonality at machine precision.
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    auto ri = a.row(i);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        const auto rj = a.row(j);
        const double p = dot(ri, rj);
        for (std::size_t d = 0; d < dim; ++d) ri[d] -= p * rj[d];
      }
    }
    const double n = norm(ri);
    for (double& x : ri) x /= n;
  }
  return a;
}

std::vector<LabeledExample> synthesize(const SyntheticSpec& spec) {
  spec.validate();
  const Mat anchors = make_anchors(spec.dim, spec.seed);
  std::mt19937_64 rng(derive_seed(spec.seed, "synth-noise"));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<LabeledExample> out;
  out.reserve(spec.combos.size() * spec.examples_per_combo);
  for (const auto& combo : spec.combos) {
    Vec center(spec.dim, 0.0);
    for (std::size_t j = 0; j < kNumEmotions; ++j) {
      if (combo[j] == 0.0) continue;
      const auto a = anchors.row(j);
      for (std::size_t d = 0; d < spec.dim; ++d) center[d] += a[d];
    }
    const double n = norm(center);
    if (n > 0.0) {
      for (double& x : center) x /= n;
    }
    const std::string bits = combo_bits(combo);
    for (std::size_t k = 0; k < spec.examples_per_combo; ++k) {
      LabeledExample ex;
      ex.embedding = center;
      if (spec.noise_sigma > 0.0) {
        for (double& x : ex.embedding) x += spec.noise_sigma * gauss(rng);
      }
      ex.emotions = combo;
      ex.text = "synthetic " + bits + " #" + std::to_string(k);
      out.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<EmotionVector> parse_combinations_csv(std::string_view csv) {
  std::vector<EmotionVector> out;
  std::istringstream in{std::string(csv)};
  std::string line;
  bool header = true;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != kNumEmotions) {
      throw ParseError("combinations:" + std::to_string(lineno) + ": expected 7 columns");
    }
    if (header) {
      for (std::size_t c = 0; c < kNumEmotions; ++c) {
        if (cells[c] != kEmotionNames[c]) {
          throw ParseError("combinations: header must list the 7 emotions in order");
        }
      }
      header = false;
      continue;
    }
    EmotionVector v{};
    for (std::size_t c = 0; c < kNumEmotions; ++c) {
      if (cells[c] == "1") {
        v[c] = 1.0;
      } else if (cells[c] != "0") {
        throw ParseError("combinations:" + std::to_string(lineno) + ": cells must be 0 or 1");
      }
    }
    out.push_back(v);
  }
  return out;
}

std::vector<EmotionVector> load_combinations_csv(const std::filesystem::path& path) {
  return parse_combinations_csv(read_text_file(path));
}

}  // namespace emogan
