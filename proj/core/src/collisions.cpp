#include "emogan/collisions.hpp"

#include <algorithm>
#include <string>

#include "emogan/error.hpp"

namespace emogan {

void CollisionParams::validate() const {
  if (k < 1 || k > static_cast<int>(kNumEmotions)) {
    throw UsageError("collision k must be in 1..7, got " + std::to_string(k));
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw UsageError("collision tau must be in [0, 1], got " + std::to_string(tau));
  }
}

std::vector<std::size_t> cluster_objects(std::span<const LabeledExample> examples, double tau) {
  if (examples.empty()) throw EmptyInputError("cluster_objects: empty dataset");
  const std::size_t dim = examples.front().embedding.size();
  std::vector<std::size_t> leaders;
  std::vector<double> leader_norms;
  std::vector<std::size_t> ids(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& e = examples[i].embedding;
    if (e.size() != dim) {
      throw DimensionError("cluster_objects: example " + std::to_string(i) +
                           " has embedding length " + std::to_string(e.size()) +
                           ", expected " + std::to_string(dim));
    }
    // Same arithmetic as cosine_similarity, with the norms hoisted out of
    // the leader scan.
    const double ne = norm(e);
    bool assigned = false;
    for (std::size_t l = 0; l < leaders.size(); ++l) {
      const double nl = leader_norms[l];
      const double cos = (ne < kEpsNorm || nl < kEpsNorm)
                             ? 0.0
                             : dot(e, examples[leaders[l]].embedding) / (ne * nl);
      if (cos >= tau - kClusterSlack) {
        ids[i] = l;
        assigned = true;
        break;
      }
    }
    if (!assigned) {
      ids[i] = leaders.size();
      leaders.push_back(i);
      leader_norms.push_back(ne);
    }
  }
  return ids;
}

std::vector<ClusterStats> cluster_stats(std::span<const LabeledExample> examples,
                                        std::span<const std::size_t> ids) {
  if (ids.size() != examples.size()) {
    throw DimensionError("cluster_stats: one id per example required");
  }
  const std::size_t n_clusters =
      ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
  std::vector<ClusterStats> stats(n_clusters);
  for (std::size_t c = 0; c < n_clusters; ++c) stats[c].id = c;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    auto& s = stats[ids[i]];
    ++s.size;
    for (std::size_t j = 0; j < kNumEmotions; ++j) s.class_sums[j] += examples[i].emotions[j];
  }
  for (auto& s : stats) {
    double total = 0.0;
    for (double v : s.class_sums) total += v;
    s.mean = total / static_cast<double>(kNumEmotions);
    s.z = static_cast<int>(std::count_if(s.class_sums.begin(), s.class_sums.end(),
                                         [&](double v) { return v >= s.mean; }));
  }
  return stats;
}

CollisionResult mark_collisions(std::vector<LabeledExample> examples,
                                const CollisionParams& params) {
  params.validate();
  CollisionResult result;
  if (examples.empty()) return result;
  result.cluster_ids = cluster_objects(examples, params.tau);
  result.clusters = cluster_stats(examples, result.cluster_ids);
  for (auto& s : result.clusters) {
    s.collision = s.z > params.k;
    if (s.collision) ++result.flagged_clusters;
  }
  for (std::size_t i = 0; i < examples.size(); ++i) {
    examples[i].collision = result.clusters[result.cluster_ids[i]].collision;
    if (examples[i].collision) ++result.flagged_examples;
  }
  result.examples = std::move(examples);
  return result;
}

std::vector<LabeledExample> filter_collisions(std::span<const LabeledExample> examples) {
  std::vector<LabeledExample> out;
  for (const auto& e : examples) {
    if (!e.collision) out.push_back(e);
  }
  return out;
}

}  // namespace emogan
