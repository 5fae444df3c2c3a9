#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "emogan/emotext.hpp"

namespace emogan {

// k: number of classes a cluster may reach or exceed its class mean on
// before it counts as a collision. tau: cosine threshold for joining a
// cluster leader.
struct CollisionParams {
  int k = 2;
  double tau = 0.995;

  void validate() const;  // throws UsageError
};

struct ClusterStats {
  std::size_t id = 0;
  std::size_t size = 0;
  EmotionVector class_sums{};
  double mean = 0.0;
  int z = 0;
  bool collision = false;
};

// Slack applied to tau so that tau = 1 groups exact duplicates despite
// rounding in the cosine.
inline constexpr double kClusterSlack = 1e-12;

// Greedy leader clustering in input order. Each example joins the first
// leader whose cosine similarity is >= tau, otherwise it becomes a leader.
// Ids are dense, numbered by leader order.
std::vector<std::size_t> cluster_objects(std::span<const LabeledExample> examples, double tau);

std::vector<ClusterStats> cluster_stats(std::span<const LabeledExample> examples,
                                        std::span<const std::size_t> ids);

struct CollisionResult {
  std::vector<LabeledExample> examples;  // input with collision flags set
  std::vector<ClusterStats> clusters;
  std::vector<std::size_t> cluster_ids;
  std::size_t flagged_clusters = 0;
  std::size_t flagged_examples = 0;
};

CollisionResult mark_collisions(std::vector<LabeledExample> examples,
                                const CollisionParams& params);

std::vector<LabeledExample> filter_collisions(std::span<const LabeledExample> examples);

}  // namespace emogan
