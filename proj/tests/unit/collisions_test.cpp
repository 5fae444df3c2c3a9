#include <random>

#include "doctest.h"
#include "emogan/collisions.hpp"
#include "emogan/error.hpp"
#include "oracles/alg1_oracle.hpp"

using namespace emogan;

namespace {

LabeledExample ex(Vec e, EmotionVector v) {
  LabeledExample out;
  out.embedding = std::move(e);
  out.emotions = v;
  return out;
}

// Random dataset drawn from a handful of base directions so that clusters
// of several members actually occur at tau in {0.9, 0.95, 1.0}.
std::vector<LabeledExample> random_dataset(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 50), base_pick(0, 5), bit(0, 1), mode(0, 2);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t dim = 6;
  std::vector<Vec> bases(6, Vec(dim));
  for (auto& b : bases)
    for (double& x : b) x = g(rng);
  std::vector<LabeledExample> out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    Vec e = bases[static_cast<std::size_t>(base_pick(rng))];
    const int m = mode(rng);
    if (m == 1) {
      for (double& x : e) x += 0.05 * g(rng);
    } else if (m == 2) {
      for (double& x : e) x *= 2.5;
    }
    EmotionVector v{};
    for (double& x : v) x = bit(rng);
    out.push_back(ex(std::move(e), v));
  }
  return out;
}

std::vector<oracle::Alg1Example> to_oracle(const std::vector<LabeledExample>& data) {
  std::vector<oracle::Alg1Example> out;
  for (const auto& d : data) out.push_back({d.embedding, d.emotions});
  return out;
}

// n copies of one embedding whose labels sum to `sums`.
std::vector<LabeledExample> cluster_with_sums(const Vec& e, const std::array<int, 7>& sums) {
  std::vector<LabeledExample> out;
  int rows = 0;
  for (int s : sums) rows = std::max(rows, s);
  for (int r = 0; r < rows; ++r) {
    EmotionVector v{};
    for (std::size_t j = 0; j < 7; ++j) v[j] = r < sums[j] ? 1.0 : 0.0;
    out.push_back(ex(e, v));
  }
  return out;
}

}  // namespace

TEST_CASE("cluster_objects") {
  CHECK(cluster_objects(std::vector{ex({1, 2}, {}), ex({1, 2}, {})}, 1.0) ==
        std::vector<std::size_t>{0, 0});
  CHECK(cluster_objects(std::vector{ex({1, 0}, {}), ex({0, 1}, {})}, 0.9) ==
        std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(cluster_objects(std::vector<LabeledExample>{}, 0.9), EmptyInputError);
  CHECK_THROWS_AS(cluster_objects(std::vector{ex({1, 0}, {}), ex({0, 1, 0}, {})}, 0.9),
                  DimensionError);

  SUBCASE("matches the brute-force greedy rule on 20 random points") {
    std::mt19937_64 rng(20);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
      std::vector<LabeledExample> data;
      Vec base(3);
      for (double& x : base) x = g(rng);
      for (int i = 0; i < 20; ++i) {
        Vec e = base;
        for (double& x : e) x += 0.3 * g(rng);
        data.push_back(ex(e, {}));
      }
      const auto got = cluster_objects(data, 0.95);
      const auto want = oracle::alg1_cluster_ids(to_oracle(data), 0.95);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == static_cast<std::size_t>(want[i]));
    }
  }
}

TEST_CASE("cluster_stats") {
  SUBCASE("sums [5,5,0,0,0,0,0]") {
    const auto data = cluster_with_sums({1, 0}, {5, 5, 0, 0, 0, 0, 0});
    const auto ids = cluster_objects(data, 1.0);
    const auto s = cluster_stats(data, ids);
    REQUIRE(s.size() == 1);
    CHECK(s[0].size == 5);
    CHECK(s[0].mean == doctest::Approx(10.0 / 7.0));
    CHECK(s[0].z == 2);
  }
  SUBCASE("sums [3,3,3,0,0,0,0]") {
    const auto data = cluster_with_sums({1, 0}, {3, 3, 3, 0, 0, 0, 0});
    const auto s = cluster_stats(data, cluster_objects(data, 1.0));
    CHECK(s[0].mean == doctest::Approx(9.0 / 7.0));
    CHECK(s[0].z == 3);
  }
  SUBCASE("single example") {
    const std::vector data{ex({1, 0}, {0, 0, 0, 0, 0, 1, 0})};
    const auto s = cluster_stats(data, cluster_objects(data, 1.0));
    CHECK(s[0].mean == doctest::Approx(1.0 / 7.0));
    CHECK(s[0].z == 1);
  }
  CHECK_THROWS_AS(cluster_stats(std::vector{ex({1}, {})}, std::vector<std::size_t>{}),
                  DimensionError);
}

TEST_CASE("mark_collisions") {
  SUBCASE("Z == k is not a collision") {
    const auto r = mark_collisions(cluster_with_sums({1, 0}, {5, 5, 0, 0, 0, 0, 0}), {.k = 2});
    CHECK(r.clusters[0].z == 2);
    CHECK(r.flagged_clusters == 0);
  }
  SUBCASE("Z = 3 > k = 2 flags every member") {
    const auto r = mark_collisions(cluster_with_sums({1, 0}, {3, 3, 3, 0, 0, 0, 0}), {.k = 2});
    CHECK(r.flagged_clusters == 1);
    CHECK(r.flagged_examples == 3);
    for (const auto& e : r.examples) CHECK(e.collision);
  }
  SUBCASE("single-label duplicate groups, k = 1") {
    std::vector<LabeledExample> data;
    for (std::size_t c = 0; c < 7; ++c) {
      Vec e(7, 0.0);
      e[c] = 1.0;
      EmotionVector v{};
      v[c] = 1.0;
      for (int r = 0; r < 3; ++r) data.push_back(ex(e, v));
    }
    const auto r = mark_collisions(data, {.k = 1});
    CHECK(r.clusters.size() == 7);
    CHECK(r.flagged_examples == 0);
  }
  SUBCASE("two-cluster conflict fixture flags exactly one cluster") {
    auto data = cluster_with_sums({1, 0}, {1, 1, 1, 0, 0, 0, 0});
    for (auto& e : cluster_with_sums({0, 1}, {2, 0, 0, 0, 0, 0, 0})) data.push_back(e);
    const auto r = mark_collisions(data, {.k = 2, .tau = 0.9});
    CHECK(r.clusters.size() == 2);
    CHECK(r.flagged_clusters == 1);
    CHECK(r.clusters[0].collision);
    CHECK_FALSE(r.clusters[1].collision);
  }
  CHECK_THROWS_AS(mark_collisions(cluster_with_sums({1}, {1, 0, 0, 0, 0, 0, 0}), {.k = 0}),
                  UsageError);
  CHECK_THROWS_AS(mark_collisions(cluster_with_sums({1}, {1, 0, 0, 0, 0, 0, 0}), {.tau = 1.5}),
                  UsageError);
}

TEST_CASE("collision properties on random datasets") {
  std::mt19937_64 rng(77);
  const double taus[] = {0.9, 0.95, 1.0};
  std::uniform_int_distribution<int> kdist(1, 6), tdist(0, 2);
  for (int t = 0; t < 200; ++t) {
    const auto data = random_dataset(rng);
    const int k = kdist(rng);
    const double tau = taus[tdist(rng)];
    const auto r = mark_collisions(data, {.k = k, .tau = tau});
    const auto want = oracle::alg1_flags(to_oracle(data), k, tau);
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(r.examples[i].collision == want[i]);
    for (const auto& c : r.clusters) {
      double total = 0.0;
      for (double s : c.class_sums) total += s;
      if (total > 0) CHECK(c.z >= 1);
      CHECK(c.collision == (c.z > k));
    }
    CHECK(mark_collisions(data, {.k = 7, .tau = tau}).flagged_examples == 0);
    CHECK(mark_collisions(data, {.k = k, .tau = tau}).examples == r.examples);
  }
}

TEST_CASE("filter_collisions") {
  std::vector<LabeledExample> data;
  for (int i = 0; i < 10; ++i) {
    auto e = ex({static_cast<double>(i)}, {});
    e.collision = (i % 3 == 0);  // 0, 3, 6, 9
    data.push_back(e);
  }
  const auto kept = filter_collisions(data);
  REQUIRE(kept.size() == 6);
  const double order[] = {1, 2, 4, 5, 7, 8};
  for (std::size_t i = 0; i < 6; ++i) CHECK(kept[i].embedding[0] == order[i]);

  for (auto& e : data) e.collision = false;
  CHECK(filter_collisions(data) == data);
  for (auto& e : data) e.collision = true;
  CHECK(filter_collisions(data).empty());
}
