#include <gtest/gtest.h>

#include <cmath>

#include "spkm/engine.hpp"
#include "spkm/errors.hpp"
#include "spkm/validation.hpp"
#include "support.hpp"

using namespace spkm;

namespace {

CentroidSet centers_of(std::vector<std::vector<double>> cs) {
  std::vector<DenseVector> out;
  for (auto& c : cs) out.push_back(normalize(DenseVector(std::move(c))));
  return CentroidSet::from_centers(std::move(out));
}

ClusteringResult run_seeded(const Dataset& data, const CentroidSet& seeded, Variant v,
                            EngineOptions options = {}) {
  return SphericalKMeans(data, seeded, v, options).run();
}

struct Recorder : BoundObserver {
  std::vector<BoundCheck> checks;
  void begin_assignment(const CentroidSet&) override {}
  void on_check(const BoundCheck& c) override { checks.push_back(c); }
};

// Ternary vectors in a tiny dimension: many exact ties between similarities.
Dataset tie_heavy_dataset(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<SparseVector> rows;
  while (rows.size() < n) {
    std::vector<Index> idx;
    std::vector<double> val;
    for (Index d = 0; d < 4; ++d) {
      const int c = static_cast<int>(rng.uniform_index(3)) - 1;
      if (c != 0) {
        idx.push_back(d);
        val.push_back(c);
      }
    }
    if (!idx.empty()) rows.emplace_back(idx, val);
  }
  return Dataset(std::move(rows), 4);
}

void expect_same_run(const ClusteringResult& ref, const ClusteringResult& got) {
  EXPECT_EQ(ref.assignments, got.assignments);
  EXPECT_EQ(ref.iterations.size(), got.iterations.size());
  EXPECT_NEAR(ref.objective, got.objective, 1e-9 * std::abs(ref.objective));
  EXPECT_EQ(ref.converged, got.converged);
}

}  // namespace

TEST(Variant, NamesRoundTrip) {
  for (Variant v : kAllVariants) EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_THROW(parse_variant("bogus"), ConfigError);
}

TEST(AssignFull, PicksMatchingCenterAndBreaksTiesLow) {
  const Dataset data({SparseVector({2}, {1.0}), SparseVector({0, 1}, {1.0, 1.0})}, 3);
  const auto c = centers_of({{0, 0, -1}, {1, 0, 0}, {0, 0, -1}, {0, 0, 1}, {0, 1, 0}});
  std::uint64_t sims = 0;
  const auto full = assign_full(data, c, &sims);
  EXPECT_EQ(full.assignment[0], 3u);
  EXPECT_EQ(full.best[0], 1.0);
  EXPECT_EQ(full.assignment[1], 1u);
  EXPECT_EQ(full.best[1], full.second[1]);
  EXPECT_EQ(sims, 10u);
}

TEST(AssignFull, MatchesBruteForce) {
  const auto data = spkm::testing::random_dataset(1, 300, 100, 0.05);
  const auto seeded = init_uniform(data, 12, 3).centroids;
  EXPECT_EQ(assign_full(data, seeded).assignment, validation::brute_force_assign(data, seeded));
}

TEST(UpdateCenters, SymmetricPair) {
  const Dataset data({SparseVector({0}, {1.0}), SparseVector({1}, {1.0})}, 2);
  auto c = centers_of({{1, 0}});
  const std::vector<Assignment> a{0, 0};
  update_centers(data, {}, a, c);
  EXPECT_NEAR(c.centers[0][0], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(c.centers[0][1], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(c.drift[0], std::sqrt(0.5), 1e-15);
  EXPECT_EQ(c.counts[0], 2u);

  const auto before = c.centers;
  update_centers(data, a, a, c);
  EXPECT_EQ(c.centers, before);
  EXPECT_EQ(c.drift[0], 1.0);
}

TEST(UpdateCenters, EmptyAndCancellingClustersKeepTheirCenter) {
  const Dataset data({SparseVector({0}, {1.0}), SparseVector({0}, {-1.0})}, 2);
  auto c = centers_of({{0, 1}, {1, 1}});
  const auto before = c.centers;
  update_centers(data, {}, std::vector<Assignment>{0, 0}, c);
  EXPECT_EQ(c.centers, before);
  EXPECT_EQ(c.drift[0], 1.0);
  EXPECT_EQ(c.drift[1], 1.0);
  EXPECT_EQ(c.counts[1], 0u);
}

TEST(UpdateCenters, IncrementalSumsTrackFromScratch) {
  const auto data = spkm::testing::random_dataset(2, 400, 80, 0.1);
  Rng rng(5);
  auto inc = init_uniform(data, 7, 1).centroids;
  std::vector<Assignment> a(data.size());
  for (auto& v : a) v = static_cast<Assignment>(rng.uniform_index(7));
  update_centers(data, {}, a, inc);
  for (int round = 0; round < 50; ++round) {
    auto next = a;
    for (int t = 0; t < 40; ++t) {
      next[rng.uniform_index(next.size())] = static_cast<Assignment>(rng.uniform_index(7));
    }
    update_centers(data, a, next, inc);
    a = next;
  }
  auto scratch = inc;
  update_centers(data, {}, a, scratch, true);
  for (std::size_t j = 0; j < 7; ++j) {
    EXPECT_EQ(inc.counts[j], scratch.counts[j]);
    for (std::size_t d = 0; d < data.dim(); ++d) {
      EXPECT_NEAR(inc.sums[j][d], scratch.sums[j][d], 1e-9);
      EXPECT_NEAR(inc.centers[j][d], scratch.centers[j][d], 1e-9);
    }
  }
}

TEST(Engine, SingleClusterConvergesInOneIteration) {
  const auto data = spkm::testing::random_dataset(3, 50, 30, 0.2);
  for (Variant v : kAllVariants) {
    const auto r = run_seeded(data, init_uniform(data, 1, 0).centroids, v);
    ASSERT_EQ(r.iterations.size(), 1u);
    EXPECT_TRUE(r.converged);
    for (auto a : r.assignments) EXPECT_EQ(a, 0u);
    DenseVector sum(data.dim());
    for (const auto& x : data.rows()) sum.add(x);
    const auto expect = normalize(sum);
    for (std::size_t d = 0; d < data.dim(); ++d) {
      EXPECT_NEAR(r.centroids.centers[0][d], expect[d], 1e-12);
    }
  }
}

TEST(Engine, SeededAtThePointsConvergesImmediately) {
  const auto data = spkm::testing::random_dataset(4, 25, 200, 0.05);
  for (Variant v : kAllVariants) {
    const auto r = run_seeded(data, init_uniform(data, 25, 2).centroids, v);
    EXPECT_TRUE(r.converged);
    // Iteration 1 places every point; iteration 2 confirms nothing moves.
    ASSERT_EQ(r.iterations.size(), 2u);
    EXPECT_EQ(r.iterations[1].reassignments, 0u);
    EXPECT_NEAR(r.objective, 25.0, 1e-12);
  }
}

TEST(Engine, AntipodalPairWithOneCluster) {
  const Dataset data({SparseVector({0, 1}, {0.6, 0.8}), SparseVector({0, 1}, {-0.6, -0.8})}, 2);
  const auto r = run_seeded(data, init_uniform(data, 1, 0).centroids, Variant::kStandard);
  EXPECT_NEAR(r.objective, 0.0, 1e-15);
  EXPECT_TRUE(r.converged);
}

TEST(Engine, CrossVariantEquality) {
  const auto data = spkm::testing::random_dataset(5, 500, 300, 0.03, true);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto seeded = init_uniform(data, 8, seed).centroids;
    const auto ref = run_seeded(data, seeded, Variant::kStandard);
    EXPECT_TRUE(ref.converged);
    for (Variant v : kAllVariants) expect_same_run(ref, run_seeded(data, seeded, v));
  }
}

TEST(Engine, CrossVariantEqualityWithSignedData) {
  const auto data = spkm::testing::random_dataset(6, 400, 20, 0.3);
  for (std::size_t k : {2u, 5u, 16u}) {
    const auto seeded = init_uniform(data, k, k).centroids;
    const auto ref = run_seeded(data, seeded, Variant::kStandard);
    for (Variant v : kAllVariants) expect_same_run(ref, run_seeded(data, seeded, v));
  }
}

TEST(Engine, CrossVariantEqualityUnderTies) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = tie_heavy_dataset(seed, 120);
    const auto seeded = init_uniform(data, 6, seed).centroids;
    const auto ref = run_seeded(data, seeded, Variant::kStandard);
    for (Variant v : kAllVariants) expect_same_run(ref, run_seeded(data, seeded, v));
  }
}

TEST(Engine, MatchesReferenceImplementation) {
  const auto data = spkm::testing::random_dataset(7, 300, 120, 0.05, true);
  const auto seeded = init_kmpp(data, 10, 1.0, 4).centroids;
  const auto ref = validation::reference_kmeans(data, seeded.centers);
  for (Variant v : kAllVariants) {
    const auto r = run_seeded(data, seeded, v);
    EXPECT_EQ(r.assignments, ref.assignments) << to_string(v);
    EXPECT_EQ(r.iterations.size(), ref.iterations);
    EXPECT_NEAR(r.objective, ref.objective, 1e-9 * ref.objective);
  }
}

TEST(Engine, CountersAndObjective) {
  const auto data = spkm::testing::random_dataset(8, 400, 150, 0.04, true);
  const std::size_t n = data.size(), k = 9;
  const auto seeded = init_uniform(data, k, 6).centroids;
  for (Variant v : kAllVariants) {
    const auto r = run_seeded(data, seeded, v);
    ASSERT_TRUE(r.converged);
    for (std::size_t t = 0; t < r.iterations.size(); ++t) {
      const auto& s = r.iterations[t];
      EXPECT_EQ(s.iteration, t + 1);
      if (v == Variant::kStandard || t == 0) {
        EXPECT_EQ(s.sim_count, n * k);
      } else {
        EXPECT_LE(s.sim_count, n * k);
      }
      EXPECT_EQ(s.cc_sim_count, uses_center_pruning(v) ? k * (k - 1) / 2 : 0u);
      if (t > 0) {
        EXPECT_GE(s.objective, r.iterations[t - 1].objective - 1e-12 * n);
      }
    }
    EXPECT_EQ(r.iterations.front().reassignments, n);
    EXPECT_EQ(r.iterations.back().reassignments, 0u);
    EXPECT_EQ(r.total_cc_sims(), uses_center_pruning(v) ? r.iterations.size() * k * (k - 1) / 2 : 0u);

    // The last recorded objective and the final one agree.
    EXPECT_NEAR(r.objective, r.iterations.back().objective, 1e-9);
    EXPECT_NEAR(r.objective, compute_objective(data, r.assignments, r.centroids), 0.0);

    // Squared Euclidean distortion on the sphere is 2n - 2 * objective.
    double euclid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = spkm::testing::densify(data[i], data.dim());
      const auto c = r.centroids.centers[r.assignments[i]].values();
      for (std::size_t d = 0; d < x.size(); ++d) euclid += (x[d] - c[d]) * (x[d] - c[d]);
    }
    EXPECT_NEAR(euclid, 2.0 * n - 2.0 * r.objective, 1e-9 * n);
  }
}

TEST(Engine, StableCentersCostNoSimilarities) {
  const auto data = spkm::testing::random_dataset(9, 300, 100, 0.05, true);
  const auto first = run_seeded(data, init_uniform(data, 6, 1).centroids, Variant::kStandard);
  const auto fixed = CentroidSet::from_centers(first.centroids.centers);
  for (Variant v : kAllVariants) {
    const auto r = run_seeded(data, fixed, v);
    ASSERT_EQ(r.iterations.size(), 2u);
    EXPECT_EQ(r.assignments, first.assignments);
    if (v != Variant::kStandard) {
      EXPECT_EQ(r.iterations[1].sim_count, 0u) << to_string(v);
    }
  }
}

TEST(Engine, AntipodalCentersSkipInnerLoop) {
  const Dataset data({SparseVector({0}, {1.0}), SparseVector({0}, {-1.0})}, 2);
  const auto seeded = centers_of({{1, 0}, {-1, 0}});
  for (Variant v : {Variant::kElkan, Variant::kHamerly}) {
    Recorder rec;
    EngineOptions options;
    options.observer = &rec;
    const auto r = run_seeded(data, seeded, v, options);
    ASSERT_EQ(r.iterations.size(), 2u);
    EXPECT_EQ(r.iterations[1].sim_count, 0u);
    ASSERT_EQ(rec.checks.size(), 2u);
    for (const auto& c : rec.checks) {
      EXPECT_EQ(c.kind, BoundCheck::Kind::kCenterAll);
      EXPECT_EQ(c.upper, 0.0);
      EXPECT_EQ(c.lower, 1.0);
    }
  }
}

TEST(Engine, EmptyClusterSurvives) {
  // All points lie near +e0; the cluster seeded at -e0 never wins.
  Rng rng(3);
  std::vector<SparseVector> rows;
  for (int i = 0; i < 40; ++i) rows.emplace_back(std::vector<Index>{0, 1}, std::vector<double>{1.0, 0.2 * rng.uniform01()});
  const Dataset data(std::move(rows), 2);
  const auto seeded = centers_of({{1, 0}, {-1, 0}, {1, 1}});
  for (Variant v : kAllVariants) {
    const auto r = run_seeded(data, seeded, v);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.centroids.counts[1], 0u);
    EXPECT_EQ(r.centroids.centers[1], seeded.centers[1]);
  }
}

TEST(Engine, IterationCapAndDeterminism) {
  const auto data = spkm::testing::random_dataset(10, 400, 60, 0.08);
  const auto seeded = init_uniform(data, 20, 3).centroids;
  EngineOptions capped;
  capped.max_iter = 1;
  const auto one = run_seeded(data, seeded, Variant::kElkan, capped);
  EXPECT_EQ(one.iterations.size(), 1u);
  EXPECT_FALSE(one.converged);

  const auto a = run_seeded(data, seeded, Variant::kHamerly);
  const auto b = run_seeded(data, seeded, Variant::kHamerly);
  EXPECT_EQ(a.assignments, b.assignments);
  ASSERT_EQ(a.iterations.size(), b.iterations.size());
  for (std::size_t t = 0; t < a.iterations.size(); ++t) {
    EXPECT_EQ(a.iterations[t].sim_count, b.iterations[t].sim_count);
    EXPECT_EQ(a.iterations[t].reassignments, b.iterations[t].reassignments);
    EXPECT_EQ(a.iterations[t].objective, b.iterations[t].objective);
  }
}

TEST(Engine, RejectsInfeasibleK) {
  const auto data = spkm::testing::random_dataset(11, 5, 10, 0.5);
  EXPECT_THROW(run(data, 6, Variant::kStandard, SeedConfig{}), InfeasibleError);
  auto c = init_uniform(data, 2, 0).centroids;
  EngineOptions bad;
  bad.max_iter = 0;
  EXPECT_THROW(SphericalKMeans(data, c, Variant::kStandard, bad), ConfigError);
}

TEST(Engine, LongRunsRecomputeSums) {
  // recompute_interval = 1 must give the same trajectory as the default.
  const auto data = spkm::testing::random_dataset(12, 600, 40, 0.1);
  const auto seeded = init_uniform(data, 15, 9).centroids;
  EngineOptions every;
  every.recompute_interval = 1;
  const auto a = run_seeded(data, seeded, Variant::kSimplifiedElkan, every);
  const auto b = run_seeded(data, seeded, Variant::kSimplifiedElkan);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_NEAR(a.objective, b.objective, 1e-9 * std::abs(a.objective));
}
