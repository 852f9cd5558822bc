#pragma once

// Independent oracles and audit harnesses. Nothing here is used by the
// engine; brute_force_assign and reference_kmeans deliberately avoid the
// engine's code paths.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spkm/engine.hpp"
#include "spkm/io.hpp"
#include "spkm/random.hpp"
#include "spkm/sparse.hpp"

namespace spkm::validation {

inline constexpr double kBoundTolerance = 1e-9;

// cos(arccos a + arccos b), the trigonometric form of the lower bound.
double arccos_triangle_oracle(double a, double b);

// Dense-expansion argmax, lowest index on ties.
std::vector<Assignment> brute_force_assign(const Dataset& data, const CentroidSet& centroids);

// Plain Lloyd-style spherical k-means recomputing every center from scratch
// each iteration. Same stopping rule as the engine.
struct ReferenceResult {
  std::vector<Assignment> assignments;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};
ReferenceResult reference_kmeans(const Dataset& data, std::span<const DenseVector> seeds,
                                 std::size_t max_iter = 100);

struct AuditReport {
  double max_lower_violation = 0.0;  // max of l(i) - <x(i), c(a(i))>
  double max_upper_violation = 0.0;  // max of exact - claimed upper bound
  std::uint64_t decisions = 0;
  bool pass = true;
};

// Recomputes exact similarities at every bound check the engine reports.
class BoundAuditor : public BoundObserver {
 public:
  explicit BoundAuditor(const Dataset& data);
  void begin_assignment(const CentroidSet& centroids) override;
  void on_check(const BoundCheck& check) override;
  AuditReport report() const;

 private:
  const std::vector<double>& exact(std::size_t point);

  const Dataset& data_;
  const CentroidSet* centroids_ = nullptr;
  std::uint64_t epoch_ = 0;
  std::vector<std::uint64_t> stamp_;
  std::vector<std::vector<double>> cache_;
  AuditReport report_;
};

// Runs `variant` to convergence from uniform seeding under a BoundAuditor.
AuditReport audit_bounds(const Dataset& data, Variant variant, std::size_t k, std::uint64_t seed,
                         HamerlyUpperRule rule = HamerlyUpperRule::kSafe,
                         std::size_t max_iter = 100);
AuditReport audit_bounds(const Dataset& data, CentroidSet seeded, Variant variant,
                         EngineOptions options);

struct FuzzReport {
  std::size_t triples = 0;
  double max_lower_excess = 0.0;     // max of bound - exact
  double max_upper_deficit = 0.0;    // max of exact - bound
  double max_oracle_gap = 0.0;       // |lower - arccos oracle| away from the poles
  double max_oracle_gap_pole = 0.0;  // same, where |a| or |b| > 1 - 1e-6
  bool pass = true;
};

FuzzReport fuzz_triangle(std::size_t n_triples, std::size_t dim, std::uint64_t seed);

std::vector<double> random_unit_vector(Rng& rng, std::size_t dim);

// Synthetic corpora. All draws come from the portable Rng.

// Topic-structured term counts: every row draws its terms mostly from one of
// `topics` disjoint vocabulary blocks. Expected non-zeros per row is
// density * dim (at least 2).
struct TopicCorpusSpec {
  std::size_t rows = 200;
  std::size_t dim = 256;
  double density = 0.01;
  std::size_t topics = 20;
  double topic_affinity = 0.8;
  std::uint64_t seed = 0;
};
Corpus make_topic_corpus(const TopicCorpusSpec& spec);

// Rows with i.i.d. standard normal entries (dense).
Corpus make_gaussian_corpus(std::size_t rows, std::size_t dim, std::uint64_t seed);

// Fixture grid used by the acceptance suite: entry f uses
// n = {200, 2000}, dim = {256, 5000}, k = {2, 10, 20, 50} cycled, seed 1000 + f.
struct GridFixture {
  std::size_t rows;
  std::size_t dim;
  std::size_t k;
  std::uint64_t seed;
};
GridFixture grid_fixture(std::size_t f);

}  // namespace spkm::validation
