#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "spkm/centroids.hpp"
#include "spkm/init.hpp"
#include "spkm/sparse.hpp"

namespace spkm {

enum class Variant { kStandard, kElkan, kSimplifiedElkan, kHamerly, kSimplifiedHamerly };

inline constexpr Variant kAllVariants[] = {Variant::kStandard, Variant::kElkan,
                                           Variant::kSimplifiedElkan, Variant::kHamerly,
                                           Variant::kSimplifiedHamerly};

// "standard", "elkan", "simp_elkan", "hamerly", "simp_hamerly".
std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

bool uses_bound_matrix(Variant v);     // Elkan family: one upper bound per cluster
bool uses_center_pruning(Variant v);   // Elkan and Hamerly (not the simplified ones)

// How Hamerly-style variants refresh the single upper bound after the centers
// move. kNaiveMinDrift reuses the per-cluster update with the smallest drift,
// which is unsound; it exists only so audits can demonstrate the failure.
enum class HamerlyUpperRule { kSafe, kNaiveMinDrift };

using Assignment = std::uint32_t;
inline constexpr Assignment kUnassigned = static_cast<Assignment>(-1);

// a(i), l(i) and either u(i,j) (row-major n x k) or u(i).
struct BoundsState {
  std::vector<Assignment> assignment;
  std::vector<double> lower;
  std::vector<double> upper_matrix;
  std::vector<double> upper;
  std::size_t k = 0;

  double& u(std::size_t i, std::size_t j) { return upper_matrix[i * k + j]; }
  double u(std::size_t i, std::size_t j) const { return upper_matrix[i * k + j]; }
};

struct IterationStats {
  std::size_t iteration = 0;
  std::uint64_t sim_count = 0;     // point-center similarities
  std::uint64_t cc_sim_count = 0;  // center-center similarities
  std::uint64_t reassignments = 0;
  double objective = 0.0;          // sum_i <x(i), c(a(i))> after the center update
  std::uint64_t elapsed_ns = 0;
};

struct ClusteringResult {
  std::vector<Assignment> assignments;
  CentroidSet centroids;
  double objective = 0.0;
  std::vector<IterationStats> iterations;
  bool converged = false;

  std::uint64_t total_sims() const;
  std::uint64_t total_cc_sims() const;
};

// One bound test made by a pruned variant, reported before the decision is
// acted on. Used by the audit harness to compare bounds against exact values.
struct BoundCheck {
  enum class Kind {
    kPerCluster,  // l(i) vs u(i,j)
    kSingle,      // l(i) vs u(i)
    kCenterPair,  // cc(a,j) <= l(i) held: skipped cluster j
    kCenterAll,   // s(a) < l(i) held: skipped every other cluster
  };
  Kind kind;
  std::size_t point;
  std::size_t assigned;
  std::size_t cluster;  // kPerCluster / kCenterPair only
  double lower;
  double upper;         // u(i,j), u(i), cc(a,j) or s(a)
};

class BoundObserver {
 public:
  virtual ~BoundObserver() = default;
  // Centers are fixed from here until the next call.
  virtual void begin_assignment(const CentroidSet& centroids) = 0;
  virtual void on_check(const BoundCheck& check) = 0;
};

struct EngineOptions {
  std::size_t max_iter = 100;
  // Member sums are rebuilt from scratch every this many iterations.
  std::size_t recompute_interval = 50;
  HamerlyUpperRule hamerly_rule = HamerlyUpperRule::kSafe;
  BoundObserver* observer = nullptr;  // debug audits only
};

struct FullAssignment {
  std::vector<Assignment> assignment;
  std::vector<double> best;
  std::vector<double> second;  // -1 when k == 1
};

// All k similarities per point; ties go to the lowest cluster index.
// Adds n*k to *sim_count when given.
FullAssignment assign_full(const Dataset& data, const CentroidSet& centroids,
                           std::uint64_t* sim_count = nullptr);

// Moves changed points between member sums (old[i] == kUnassigned adds only),
// then renormalizes touched clusters and sets drift. With `full_recompute`
// all sums are rebuilt from `current` and every center is refreshed.
// Empty or zero-sum clusters keep their center with drift 1.
void update_centers(const Dataset& data, std::span<const Assignment> old,
                    std::span<const Assignment> current, CentroidSet& centroids,
                    bool full_recompute = false);

// sum_i <x(i), c(a(i))>.
double compute_objective(const Dataset& data, std::span<const Assignment> assignments,
                         const CentroidSet& centroids);

// Drives one clustering run iteration by iteration.
class SphericalKMeans {
 public:
  SphericalKMeans(const Dataset& data, CentroidSet seeded, Variant variant,
                  EngineOptions options = {});

  // Runs one assign + update iteration. No-op once done().
  const IterationStats& step();
  bool done() const { return done_; }
  bool converged() const { return converged_; }

  const CentroidSet& centroids() const { return centroids_; }
  const BoundsState& bounds() const { return bounds_; }
  std::span<const IterationStats> history() const { return history_; }

  // Steps until done, rebuilds sums, and packages the result.
  ClusteringResult run();

 private:
  void compute_center_similarities(IterationStats& stats);
  void update_bounds();
  void initial_assignment(IterationStats& stats);
  void assign_standard(IterationStats& stats);
  void assign_elkan(IterationStats& stats, bool center_pruning);
  void assign_hamerly(IterationStats& stats, bool center_pruning);
  double sum_objective() const;

  const Dataset& data_;
  Variant variant_;
  EngineOptions options_;
  CentroidSet centroids_;
  BoundsState bounds_;
  std::vector<double> cc_;  // k x k half-angle Cosines
  std::vector<double> s_;   // max_{j != i} cc(i, j)
  std::vector<IterationStats> history_;
  bool done_ = false;
  bool converged_ = false;
};

ClusteringResult run(const Dataset& data, std::size_t k, Variant variant, const SeedConfig& seeding,
                     std::size_t max_iter = 100);

}  // namespace spkm
