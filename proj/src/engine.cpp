#include "spkm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "spkm/errors.hpp"
#include "spkm/geometry.hpp"

namespace spkm {

using geometry::clamp_cos;

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kStandard:
      return "standard";
    case Variant::kElkan:
      return "elkan";
    case Variant::kSimplifiedElkan:
      return "simp_elkan";
    case Variant::kHamerly:
      return "hamerly";
    case Variant::kSimplifiedHamerly:
      return "simp_hamerly";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (auto v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  throw ConfigError("--variant: unknown variant '" + std::string(name) +
                    "' (expected standard, elkan, simp_elkan, hamerly or simp_hamerly)");
}

bool uses_bound_matrix(Variant v) {
  return v == Variant::kElkan || v == Variant::kSimplifiedElkan;
}

bool uses_center_pruning(Variant v) { return v == Variant::kElkan || v == Variant::kHamerly; }

std::uint64_t ClusteringResult::total_sims() const {
  std::uint64_t t = 0;
  for (const auto& s : iterations) t += s.sim_count;
  return t;
}

std::uint64_t ClusteringResult::total_cc_sims() const {
  std::uint64_t t = 0;
  for (const auto& s : iterations) t += s.cc_sim_count;
  return t;
}

namespace {

// Cluster j displaces the current best (value, index) pair under the global
// order: larger similarity first, then lower cluster index.
inline bool beats(double sim, std::size_t j, double best, std::size_t best_j) {
  return sim > best || (sim == best && j < best_j);
}

// A bound `upper` on cluster j proves j cannot beat the assigned cluster a
// whose similarity is at least `lower`. Equality only suffices when j would
// lose the tie anyway.
inline bool pruned_by(double upper, double lower, std::size_t j, std::size_t a) {
  return upper < lower || (upper <= lower && j > a);
}

inline double similarity(const SparseVector& x, const DenseVector& c) {
  return dot_unchecked(x, c.values());
}

// Below this norm a member sum is treated as having cancelled out.
constexpr double kDegenerateNorm = 1e-12;

}  // namespace

FullAssignment assign_full(const Dataset& data, const CentroidSet& centroids,
                           std::uint64_t* sim_count) {
  const std::size_t n = data.size();
  const std::size_t k = centroids.k();
  FullAssignment out;
  out.assignment.resize(n);
  out.best.resize(n);
  out.second.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best_j = 0;
    double best = similarity(data[i], centroids.centers[0]);
    double second = -1.0;
    for (std::size_t j = 1; j < k; ++j) {
      const double s = similarity(data[i], centroids.centers[j]);
      if (s > best) {
        second = std::max(second, best);
        best = s;
        best_j = j;
      } else {
        second = std::max(second, s);
      }
    }
    out.assignment[i] = static_cast<Assignment>(best_j);
    out.best[i] = best;
    out.second[i] = second;
  }
  if (sim_count != nullptr) *sim_count += static_cast<std::uint64_t>(n) * k;
  return out;
}

void update_centers(const Dataset& data, std::span<const Assignment> old,
                    std::span<const Assignment> current, CentroidSet& centroids,
                    bool full_recompute) {
  const std::size_t k = centroids.k();
  std::vector<bool> dirty(k, full_recompute);

  if (full_recompute) {
    for (auto& s : centroids.sums) s.set_zero();
    std::fill(centroids.counts.begin(), centroids.counts.end(), 0);
    for (std::size_t i = 0; i < current.size(); ++i) {
      centroids.sums[current[i]].add(data[i]);
      ++centroids.counts[current[i]];
    }
  } else {
    for (std::size_t i = 0; i < current.size(); ++i) {
      const Assignment from = old.empty() ? kUnassigned : old[i];
      const Assignment to = current[i];
      if (from == to) continue;
      if (from != kUnassigned) {
        centroids.sums[from].subtract(data[i]);
        --centroids.counts[from];
        dirty[from] = true;
      }
      centroids.sums[to].add(data[i]);
      ++centroids.counts[to];
      dirty[to] = true;
    }
  }

  for (std::size_t j = 0; j < k; ++j) {
    centroids.prev_centers[j] = centroids.centers[j];
    centroids.drift[j] = 1.0;
    if (!dirty[j] || centroids.counts[j] == 0) continue;
    const double norm = centroids.sums[j].norm();
    if (norm < kDegenerateNorm) continue;
    auto dst = centroids.centers[j].values();
    const auto src = centroids.sums[j].values();
    for (std::size_t t = 0; t < dst.size(); ++t) dst[t] = src[t] / norm;
    centroids.drift[j] = clamp_cos(dot(centroids.centers[j], centroids.prev_centers[j]));
  }
}

double compute_objective(const Dataset& data, std::span<const Assignment> assignments,
                         const CentroidSet& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    total += dot(data[i], centroids.centers[assignments[i]]);
  }
  return total;
}

SphericalKMeans::SphericalKMeans(const Dataset& data, CentroidSet seeded, Variant variant,
                                 EngineOptions options)
    : data_(data), variant_(variant), options_(options), centroids_(std::move(seeded)) {
  const std::size_t k = centroids_.k();
  if (k < 1 || k > data.size()) {
    throw InfeasibleError("k = " + std::to_string(k) + " is infeasible for " +
                          std::to_string(data.size()) + " rows");
  }
  if (centroids_.dim() != data.dim()) {
    throw DimensionMismatchError("centers have dimension " + std::to_string(centroids_.dim()) +
                                 ", data has " + std::to_string(data.dim()));
  }
  if (options_.max_iter < 1) throw ConfigError("--max-iter: must be >= 1");
  if (options_.recompute_interval < 1) options_.recompute_interval = 1;
  bounds_.k = k;
  bounds_.assignment.assign(data.size(), kUnassigned);
}

void SphericalKMeans::compute_center_similarities(IterationStats& stats) {
  const std::size_t k = centroids_.k();
  cc_.assign(k * k, 0.0);
  s_.assign(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    cc_[a * k + a] = 1.0;
    for (std::size_t b = a + 1; b < k; ++b) {
      const double c =
          geometry::half_angle_cc(clamp_cos(dot(centroids_.centers[a], centroids_.centers[b])));
      cc_[a * k + b] = c;
      cc_[b * k + a] = c;
      s_[a] = std::max(s_[a], c);
      s_[b] = std::max(s_[b], c);
    }
  }
  stats.cc_sim_count += static_cast<std::uint64_t>(k) * (k - 1) / 2;
}

void SphericalKMeans::update_bounds() {
  const std::size_t n = data_.size();
  const std::size_t k = centroids_.k();
  const auto& p = centroids_.drift;

  if (uses_bound_matrix(variant_)) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = bounds_.assignment[i];
      bounds_.lower[i] = geometry::update_lower_bound(bounds_.lower[i], p[a]);
      double* row = &bounds_.upper_matrix[i * k];
      for (std::size_t j = 0; j < k; ++j) {
        if (j == a || p[j] == 1.0) continue;
        row[j] = geometry::update_upper_bound(row[j], p[j]);
      }
    }
    return;
  }

  // Smallest and second smallest drift, and the owner of the smallest.
  double p_min = 1.0;
  double p_min2 = 1.0;
  std::size_t owner = k;
  for (std::size_t j = 0; j < k; ++j) {
    if (p[j] < p_min) {
      p_min2 = p_min;
      p_min = p[j];
      owner = j;
    } else if (p[j] < p_min2) {
      p_min2 = p[j];
    }
  }
  const bool naive = options_.hamerly_rule == HamerlyUpperRule::kNaiveMinDrift;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = bounds_.assignment[i];
    bounds_.lower[i] = geometry::update_lower_bound(bounds_.lower[i], p[a]);
    const double worst = (a == owner) ? p_min2 : p_min;
    bounds_.upper[i] = naive ? geometry::cos_upper_bound(bounds_.upper[i], worst)
                             : geometry::hamerly_upper_update(bounds_.upper[i], worst);
  }
}

void SphericalKMeans::initial_assignment(IterationStats& stats) {
  if (!uses_bound_matrix(variant_)) {
    FullAssignment full = assign_full(data_, centroids_, &stats.sim_count);
    bounds_.assignment = std::move(full.assignment);
    bounds_.lower = std::move(full.best);
    if (variant_ != Variant::kStandard) bounds_.upper = std::move(full.second);
    return;
  }
  // Same pass as assign_full, keeping every similarity as the initial u(i,j).
  const std::size_t n = data_.size();
  const std::size_t k = centroids_.k();
  bounds_.upper_matrix.resize(n * k);
  bounds_.lower.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const double s = similarity(data_[i], centroids_.centers[j]);
      bounds_.u(i, j) = s;
      if (s > bounds_.u(i, best_j)) best_j = j;
    }
    bounds_.assignment[i] = static_cast<Assignment>(best_j);
    bounds_.lower[i] = bounds_.u(i, best_j);
  }
  stats.sim_count += static_cast<std::uint64_t>(n) * k;
}

void SphericalKMeans::assign_standard(IterationStats& stats) {
  FullAssignment full = assign_full(data_, centroids_, &stats.sim_count);
  bounds_.assignment = std::move(full.assignment);
  bounds_.lower = std::move(full.best);
}

void SphericalKMeans::assign_elkan(IterationStats& stats, bool center_pruning) {
  const std::size_t n = data_.size();
  const std::size_t k = centroids_.k();
  BoundObserver* obs = options_.observer;
  std::uint64_t sims = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const SparseVector& x = data_[i];
    std::size_t a = bounds_.assignment[i];
    double l = bounds_.lower[i];
    double* u = &bounds_.upper_matrix[i * k];

    if (center_pruning && l >= 0.0 && s_[a] < l) {
      if (obs) obs->on_check({BoundCheck::Kind::kCenterAll, i, a, a, l, s_[a]});
      continue;
    }

    bool tight = false;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == a) continue;
      if (center_pruning && l >= 0.0 && pruned_by(cc_[a * k + j], l, j, a)) {
        if (obs) obs->on_check({BoundCheck::Kind::kCenterPair, i, a, j, l, cc_[a * k + j]});
        continue;
      }
      if (obs) obs->on_check({BoundCheck::Kind::kPerCluster, i, a, j, l, u[j]});
      if (pruned_by(u[j], l, j, a)) continue;

      if (!tight) {
        l = similarity(x, centroids_.centers[a]);
        ++sims;
        tight = true;
        if (center_pruning && l >= 0.0 && pruned_by(cc_[a * k + j], l, j, a)) {
          if (obs) obs->on_check({BoundCheck::Kind::kCenterPair, i, a, j, l, cc_[a * k + j]});
          continue;
        }
        if (obs) obs->on_check({BoundCheck::Kind::kPerCluster, i, a, j, l, u[j]});
        if (pruned_by(u[j], l, j, a)) continue;
      }

      const double s = similarity(x, centroids_.centers[j]);
      ++sims;
      u[j] = s;
      if (beats(s, j, l, a)) {
        u[a] = l;
        a = j;
        l = s;
      }
    }
    bounds_.assignment[i] = static_cast<Assignment>(a);
    bounds_.lower[i] = l;
  }
  stats.sim_count += sims;
}

void SphericalKMeans::assign_hamerly(IterationStats& stats, bool center_pruning) {
  const std::size_t n = data_.size();
  const std::size_t k = centroids_.k();
  BoundObserver* obs = options_.observer;
  std::uint64_t sims = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const SparseVector& x = data_[i];
    const std::size_t a = bounds_.assignment[i];
    double& l = bounds_.lower[i];
    double& u = bounds_.upper[i];

    if (center_pruning && l >= 0.0 && s_[a] < l) {
      if (obs) obs->on_check({BoundCheck::Kind::kCenterAll, i, a, a, l, s_[a]});
      continue;
    }
    // A single bound does not know which cluster attains it, so ties are
    // never pruned.
    if (obs) obs->on_check({BoundCheck::Kind::kSingle, i, a, a, l, u});
    if (u < l) continue;

    l = similarity(x, centroids_.centers[a]);
    ++sims;
    if (obs) obs->on_check({BoundCheck::Kind::kSingle, i, a, a, l, u});
    if (u < l) continue;

    std::size_t best_j = a;
    double best = l;
    double second = -1.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == a) continue;
      const double s = similarity(x, centroids_.centers[j]);
      ++sims;
      if (beats(s, j, best, best_j)) {
        second = std::max(second, best);
        best = s;
        best_j = j;
      } else {
        second = std::max(second, s);
      }
    }
    bounds_.assignment[i] = static_cast<Assignment>(best_j);
    l = best;
    u = second;
  }
  stats.sim_count += sims;
}

double SphericalKMeans::sum_objective() const {
  // <sum_j, c_j> equals the sum of member similarities to c_j.
  double total = 0.0;
  for (std::size_t j = 0; j < centroids_.k(); ++j) {
    if (centroids_.counts[j] == 0) continue;
    total += dot(centroids_.sums[j], centroids_.centers[j]);
  }
  return total;
}

const IterationStats& SphericalKMeans::step() {
  if (done_) return history_.back();
  const auto t0 = std::chrono::steady_clock::now();
  IterationStats stats;
  stats.iteration = history_.size() + 1;
  const std::vector<Assignment> before = bounds_.assignment;

  if (uses_center_pruning(variant_)) compute_center_similarities(stats);

  if (stats.iteration == 1) {
    initial_assignment(stats);
  } else {
    if (options_.observer != nullptr) options_.observer->begin_assignment(centroids_);
    switch (variant_) {
      case Variant::kStandard:
        assign_standard(stats);
        break;
      case Variant::kElkan:
      case Variant::kSimplifiedElkan:
        update_bounds();
        assign_elkan(stats, variant_ == Variant::kElkan);
        break;
      case Variant::kHamerly:
      case Variant::kSimplifiedHamerly:
        update_bounds();
        assign_hamerly(stats, variant_ == Variant::kHamerly);
        break;
    }
  }

  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i] != bounds_.assignment[i]) ++stats.reassignments;
  }

  if (stats.reassignments == 0) {
    done_ = true;
    converged_ = true;
  } else {
    const bool full = stats.iteration % options_.recompute_interval == 0;
    if (stats.iteration == 1) {
      update_centers(data_, {}, bounds_.assignment, centroids_, full);
    } else {
      update_centers(data_, before, bounds_.assignment, centroids_, full);
    }
    // With a single cluster no point can ever be reassigned.
    if (centroids_.k() == 1) {
      done_ = true;
      converged_ = true;
    }
  }
  stats.objective = sum_objective();
  if (!done_ && stats.iteration >= options_.max_iter) done_ = true;

  stats.elapsed_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
          .count());
  history_.push_back(stats);
  return history_.back();
}

ClusteringResult SphericalKMeans::run() {
  while (!done_) step();
  // Rebuild sums from scratch so the reported centers carry no incremental
  // rounding drift.
  update_centers(data_, {}, bounds_.assignment, centroids_, /*full_recompute=*/true);
  ClusteringResult result;
  result.assignments = bounds_.assignment;
  result.centroids = centroids_;
  result.objective = compute_objective(data_, result.assignments, centroids_);
  result.iterations = history_;
  result.converged = converged_;
  return result;
}

ClusteringResult run(const Dataset& data, std::size_t k, Variant variant, const SeedConfig& seeding,
                     std::size_t max_iter) {
  Seeding seeded = seed_centers(data, k, seeding);
  EngineOptions options;
  options.max_iter = max_iter;
  return SphericalKMeans(data, std::move(seeded.centroids), variant, options).run();
}

}  // namespace spkm
