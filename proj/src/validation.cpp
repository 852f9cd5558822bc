#include "spkm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spkm/geometry.hpp"

namespace spkm::validation {

namespace {

std::vector<double> densify(const SparseVector& x, std::size_t dim) {
  std::vector<double> d(dim, 0.0);
  const auto idx = x.indices();
  const auto val = x.values();
  for (std::size_t t = 0; t < idx.size(); ++t) d[idx[t]] = val[t];
  return d;
}

double dense_dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double arccos_triangle_oracle(double a, double b) {
  return std::cos(std::acos(std::clamp(a, -1.0, 1.0)) + std::acos(std::clamp(b, -1.0, 1.0)));
}

std::vector<Assignment> brute_force_assign(const Dataset& data, const CentroidSet& centroids) {
  std::vector<Assignment> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = densify(data[i], data.dim());
    std::size_t best_j = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.k(); ++j) {
      const double s = dense_dot(x, centroids.centers[j].values());
      if (s > best) {
        best = s;
        best_j = j;
      }
    }
    out[i] = static_cast<Assignment>(best_j);
  }
  return out;
}

ReferenceResult reference_kmeans(const Dataset& data, std::span<const DenseVector> seeds,
                                 std::size_t max_iter) {
  const std::size_t n = data.size();
  const std::size_t k = seeds.size();
  const std::size_t dim = data.dim();
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = densify(data[i], dim);
  std::vector<std::vector<double>> centers(k);
  for (std::size_t j = 0; j < k; ++j) {
    centers[j].assign(seeds[j].values().begin(), seeds[j].values().end());
  }

  ReferenceResult r;
  r.assignments.assign(n, kUnassigned);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    r.iterations = it;
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best_j = 0;
      double best = dense_dot(rows[i], centers[0]);
      for (std::size_t j = 1; j < k; ++j) {
        const double s = dense_dot(rows[i], centers[j]);
        if (s > best) {
          best = s;
          best_j = j;
        }
      }
      if (r.assignments[i] != best_j) ++changed;
      r.assignments[i] = static_cast<Assignment>(best_j);
    }
    if (changed == 0) {
      r.converged = true;
      break;
    }
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> sum(dim, 0.0);
      std::size_t members = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (r.assignments[i] != j) continue;
        ++members;
        for (std::size_t t = 0; t < dim; ++t) sum[t] += rows[i][t];
      }
      const double norm = std::sqrt(dense_dot(sum, sum));
      if (members == 0 || norm < 1e-12) continue;
      for (std::size_t t = 0; t < dim; ++t) centers[j][t] = sum[t] / norm;
    }
    if (k == 1) {
      r.converged = true;
      break;
    }
  }
  r.objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) r.objective += dense_dot(rows[i], centers[r.assignments[i]]);
  return r;
}

BoundAuditor::BoundAuditor(const Dataset& data)
    : data_(data), stamp_(data.size(), 0), cache_(data.size()) {}

void BoundAuditor::begin_assignment(const CentroidSet& centroids) {
  centroids_ = &centroids;
  ++epoch_;
}

const std::vector<double>& BoundAuditor::exact(std::size_t point) {
  if (stamp_[point] != epoch_) {
    auto& c = cache_[point];
    c.resize(centroids_->k());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = dot(data_[point], centroids_->centers[j]);
    stamp_[point] = epoch_;
  }
  return cache_[point];
}

void BoundAuditor::on_check(const BoundCheck& check) {
  const auto& sims = exact(check.point);
  ++report_.decisions;
  report_.max_lower_violation =
      std::max(report_.max_lower_violation, check.lower - sims[check.assigned]);

  double upper_gap = 0.0;
  switch (check.kind) {
    case BoundCheck::Kind::kPerCluster:
      upper_gap = sims[check.cluster] - check.upper;
      break;
    case BoundCheck::Kind::kSingle:
      for (std::size_t j = 0; j < sims.size(); ++j) {
        if (j != check.assigned) upper_gap = std::max(upper_gap, sims[j] - check.upper);
      }
      break;
    case BoundCheck::Kind::kCenterPair:
      // The half-angle test proves <x, c(j)> <= l(i).
      upper_gap = sims[check.cluster] - check.lower;
      break;
    case BoundCheck::Kind::kCenterAll:
      for (std::size_t j = 0; j < sims.size(); ++j) {
        if (j != check.assigned) upper_gap = std::max(upper_gap, sims[j] - check.lower);
      }
      break;
  }
  report_.max_upper_violation = std::max(report_.max_upper_violation, upper_gap);
  report_.pass = report_.max_lower_violation <= kBoundTolerance &&
                 report_.max_upper_violation <= kBoundTolerance;
}

AuditReport BoundAuditor::report() const { return report_; }

AuditReport audit_bounds(const Dataset& data, CentroidSet seeded, Variant variant,
                         EngineOptions options) {
  BoundAuditor auditor(data);
  options.observer = &auditor;
  SphericalKMeans(data, std::move(seeded), variant, options).run();
  return auditor.report();
}

AuditReport audit_bounds(const Dataset& data, Variant variant, std::size_t k, std::uint64_t seed,
                         HamerlyUpperRule rule, std::size_t max_iter) {
  EngineOptions options;
  options.max_iter = max_iter;
  options.hamerly_rule = rule;
  return audit_bounds(data, init_uniform(data, k, seed).centroids, variant, options);
}

std::vector<double> random_unit_vector(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  double norm = 0.0;
  do {
    for (auto& x : v) x = rng.normal();
    norm = std::sqrt(dense_dot(v, v));
  } while (norm == 0.0);
  for (auto& x : v) x /= norm;
  return v;
}

FuzzReport fuzz_triangle(std::size_t n_triples, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  FuzzReport r;
  r.triples = n_triples;
  for (std::size_t t = 0; t < n_triples; ++t) {
    const auto x = random_unit_vector(rng, dim);
    const auto y = random_unit_vector(rng, dim);
    const auto z = random_unit_vector(rng, dim);
    const double a = std::clamp(dense_dot(x, z), -1.0, 1.0);
    const double b = std::clamp(dense_dot(z, y), -1.0, 1.0);
    const double exact = dense_dot(x, y);
    const double lo = geometry::cos_lower_bound(a, b);
    const double hi = geometry::cos_upper_bound(a, b);
    r.max_lower_excess = std::max(r.max_lower_excess, lo - exact);
    r.max_upper_deficit = std::max(r.max_upper_deficit, exact - hi);
    const double gap = std::abs(lo - arccos_triangle_oracle(a, b));
    if (std::max(std::abs(a), std::abs(b)) > 1.0 - 1e-6) {
      r.max_oracle_gap_pole = std::max(r.max_oracle_gap_pole, gap);
    } else {
      r.max_oracle_gap = std::max(r.max_oracle_gap, gap);
    }
  }
  r.pass = r.max_lower_excess <= kBoundTolerance && r.max_upper_deficit <= kBoundTolerance &&
           r.max_oracle_gap <= 1e-9 && r.max_oracle_gap_pole <= 1e-6;
  return r;
}

}  // namespace spkm::validation
