#include "spkm/init.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "spkm/errors.hpp"
#include "spkm/random.hpp"

namespace spkm {

CentroidSet CentroidSet::from_centers(std::vector<DenseVector> centers) {
  CentroidSet c;
  const std::size_t k = centers.size();
  const std::size_t dim = k == 0 ? 0 : centers.front().dim();
  c.prev_centers = centers;
  c.centers = std::move(centers);
  c.sums.assign(k, DenseVector(dim));
  c.counts.assign(k, 0);
  c.drift.assign(k, 1.0);
  return c;
}

std::string_view to_string(InitMethod m) {
  switch (m) {
    case InitMethod::kUniform:
      return "uniform";
    case InitMethod::kKmpp:
      return "kmpp";
    case InitMethod::kAfkmc2:
      return "afkmc2";
  }
  return "?";
}

InitMethod parse_init_method(std::string_view name) {
  if (name == "uniform") return InitMethod::kUniform;
  if (name == "kmpp") return InitMethod::kKmpp;
  if (name == "afkmc2") return InitMethod::kAfkmc2;
  throw ConfigError("--init: unknown method '" + std::string(name) +
                    "' (expected uniform, kmpp or afkmc2)");
}

void SeedConfig::validate() const {
  if (!(alpha >= 1.0 && alpha <= 2.0)) {
    throw ConfigError("--alpha: must lie in [1, 2], got " + std::to_string(alpha));
  }
  if (chain_length < 1) throw ConfigError("--chain-length: must be >= 1");
}

namespace {

void check_k(const Dataset& data, std::size_t k) {
  if (k < 1 || k > data.size()) {
    throw InfeasibleError("k = " + std::to_string(k) + " is infeasible for " +
                          std::to_string(data.size()) + " rows");
  }
}

// Uniform choice among rows not yet chosen.
std::size_t pick_unchosen(Rng& rng, const std::vector<bool>& chosen) {
  const auto remaining =
      static_cast<std::size_t>(std::count(chosen.begin(), chosen.end(), false));
  std::size_t target = rng.uniform_index(remaining);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (chosen[i]) continue;
    if (target-- == 0) return i;
  }
  return chosen.size();  // unreachable when remaining > 0
}

// Running max similarity of every row to the centers chosen so far, updated
// lazily: `seen[i]` centers have been folded into `best[i]`.
class MaxSimilarityCache {
 public:
  explicit MaxSimilarityCache(const Dataset& data)
      : data_(data), best_(data.size(), -1.0), seen_(data.size(), 0) {}

  void add_center(std::size_t row) { centers_.push_back(row); }

  double max_similarity(std::size_t i) {
    while (seen_[i] < centers_.size()) {
      best_[i] = std::max(best_[i], dot(data_[i], data_[centers_[seen_[i]]]));
      ++seen_[i];
    }
    return best_[i];
  }

 private:
  const Dataset& data_;
  std::vector<std::size_t> centers_;
  std::vector<double> best_;
  std::vector<std::size_t> seen_;
};

}  // namespace

CentroidSet centroids_from_rows(const Dataset& data, std::span<const std::size_t> rows) {
  std::vector<DenseVector> centers;
  centers.reserve(rows.size());
  for (auto r : rows) centers.push_back(DenseVector::from_sparse(data[r], data.dim()));
  return CentroidSet::from_centers(std::move(centers));
}

Seeding init_uniform(const Dataset& data, std::size_t k, std::uint64_t seed) {
  check_k(data, k);
  Rng rng(seed);
  std::vector<std::size_t> perm(data.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Partial Fisher-Yates.
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t j = t + rng.uniform_index(data.size() - t);
    std::swap(perm[t], perm[j]);
  }
  perm.resize(k);
  Seeding s{perm, centroids_from_rows(data, perm)};
  return s;
}

Seeding init_kmpp(const Dataset& data, std::size_t k, double alpha, std::uint64_t seed,
                  const WeightObserver& observer) {
  check_k(data, k);
  SeedConfig{InitMethod::kKmpp, alpha, 1, seed}.validate();
  const std::size_t n = data.size();
  Rng rng(seed);

  std::vector<std::size_t> rows;
  std::vector<bool> chosen(n, false);
  std::vector<double> best(n, -1.0);
  std::vector<double> weights(n, 0.0);

  auto add = [&](std::size_t r) {
    rows.push_back(r);
    chosen[r] = true;
    for (std::size_t i = 0; i < n; ++i) best[i] = std::max(best[i], dot(data[i], data[r]));
  };

  add(rng.uniform_index(n));
  while (rows.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = chosen[i] ? 0.0 : std::max(0.0, alpha - best[i]);
      total += weights[i];
    }
    if (observer) observer(rows.size(), weights);

    std::size_t pick = n;
    if (total > 0.0) {
      const double r = rng.uniform01() * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (weights[i] <= 0.0) continue;
        cum += weights[i];
        pick = i;
        if (cum > r) break;
      }
    } else {
      pick = pick_unchosen(rng, chosen);
    }
    add(pick);
  }
  return Seeding{rows, centroids_from_rows(data, rows)};
}

Seeding init_afkmc2(const Dataset& data, std::size_t k, double alpha, std::size_t chain_length,
                    std::uint64_t seed) {
  check_k(data, k);
  SeedConfig{InitMethod::kAfkmc2, alpha, chain_length, seed}.validate();
  const std::size_t n = data.size();
  Rng rng(seed);

  std::vector<std::size_t> rows;
  std::vector<bool> chosen(n, false);
  MaxSimilarityCache cache(data);
  auto add = [&](std::size_t r) {
    rows.push_back(r);
    chosen[r] = true;
    cache.add_center(r);
  };
  auto dissimilarity = [&](std::size_t i) {
    return chosen[i] ? 0.0 : std::max(0.0, alpha - cache.max_similarity(i));
  };

  add(rng.uniform_index(n));
  if (k == 1) return Seeding{rows, centroids_from_rows(data, rows)};

  // Proposal q(i) = d(i) / (2 sum d) + 1 / (2n), d taken w.r.t. the first center.
  std::vector<double> q(n);
  double dsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = std::max(0.0, alpha - dot(data[i], data[rows.front()]));
    dsum += q[i];
  }
  const double uniform_part = 0.5 / static_cast<double>(n);
  for (auto& v : q) v = dsum > 0.0 ? 0.5 * v / dsum + uniform_part : 1.0 / static_cast<double>(n);
  std::vector<double> cdf(n);
  std::partial_sum(q.begin(), q.end(), cdf.begin());
  auto propose = [&]() {
    const double r = rng.uniform01() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), n - 1);
  };

  while (rows.size() < k) {
    std::size_t x = propose();
    double dx = dissimilarity(x);
    for (std::size_t step = 1; step < chain_length; ++step) {
      const std::size_t y = propose();
      const double dy = dissimilarity(y);
      // Accept with probability min(1, dy q(x) / (dx q(y))), division-free.
      const double u = rng.uniform01();
      if (dy * q[x] > u * dx * q[y]) {
        x = y;
        dx = dy;
      }
    }
    if (chosen[x]) x = pick_unchosen(rng, chosen);
    add(x);
  }
  return Seeding{rows, centroids_from_rows(data, rows)};
}

Seeding seed_centers(const Dataset& data, std::size_t k, const SeedConfig& config) {
  config.validate();
  switch (config.method) {
    case InitMethod::kUniform:
      return init_uniform(data, k, config.seed);
    case InitMethod::kKmpp:
      return init_kmpp(data, k, config.alpha, config.seed);
    case InitMethod::kAfkmc2:
      return init_afkmc2(data, k, config.alpha, config.chain_length, config.seed);
  }
  throw ConfigError("unknown init method");
}

}  // namespace spkm
