#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "spkm/centroids.hpp"
#include "spkm/sparse.hpp"

namespace spkm {

enum class InitMethod { kUniform, kKmpp, kAfkmc2 };

std::string_view to_string(InitMethod m);
// Accepts "uniform", "kmpp", "afkmc2"; throws ConfigError otherwise.
InitMethod parse_init_method(std::string_view name);

struct SeedConfig {
  InitMethod method = InitMethod::kUniform;
  // Dissimilarity offset: points are weighted by alpha - max_c <x, c>.
  double alpha = 1.0;
  std::size_t chain_length = 200;
  std::uint64_t seed = 0;

  // Throws ConfigError unless alpha is in [1, 2] and chain_length >= 1.
  void validate() const;
};

struct Seeding {
  std::vector<std::size_t> rows;  // dataset rows used as centers, pick order
  CentroidSet centroids;
};

// Called after every pick with the number of centers chosen so far and the
// sampling weights for the next pick (0 for rows already chosen).
using WeightObserver = std::function<void(std::size_t picked, std::span<const double> weights)>;

Seeding init_uniform(const Dataset& data, std::size_t k, std::uint64_t seed);

Seeding init_kmpp(const Dataset& data, std::size_t k, double alpha, std::uint64_t seed,
                  const WeightObserver& observer = {});

Seeding init_afkmc2(const Dataset& data, std::size_t k, double alpha, std::size_t chain_length,
                    std::uint64_t seed);

// Dispatches on config.method.
Seeding seed_centers(const Dataset& data, std::size_t k, const SeedConfig& config);

// Dense copies of the given rows.
CentroidSet centroids_from_rows(const Dataset& data, std::span<const std::size_t> rows);

}  // namespace spkm
