#pragma once

#include <cmath>
#include <vector>

#include "spkm/random.hpp"
#include "spkm/sparse.hpp"

namespace spkm::testing {

// Random sparse row with roughly density * dim non-zeros, at least one.
inline SparseVector random_sparse(Rng& rng, std::size_t dim, double density,
                                  bool non_negative = false) {
  std::vector<std::pair<Index, double>> entries;
  for (std::size_t d = 0; d < dim; ++d) {
    if (rng.uniform01() < density) {
      const double v = non_negative ? rng.uniform01() + 0.05 : rng.normal();
      entries.emplace_back(static_cast<Index>(d), v);
    }
  }
  if (entries.empty()) entries.emplace_back(static_cast<Index>(rng.uniform_index(dim)), 1.0);
  return SparseVector::from_unsorted(std::move(entries));
}

inline Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t dim, double density,
                              bool non_negative = false) {
  Rng rng(seed);
  std::vector<SparseVector> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back(random_sparse(rng, dim, density, non_negative));
  return Dataset(std::move(rows), dim);
}

inline std::vector<double> densify(const SparseVector& x, std::size_t dim) {
  std::vector<double> d(dim, 0.0);
  for (std::size_t t = 0; t < x.nnz(); ++t) d[x.indices()[t]] = x.values()[t];
  return d;
}

inline double dense_dot(const std::vector<double>& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace spkm::testing
