#pragma once

#include <cstddef>
#include <vector>

#include "spkm/sparse.hpp"

namespace spkm {

// k dense unit-norm centers together with the unnormalized member sums they
// were derived from, member counts, the previous centers and the drift
// p(j) = <c(j), c'(j)> of the last update.
struct CentroidSet {
  std::vector<DenseVector> centers;
  std::vector<DenseVector> sums;
  std::vector<std::size_t> counts;
  std::vector<DenseVector> prev_centers;
  std::vector<double> drift;

  // Seeded state: zero sums and counts, prev == centers, drift 1.
  static CentroidSet from_centers(std::vector<DenseVector> centers);

  std::size_t k() const { return centers.size(); }
  std::size_t dim() const { return centers.empty() ? 0 : centers.front().dim(); }
};

}  // namespace spkm
