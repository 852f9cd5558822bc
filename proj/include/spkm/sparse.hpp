#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spkm/errors.hpp"

namespace spkm {

using Index = std::uint32_t;

// Sorted (index, value) pairs. Indices are strictly increasing and no stored
// value is exactly zero; the constructors enforce both.
class SparseVector {
 public:
  SparseVector() = default;

  // Throws std::invalid_argument on unsorted or duplicate indices. Exact zeros
  // are stripped.
  SparseVector(std::vector<Index> indices, std::vector<double> values);

  // Sorts by index first; duplicate indices are summed.
  static SparseVector from_unsorted(std::vector<std::pair<Index, double>> entries);

  std::span<const Index> indices() const { return indices_; }
  std::span<const double> values() const { return values_; }
  std::size_t nnz() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }

  // One past the largest stored index, 0 when empty.
  std::size_t min_dim() const { return indices_.empty() ? 0 : indices_.back() + 1; }

  double squared_norm() const;
  double norm() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<Index> indices_;
  std::vector<double> values_;
};

class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim) : values_(dim, 0.0) {}
  explicit DenseVector(std::vector<double> values) : values_(std::move(values)) {}

  static DenseVector from_sparse(const SparseVector& x, std::size_t dim);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  void add(const SparseVector& x);
  void subtract(const SparseVector& x);
  void set_zero();

  double squared_norm() const;
  double norm() const;

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> values_;
};

// Merge join over the two supports.
double dot(const SparseVector& x, const SparseVector& y);

// Throws DimensionMismatchError if x has an index >= c.dim().
double dot(const SparseVector& x, const DenseVector& c);

// Unchecked variant for the engine's inner loops; caller guarantees bounds.
inline double dot_unchecked(const SparseVector& x, std::span<const double> c) {
  const auto idx = x.indices();
  const auto val = x.values();
  double s = 0.0;
  for (std::size_t t = 0; t < idx.size(); ++t) s += val[t] * c[idx[t]];
  return s;
}

double dot(const DenseVector& a, const DenseVector& b);

// Both throw ZeroNormError on a zero vector.
SparseVector normalize(const SparseVector& v);
DenseVector normalize(const DenseVector& v);

// A set of unit-norm rows with a common dimensionality.
class Dataset {
 public:
  // Normalizes every row. Throws ZeroNormRowsError naming all empty rows,
  // DimensionMismatchError if a row index is >= dim, InfeasibleError if
  // `rows` is empty.
  Dataset(std::vector<SparseVector> rows, std::size_t dim);

  std::size_t size() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  const SparseVector& operator[](std::size_t i) const { return rows_[i]; }
  std::span<const SparseVector> rows() const { return rows_; }

  // Fraction of non-zero cells.
  double density() const;

 private:
  std::vector<SparseVector> rows_;
  std::size_t dim_ = 0;
};

}  // namespace spkm
