#include "spkm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spkm {

ZeroNormRowsError::ZeroNormRowsError(std::vector<std::size_t> rows)
    : ZeroNormError([&] {
        std::ostringstream os;
        os << "zero-norm rows:";
        std::size_t shown = 0;
        for (auto r : rows) {
          if (shown++ == 20) {
            os << " ...";
            break;
          }
          os << ' ' << r;
        }
        return os.str();
      }()),
      rows_(std::move(rows)) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

SparseVector::SparseVector(std::vector<Index> indices, std::vector<double> values) {
  if (indices.size() != values.size()) {
    throw std::invalid_argument("SparseVector: indices and values differ in length");
  }
  indices_.reserve(indices.size());
  values_.reserve(values.size());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (t > 0 && indices[t] <= indices[t - 1]) {
      throw std::invalid_argument("SparseVector: indices must be strictly increasing");
    }
    if (values[t] == 0.0) continue;
    indices_.push_back(indices[t]);
    values_.push_back(values[t]);
  }
}

SparseVector SparseVector::from_unsorted(std::vector<std::pair<Index, double>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Index> idx;
  std::vector<double> val;
  for (const auto& [i, v] : entries) {
    if (!idx.empty() && idx.back() == i) {
      val.back() += v;
    } else {
      idx.push_back(i);
      val.push_back(v);
    }
  }
  return SparseVector(std::move(idx), std::move(val));
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double SparseVector::norm() const { return std::sqrt(squared_norm()); }

DenseVector DenseVector::from_sparse(const SparseVector& x, std::size_t dim) {
  if (x.min_dim() > dim) {
    throw DimensionMismatchError("sparse index " + std::to_string(x.min_dim() - 1) +
                                 " out of range for dimension " + std::to_string(dim));
  }
  DenseVector d(dim);
  d.add(x);
  return d;
}

void DenseVector::add(const SparseVector& x) {
  const auto idx = x.indices();
  const auto val = x.values();
  for (std::size_t t = 0; t < idx.size(); ++t) values_[idx[t]] += val[t];
}

void DenseVector::subtract(const SparseVector& x) {
  const auto idx = x.indices();
  const auto val = x.values();
  for (std::size_t t = 0; t < idx.size(); ++t) values_[idx[t]] -= val[t];
}

void DenseVector::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

double DenseVector::squared_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double DenseVector::norm() const { return std::sqrt(squared_norm()); }

double dot(const SparseVector& x, const SparseVector& y) {
  const auto xi = x.indices();
  const auto yi = y.indices();
  const auto xv = x.values();
  const auto yv = y.values();
  std::size_t a = 0;
  std::size_t b = 0;
  double s = 0.0;
  while (a < xi.size() && b < yi.size()) {
    if (xi[a] < yi[b]) {
      ++a;
    } else if (yi[b] < xi[a]) {
      ++b;
    } else {
      s += xv[a] * yv[b];
      ++a;
      ++b;
    }
  }
  return s;
}

double dot(const SparseVector& x, const DenseVector& c) {
  if (x.min_dim() > c.dim()) {
    throw DimensionMismatchError("sparse index " + std::to_string(x.min_dim() - 1) +
                                 " out of range for dense vector of length " +
                                 std::to_string(c.dim()));
  }
  return dot_unchecked(x, c.values());
}

double dot(const DenseVector& a, const DenseVector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatchError("dense vectors of length " + std::to_string(a.dim()) +
                                 " and " + std::to_string(b.dim()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

SparseVector normalize(const SparseVector& v) {
  const double n = v.norm();
  if (n == 0.0) throw ZeroNormError("cannot normalize a zero vector");
  std::vector<Index> idx(v.indices().begin(), v.indices().end());
  std::vector<double> val(v.values().begin(), v.values().end());
  for (double& x : val) x /= n;
  return SparseVector(std::move(idx), std::move(val));
}

DenseVector normalize(const DenseVector& v) {
  const double n = v.norm();
  if (n == 0.0) throw ZeroNormError("cannot normalize a zero vector");
  DenseVector out = v;
  for (double& x : out.values()) x /= n;
  return out;
}

Dataset::Dataset(std::vector<SparseVector> rows, std::size_t dim) : dim_(dim) {
  if (rows.empty()) throw InfeasibleError("dataset has no rows");
  std::vector<std::size_t> empty_rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].min_dim() > dim) {
      throw DimensionMismatchError("row " + std::to_string(i) + " has index " +
                                   std::to_string(rows[i].min_dim() - 1) +
                                   " >= dimension " + std::to_string(dim));
    }
    if (rows[i].empty() || rows[i].squared_norm() == 0.0) empty_rows.push_back(i);
  }
  if (!empty_rows.empty()) throw ZeroNormRowsError(std::move(empty_rows));
  rows_.reserve(rows.size());
  for (auto& r : rows) rows_.push_back(normalize(r));
}

double Dataset::density() const {
  std::size_t nnz = 0;
  for (const auto& r : rows_) nnz += r.nnz();
  return static_cast<double>(nnz) /
         (static_cast<double>(rows_.size()) * static_cast<double>(dim_));
}

}  // namespace spkm
