#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "cdyn/integer.hpp"

namespace cdyn {

using IntVector = std::vector<Int>;
using RationalVector = std::vector<Rational>;

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix operator*(const IntMatrix& other) const;
  IntMatrix operator+(const IntMatrix& other) const;
  IntMatrix operator-(const IntMatrix& other) const;
  IntMatrix transpose() const;
  IntVector operator*(const IntVector& v) const;
  bool is_zero() const;
  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// Integer basis of {x : A x = 0}, computed by fraction-free elimination with
/// row content removal. Each basis vector is primitive (entries coprime).
std::vector<IntVector> nullspace(IntMatrix a);
std::size_t rank(IntMatrix a);

/// Sparse integer matrix, one ordered map per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  void set(std::size_t r, std::size_t c, const Int& v);
  Int get(std::size_t r, std::size_t c) const;
  const std::map<std::size_t, Int>& row(std::size_t r) const { return rows_[r]; }
  std::size_t nonzeros() const;

  SparseMatrix operator*(const SparseMatrix& other) const;
  SparseMatrix transpose() const;
  RationalVector operator*(const RationalVector& v) const;
  IntMatrix dense() const;
  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t cols_ = 0;
  std::vector<std::map<std::size_t, Int>> rows_;
};

Rational dot(const RationalVector& a, const RationalVector& b);
bool is_zero(const RationalVector& v);
/// Orthogonal (not normalized) basis of span(vectors); dependent inputs are dropped.
std::vector<RationalVector> gram_schmidt(const std::vector<RationalVector>& vectors);
/// v minus its orthogonal projection onto span(orthogonal_basis).
RationalVector residual(const std::vector<RationalVector>& orthogonal_basis, RationalVector v);
RationalVector to_rational(const IntVector& v);
/// Scales a rational vector to a primitive integer vector with the same direction.
IntVector to_primitive_integer(const RationalVector& v);

/// Gauss-Jordan nullspace over a field with an explicit zero test. Used for
/// floating mode and as an independent check of the fraction-free route.
template <class T, class ZeroTest>
std::vector<std::vector<T>> nullspace_gauss_jordan(std::vector<std::vector<T>> a, std::size_t cols,
                                                   ZeroTest is_zero_value) {
  const std::size_t rows = a.size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (!is_zero_value(a[i][c])) {
        if (best == rows) {
          best = i;
        }
        if constexpr (std::is_floating_point_v<T>) {
          if (std::abs(a[i][c]) > std::abs(a[best][c])) {
            best = i;
          }
        } else {
          break;
        }
      }
    }
    if (best == rows) {
      continue;
    }
    std::swap(a[r], a[best]);
    const T p = a[r][c];
    for (std::size_t j = 0; j < cols; ++j) {
      a[r][j] /= p;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero_value(a[i][c])) {
        continue;
      }
      const T factor = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) {
        a[i][j] -= factor * a[r][j];
      }
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (const auto c : pivot_col) {
    is_pivot[c] = true;
  }
  std::vector<std::vector<T>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) {
      continue;
    }
    std::vector<T> v(cols, T(0));
    v[f] = T(1);
    for (std::size_t i = 0; i < pivot_col.size(); ++i) {
      v[pivot_col[i]] = -a[i][f];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace cdyn
