#include "cdyn/linalg.hpp"

#include <numeric>

#include "cdyn/error.hpp"

namespace cdyn {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1;
  }
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  if (cols_ != other.rows_) {
    throw Error(ErrorCode::DomainMismatch, "matrix shapes do not compose");
  }
  IntMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t t = 0; t < cols_; ++t) {
      const Int& a = (*this)(i, t);
      if (a == 0) {
        continue;
      }
      for (std::size_t j = 0; j < other.cols_; ++j) {
        const Int& b = other(t, j);
        if (b != 0) {
          out(i, j) += a * b;
        }
      }
    }
  }
  return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& other) const {
  IntMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    out.data_[i] += other.data_[i];
  }
  return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& other) const {
  IntMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    out.data_[i] -= other.data_[i];
  }
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out(j, i) = (*this)(i, j);
    }
  }
  return out;
}

IntVector IntMatrix::operator*(const IntVector& v) const {
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out[i] += (*this)(i, j) * v[j];
    }
  }
  return out;
}

bool IntMatrix::is_zero() const {
  for (const auto& v : data_) {
    if (v != 0) {
      return false;
    }
  }
  return true;
}

namespace {

void remove_content(std::vector<Int>& row) {
  Int g = 0;
  for (const auto& v : row) {
    if (v != 0) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      if (g == 1) {
        return;
      }
    }
  }
  if (g > 1) {
    for (auto& v : row) {
      if (v != 0) {
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
      }
    }
  }
}

/// Reduces to fraction-free reduced echelon form. Returns pivot columns; row i
/// of the result has pivot at pivots[i] and zeros in every other pivot column.
std::vector<std::size_t> reduce(std::vector<std::vector<Int>>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    // Prefer a pivot of smallest magnitude to limit growth.
    std::size_t best = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i) {
      if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) {
        best = i;
        if (abs(rows[i][c]) == 1) {
          break;
        }
      }
    }
    if (best == rows.size()) {
      continue;
    }
    std::swap(rows[r], rows[best]);
    const Int p = rows[r][c];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) {
        continue;
      }
      const Int a = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j) {
        if (rows[r][j] == 0 && rows[i][j] == 0) {
          continue;
        }
        rows[i][j] = p * rows[i][j] - a * rows[r][j];
      }
      remove_content(rows[i]);
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

std::vector<std::vector<Int>> to_rows(const IntMatrix& a) {
  std::vector<std::vector<Int>> rows;
  rows.reserve(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::vector<Int> row(a.cols());
    bool nonzero = false;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      row[j] = a(i, j);
      nonzero = nonzero || row[j] != 0;
    }
    if (nonzero) {
      remove_content(row);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<IntVector> nullspace(IntMatrix a) {
  const std::size_t cols = a.cols();
  auto rows = to_rows(a);
  const auto pivots = reduce(rows, cols);
  std::vector<bool> is_pivot(cols, false);
  for (const auto c : pivots) {
    is_pivot[c] = true;
  }
  Int lcm = 1;
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), rows[i][pivots[i]].get_mpz_t());
  }
  lcm = abs(lcm);
  std::vector<IntVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) {
      continue;
    }
    IntVector v(cols);
    v[f] = lcm;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      if (rows[i][f] == 0) {
        continue;
      }
      Int scaled;
      mpz_divexact(scaled.get_mpz_t(), lcm.get_mpz_t(), rows[i][pivots[i]].get_mpz_t());
      v[pivots[i]] = -rows[i][f] * scaled;
    }
    remove_content(v);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(IntMatrix a) {
  auto rows = to_rows(a);
  return reduce(rows, a.cols()).size();
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, i, 1);
  }
  return m;
}

void SparseMatrix::set(std::size_t r, std::size_t c, const Int& v) {
  if (v == 0) {
    rows_[r].erase(c);
  } else {
    rows_[r][c] = v;
  }
}

Int SparseMatrix::get(std::size_t r, std::size_t c) const {
  const auto it = rows_[r].find(c);
  return it == rows_[r].end() ? Int(0) : it->second;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) {
    n += r.size();
  }
  return n;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& other) const {
  if (cols_ != other.rows()) {
    throw Error(ErrorCode::DomainMismatch, "sparse shapes do not compose");
  }
  SparseMatrix out(rows(), other.cols());
  for (std::size_t i = 0; i < rows(); ++i) {
    auto& acc = out.rows_[i];
    for (const auto& [t, a] : rows_[i]) {
      for (const auto& [j, b] : other.rows_[t]) {
        acc[j] += a * b;
      }
    }
    for (auto it = acc.begin(); it != acc.end();) {
      it = it->second == 0 ? acc.erase(it) : std::next(it);
    }
  }
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix out(cols_, rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (const auto& [j, v] : rows_[i]) {
      out.rows_[j][i] = v;
    }
  }
  return out;
}

RationalVector SparseMatrix::operator*(const RationalVector& v) const {
  RationalVector out(rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (const auto& [j, a] : rows_[i]) {
      out[i] += a * v[j];
    }
  }
  return out;
}

IntMatrix SparseMatrix::dense() const {
  IntMatrix m(rows(), cols_);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (const auto& [j, v] : rows_[i]) {
      m(i, j) = v;
    }
  }
  return m;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) {
      s += a[i] * b[i];
    }
  }
  return s;
}

bool is_zero(const RationalVector& v) {
  for (const auto& x : v) {
    if (x != 0) {
      return false;
    }
  }
  return true;
}

RationalVector residual(const std::vector<RationalVector>& orthogonal_basis, RationalVector v) {
  for (const auto& b : orthogonal_basis) {
    const Rational num = dot(v, b);
    if (num == 0) {
      continue;
    }
    const Rational coef = num / dot(b, b);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (b[i] != 0) {
        v[i] -= coef * b[i];
      }
    }
  }
  return v;
}

std::vector<RationalVector> gram_schmidt(const std::vector<RationalVector>& vectors) {
  std::vector<RationalVector> out;
  for (const auto& v : vectors) {
    RationalVector r = residual(out, v);
    if (!is_zero(r)) {
      out.push_back(to_rational(to_primitive_integer(r)));
    }
  }
  return out;
}

RationalVector to_rational(const IntVector& v) {
  RationalVector out;
  out.reserve(v.size());
  for (const auto& x : v) {
    out.emplace_back(x);
  }
  return out;
}

IntVector to_primitive_integer(const RationalVector& v) {
  Int den = 1;
  for (const auto& x : v) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  }
  IntVector out;
  out.reserve(v.size());
  Int g = 0;
  for (const auto& x : v) {
    Int n = x.get_num() * (den / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    out.push_back(std::move(n));
  }
  if (g > 1) {
    for (auto& x : out) {
      mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }
  }
  return out;
}

}  // namespace cdyn
