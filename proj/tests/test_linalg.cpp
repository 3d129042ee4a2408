#include <doctest.h>

#include <cmath>
#include <random>

#include "cdyn/linalg.hpp"
#include "oracles.hpp"

using namespace cdyn;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int spread) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      // Sparse entries make rank deficiency common.
      m(i, j) = rng() % 3 == 0 ? static_cast<long>(rng() % (2 * spread + 1)) - spread : 0L;
    }
  }
  return m;
}

std::vector<std::vector<Rational>> rows_of(const IntMatrix& m) {
  std::vector<std::vector<Rational>> out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

}  // namespace

TEST_CASE("dense arithmetic") {
  IntMatrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 3;
  a(1, 1) = 4;
  const IntMatrix i2 = IntMatrix::identity(2);
  CHECK(a * i2 == a);
  CHECK((a - a).is_zero());
  CHECK((a + a)(1, 1) == 8);
  CHECK(a.transpose()(0, 1) == 3);
  CHECK((a * a)(0, 0) == 7);
  CHECK(a * IntVector{1, 1} == IntVector{3, 7});
  CHECK(rank(a) == 2);
  CHECK(nullspace(a).empty());
}

TEST_CASE("sparse arithmetic matches dense") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto da = random_matrix(rng, 6, 5, 3);
    const auto db = random_matrix(rng, 5, 7, 3);
    SparseMatrix sa(6, 5);
    SparseMatrix sb(5, 7);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 5; ++j) sa.set(i, j, da(i, j));
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 7; ++j) sb.set(i, j, db(i, j));
    CHECK((sa * sb).dense() == da * db);
    CHECK(sa.transpose().dense() == da.transpose());
    std::size_t nz = 0;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 5; ++j) nz += da(i, j) != 0 ? 1 : 0;
    CHECK(sa.nonzeros() == nz);
  }
  CHECK(SparseMatrix::identity(3).dense() == IntMatrix::identity(3));
}

TEST_CASE("fraction-free nullspace agrees with rational elimination") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = 1 + rng() % 7;
    const std::size_t c = 1 + rng() % 8;
    const auto m = random_matrix(rng, r, c, 5);
    const auto basis = nullspace(m);
    const auto expected = oracle::rational_nullspace(rows_of(m), c);
    REQUIRE(basis.size() == expected.size());
    CHECK(rank(m) + basis.size() == c);
    for (const auto& v : basis) {
      CHECK((m * v) == IntVector(r, Int(0)));
      Int g = 0;
      for (const auto& e : v) g = gcd(g, e);
      CHECK(g == 1);
    }
    // Same span: every oracle vector is a combination of ours.
    const auto ours = gram_schmidt([&] {
      std::vector<RationalVector> vs;
      for (const auto& v : basis) vs.push_back(to_rational(v));
      return vs;
    }());
    CHECK(ours.size() == basis.size());
    for (const auto& v : expected) CHECK(is_zero(residual(ours, v)));
  }
}

TEST_CASE("Gauss-Jordan in floating point") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const auto m = random_matrix(rng, 4, 6, 4);
    std::vector<std::vector<double>> a(4, std::vector<double>(6));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 6; ++j) a[i][j] = m(i, j).get_d();
    const auto basis = nullspace_gauss_jordan(a, 6, [](double x) { return std::abs(x) < 1e-9; });
    CHECK(basis.size() == nullspace(m).size());
    for (const auto& v : basis) {
      for (std::size_t i = 0; i < 4; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < 6; ++j) s += a[i][j] * v[j];
        CHECK(std::abs(s) < 1e-9);
      }
    }
  }
}

TEST_CASE("Gram-Schmidt") {
  const std::vector<RationalVector> vs{{1, 1, 0}, {1, 0, 1}, {2, 1, 1}};
  const auto b = gram_schmidt(vs);
  REQUIRE(b.size() == 2);
  CHECK(dot(b[0], b[1]) == 0);
  CHECK(is_zero(residual(b, {3, 2, 1})));
  CHECK_FALSE(is_zero(residual(b, {1, 0, 0})));
  CHECK(to_primitive_integer({Rational(1, 2), Rational(-1, 3), 0}) == IntVector{3, -2, 0});
}
