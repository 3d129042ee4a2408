#include <doctest.h>

#include <random>

#include "cdyn/error.hpp"
#include "cdyn/generators.hpp"
#include "cdyn/operators.hpp"
#include "oracles.hpp"

using namespace cdyn;

namespace {

DynamicalSystem collatz() { return make_system(SystemSpec::collatz()); }

RationalVector unit(std::size_t n, std::size_t i) {
  RationalVector v(n);
  v[i] = 1;
  return v;
}

}  // namespace

TEST_CASE("truncation escapes") {
  const Truncation t(collatz(), Window::range(1, 4));
  CHECK_FALSE(t.closed());
  CHECK_FALSE(t.escape_free());
  CHECK(t.escapes(1) == std::vector<Int>{3});
  CHECK(t.escapes(2).empty());
  CHECK(t.image(0) == std::size_t{3});
  CHECK_FALSE(t.image(2).has_value());
  CHECK(t.branch(3) == 2);
  // 1 has preimage 2 inside; 4 has preimages 1 and 8, and 8 is outside.
  CHECK_FALSE(t.interior(3));

  const auto swap = make_system(SystemSpec::table(1, {1, 2}, {1, 1}, {2, 1}));
  const Truncation ts(swap, Window::all(swap));
  CHECK(ts.closed());
  CHECK(ts.matrix(1).get(1, 0) == 1);
  CHECK(ts.matrix(1).get(0, 1) == 1);
}

TEST_CASE("truncated operators are partial isometries") {
  const Truncation t(collatz(), Window::range(1, 200));
  for (Branch i = 1; i <= 2; ++i) {
    const auto m = t.matrix(i);
    CHECK(is_partial_isometry(m));
    CHECK(m.transpose() * m == (m.transpose() * m) * (m.transpose() * m));
    for (unsigned long x = 1; x <= 200; ++x) {
      const auto v = unit(200, x - 1);
      CHECK(t.apply(i, v) == m * v);
      CHECK(t.apply_adjoint(i, v) == m.transpose() * v);
    }
  }
  SparseMatrix bad(2, 2);
  bad.set(0, 0, 1);
  bad.set(0, 1, 1);
  CHECK_FALSE(is_partial_isometry(bad));
  CHECK(is_partial_isometry(word_operator(t, Word{1, 2, 2})));
}

TEST_CASE("word operators") {
  const Truncation t(collatz(), Window::range(1, 50));
  const auto m = word_operator(t, Word{1, 2, 2});
  CHECK(m == t.matrix(2) * t.matrix(2) * t.matrix(1));
  CHECK(m.get(0, 0) == 1);
  const auto v = unit(50, 4);
  CHECK(apply_word_op(t, Word{1, 2, 2}, v) == m * v);
  std::vector<double> vd(50, 0.0);
  vd[4] = 1.0;
  const auto wd = apply_word_op(t, Word{1, 2, 2}, vd);
  const auto wr = m * v;
  for (std::size_t j = 0; j < 50; ++j) CHECK(wd[j] == doctest::Approx(wr[j].get_d()));
}

TEST_CASE("word operator status") {
  const Truncation small(collatz(), Window::range(1, 5));
  const auto st = word_operator_status(small, Word{1, 1});
  CHECK(st.truncated_zero);
  CHECK_FALSE(st.window_caused());
  // 3 -> 10 -> 5 follows (1,2) but 10 is outside the window.
  const auto w = word_operator_status(small, Word{1, 2, 1});
  CHECK(w.truncated_zero);
  CHECK(w.window_caused());
  CHECK(w.replay_witness == Int(3));
  CHECK_FALSE(word_operator_status(small, Word{2}).truncated_zero);
}

TEST_CASE("coding projections") {
  const auto sys = collatz();
  const Truncation t(sys, Window::range(1, 50));
  const auto p3 = projection_P(t, coding_prefix(sys, 1, 3));
  const auto p4 = projection_P(t, coding_prefix(sys, 1, 4));
  CHECK(p3 * unit(50, 0) == unit(50, 0));
  CHECK(p3 * unit(50, 4) == unit(50, 4));
  CHECK(p4 * unit(50, 0) == unit(50, 0));
  CHECK(is_zero(p4 * unit(50, 4)));
  CHECK(p3 * p3 == p3);
  CHECK(p4 * p3 == p4);

  RationalVector a(50);
  a[0] = 2;
  a[4] = 3;
  const auto rep = verify_pm_limit(t, a, 1, 32);
  CHECK(rep.stabilized);
  CHECK(rep.index == 4);
  RationalVector expected(50);
  expected[0] = 2;
  CHECK(rep.limit == expected);
}

TEST_CASE("P_m limit rejects windows that are too small") {
  const Truncation t(collatz(), Window::range(1, 10));
  RationalVector a(10);
  a[0] = 1;
  a[2] = 1;  // 3 -> 10 -> 5 -> 16 leaves the window
  try {
    verify_pm_limit(t, a, 3, 32);
    FAIL("expected WindowTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowTooSmall);
  }
}

TEST_CASE("invariant sets give reducing subspaces") {
  const auto sys = make_system(SystemSpec::table(2, {1, 2, 3, 4, 5}, {1, 2, 1, 2, 1}, {2, 1, 4, 5, 3}));
  const Truncation t(sys, Window::all(sys));
  const auto inv = subspace_from_invariant_set(t, {1, 2});
  CHECK(inv.dim() == 2);
  CHECK(is_reducing(t, inv, false).pass);
  const auto half = subspace_from_invariant_set(t, {1});
  const auto r = is_reducing(t, half, false);
  CHECK_FALSE(r.pass);
  REQUIRE(r.witness);

  // On a window of Collatz, the interior check ignores boundary effects.
  const Truncation tc(collatz(), Window::range(1, 64));
  const auto all = subspace_from_invariant_set(tc, [] {
    std::vector<Int> s;
    for (unsigned long x = 1; x <= 64; ++x) s.push_back(x);
    return s;
  }());
  CHECK(is_reducing(tc, all, true).pass);
}

TEST_CASE("float subspaces") {
  const auto b = SubspaceBasis::from_vectors(std::vector<std::vector<double>>{{1, 1, 0}, {2, 2, 0}, {0, 0, 3}}, 1e-9);
  CHECK(b.mode == Arithmetic::Float);
  CHECK(b.dim() == 2);
  const auto sys = make_system(SystemSpec::table(1, {1, 2}, {1, 1}, {2, 1}));
  const Truncation t(sys, Window::all(sys));
  const auto plus = SubspaceBasis::from_vectors(std::vector<std::vector<double>>{{1, 1}}, 1e-9);
  const auto e1 = SubspaceBasis::from_vectors(std::vector<std::vector<double>>{{1, 0}}, 1e-9);
  CHECK(is_reducing(t, plus, false).pass);
  CHECK_FALSE(is_reducing(t, e1, false).pass);
}

TEST_CASE("swap commutants") {
  const auto one = make_system(SystemSpec::table(1, {1, 2}, {1, 1}, {2, 1}));
  const auto c1 = commutant_projections(Truncation(one, Window::all(one)));
  CHECK(c1.dimension == 2);
  CHECK(c1.commutative);
  CHECK(c1.split);
  CHECK(c1.lattice_size == std::size_t{4});
  REQUIRE(c1.minimal.size() == 2);
  std::set<IntVector> dirs;
  for (const auto& m : c1.minimal) {
    REQUIRE(m.dim() == 1);
    auto v = to_primitive_integer(m.exact[0]);
    if (v[0] < 0) {
      for (auto& e : v) e = -e;
    }
    dirs.insert(v);
  }
  CHECK(dirs == std::set<IntVector>{{1, 1}, {1, -1}});

  const auto two = make_system(SystemSpec::table(2, {1, 2}, {1, 2}, {2, 1}));
  const auto c2 = commutant_projections(Truncation(two, Window::all(two)));
  CHECK(c2.dimension == 1);
  CHECK(c2.lattice_size == std::size_t{2});
  const auto corr = invariant_reducing_correspondence(Truncation(two, Window::all(two)));
  CHECK(corr.bijection());
  CHECK(corr.invariant_sets == 2);
}

TEST_CASE("disjoint cycles") {
  const auto sys = make_system(SystemSpec::table(2, {1, 2, 3, 4}, {1, 2, 1, 1}, {2, 1, 4, 3}));
  const auto rep = invariant_reducing_correspondence(Truncation(sys, Window::all(sys)));
  CHECK(rep.invariant_atoms == 2);
  CHECK(rep.invariant_sets == 4);
  // 3 and 4 share a coding, so span{e_3, e_4} splits further: 8 reducing subspaces.
  CHECK(rep.reducing_subspaces == std::size_t{8});
  CHECK(rep.injective);
  CHECK_FALSE(rep.surjective);
  CHECK(rep.commutant.dimension == 3);
  CHECK(rep.commutant.dimension == oracle::commutant_dimension(sys));
  // Relabeling the second cycle's branches makes the coding injective and restores the bijection.
  const auto tuc = make_system(SystemSpec::table(2, {1, 2, 3, 4, 5}, {1, 2, 1, 1, 2}, {2, 1, 4, 5, 3}));
  const auto rt = invariant_reducing_correspondence(Truncation(tuc, Window::all(tuc)));
  CHECK(rt.invariant_sets == 4);
  CHECK(rt.reducing_subspaces == std::size_t{4});
  CHECK(rt.bijection());
  // Isomorphic copies give a noncommutative commutant and an infinite lattice.
  const auto twin = make_system(SystemSpec::table(2, {1, 2, 3, 4}, {1, 2, 1, 2}, {2, 1, 4, 3}));
  const auto tr = invariant_reducing_correspondence(Truncation(twin, Window::all(twin)));
  CHECK(tr.commutant.dimension == 4);
  CHECK_FALSE(tr.commutant.commutative);
  CHECK_FALSE(tr.reducing_subspaces.has_value());
  CHECK_FALSE(tr.surjective);
}

TEST_CASE("commutant dimension matches the oracle on random tables") {
  Rng rng(99);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng() % 7;
    const int k = 1 + static_cast<int>(rng() % 3);
    const auto sys = make_system(random_table(rng, n, k));
    const auto rep = commutant_projections(Truncation(sys, Window::all(sys)));
    CHECK(rep.dimension == oracle::commutant_dimension(sys));
    for (const auto& x : rep.basis) {
      for (Branch i = 1; i <= k; ++i) {
        const auto m = Truncation(sys, Window::all(sys)).matrix(i).dense();
        CHECK(x * m == m * x);
        CHECK(x * m.transpose() == m.transpose() * x);
      }
    }
  }
}

TEST_CASE("commutant requires an escape-free window") {
  const Truncation t(collatz(), Window::range(1, 4));
  CHECK_THROWS_AS(commutant_projections(t), Error);
}

TEST_CASE("fixed vectors") {
  const auto swap = make_system(SystemSpec::table(1, {1, 2}, {1, 1}, {2, 1}));
  const Truncation t(swap, Window::all(swap));
  CHECK(fixed_vectors_of_word(t, Word{1, 1}).dim() == 2);
  CHECK(fixed_vectors_of_word(t, Word{1}).dim() == 1);
  CHECK(fixed_vectors_of_word(t, Word{1, 1}, Arithmetic::Float).dim() == 2);
  const Truncation tc(collatz(), Window::range(1, 100));
  const auto f = fixed_vectors_of_word(tc, Word{1, 2, 2}, Arithmetic::Float);
  REQUIRE(f.dim() == 1);
  CHECK(std::abs(f.approx[0][0]) == doctest::Approx(1.0));
}
