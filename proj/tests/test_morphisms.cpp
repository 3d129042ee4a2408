#include <doctest.h>

#include "cdyn/error.hpp"
#include "cdyn/generators.hpp"
#include "cdyn/morphisms.hpp"

using namespace cdyn;

namespace {

DynamicalSystem collatz() { return make_system(SystemSpec::collatz()); }

DynamicalSystem tuc_table(Rng& rng, std::size_t n, int k) {
  for (;;) {
    auto sys = make_system(random_table(rng, n, k));
    if (verify_tuc_window(sys, Window::all(sys), n * n).pass()) return sys;
  }
}

}  // namespace

TEST_CASE("identity and affine homomorphisms") {
  const auto c = collatz();
  const auto id = Morphism::identity(c);
  const auto r = check_homomorphism(id, Window::range(1, 1000));
  CHECK(r.pass);
  CHECK(r.checked == 1000);
  CHECK(r.window_verified);

  // x -> x+1 breaks parity: the branch condition fails at x = 1.
  const auto shift = Morphism::affine(c, c, 1, 1);
  const auto bad = check_homomorphism(shift, Window::range(1, 10));
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.violation);
  CHECK(bad.violation->x == 1);
  CHECK(bad.violation->condition == 2);

  // x -> 3x+... maps into 3x+3: f(3x) = 3 f(x) on 3x+3.
  const auto c3 = make_system(SystemSpec::qxd(3, 3));
  CHECK(check_homomorphism(Morphism::affine(c, c3, 3, 0), Window::range(1, 500)).pass);

  // Target state outside the domain.
  const auto neg = check_homomorphism(Morphism::affine(c, c, -1, 0), Window::range(1, 3));
  REQUIRE(neg.violation);
  CHECK(neg.violation->condition == 0);
}

TEST_CASE("finite homomorphisms and isomorphisms") {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const auto sys = make_system(random_table(rng, 2 + rng() % 8, 2));
    const auto [copy, phi] = relabeled_copy(sys, random_relabeling(rng, sys, 100));
    const auto all = Window::all(sys);
    CHECK(check_homomorphism(phi, all).pass);
    CHECK_FALSE(check_homomorphism(phi, all).window_verified);
    const auto iso = is_isomorphism(phi, all);
    CHECK(iso.isomorphism);
    CHECK(iso.exact);
    REQUIRE(iso.inverse);
    CHECK(iso.inverse_homomorphism == true);
    CHECK(agree_on(compose(*iso.inverse, phi), Morphism::identity(sys), all));

    const auto [doubled, fold] = doubled_with_fold(sys);
    CHECK(check_homomorphism(fold, Window::all(doubled)).pass);
    const auto fr = is_isomorphism(fold, Window::all(doubled));
    CHECK_FALSE(fr.isomorphism);
    CHECK_FALSE(fr.injective);
    CHECK(fr.surjective);
    CHECK(fr.collision.has_value());
  }
}

TEST_CASE("composition") {
  const auto c = collatz();
  const auto c3 = make_system(SystemSpec::qxd(3, 3));
  const auto c9 = make_system(SystemSpec::qxd(3, 9));
  const auto a = Morphism::affine(c, c3, 3, 0);
  const auto b = Morphism::affine(c3, c9, 3, 0);
  const auto ba = compose(b, a);
  CHECK(std::holds_alternative<Morphism::Affine>(ba.rule()));
  CHECK(ba(5) == 45);
  CHECK(check_homomorphism(ba, Window::range(1, 300)).pass);
  CHECK_THROWS_AS(compose(a, a), Error);

  Rng rng(4);
  const auto sys = make_system(random_table(rng, 6, 2));
  const auto [copy, phi] = relabeled_copy(sys, random_relabeling(rng, sys, 10));
  const auto [copy2, psi] = relabeled_copy(copy, random_relabeling(rng, copy, 20));
  const auto chain = compose(psi, phi);
  CHECK(std::holds_alternative<Morphism::Table>(chain.rule()));
  for (const auto& x : sys.states()) CHECK(chain(x) == psi(phi(x)));
}

TEST_CASE("isomorphism on a window of an infinite system") {
  const auto c = collatz();
  const auto rep = is_isomorphism(Morphism::identity(c), Window::range(1, 200));
  CHECK(rep.isomorphism);
  CHECK_FALSE(rep.exact);
  const auto dbl = is_isomorphism(Morphism::affine(c, make_system(SystemSpec::qxd(3, 3)), 3, 0),
                                  Window::range(1, 50));
  CHECK(dbl.injective);
  CHECK_FALSE(dbl.surjective);
}

TEST_CASE("induced symbolic map") {
  const auto c = collatz();
  std::vector<Int> sample;
  for (unsigned long x = 1; x <= 200; ++x) sample.push_back(x);
  const auto hat = induced_symbolic(Morphism::identity(c), sample, 1000);
  CHECK(hat.well_defined);
  CHECK(hat.preserves_codings);
  CHECK(hat.unresolved == 0);
  CHECK(hat.injective);
  CHECK(hat.table.size() == 200);
}

TEST_CASE("coding tables") {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto sys = tuc_table(rng, 2 + rng() % 7, 2);
    const auto ct = coding_table(sys, 256);
    CHECK(ct.codings.size() == sys.states().size());
    CHECK(std::is_sorted(ct.codings.begin(), ct.codings.end()));
    CHECK(check_homomorphism(ct.coding_map, Window::all(sys)).pass);
    CHECK(is_isomorphism(ct.coding_map, Window::all(sys)).isomorphism);
    CHECK(check_coding_homomorphism(sys, Window::all(sys), 256).pass);
    const auto tuc = verify_tuc_iso(sys, Window::all(sys), 256);
    CHECK(tuc.pass());
    CHECK(tuc.exact);
  }
  const auto swap = make_system(SystemSpec::table(1, {1, 2}, {1, 1}, {2, 1}));
  CHECK(coding_table(swap, 16).codings.size() == 1);
  CHECK_THROWS_AS(verify_tuc_iso(swap, Window::all(swap), 16), Error);
  CHECK(check_coding_homomorphism(collatz(), Window::range(1, 300), 1000).pass);
}

TEST_CASE("conjugation by a relabeling") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto sys = make_system(random_table(rng, 2 + rng() % 8, 3));
    const auto [copy, phi] = relabeled_copy(sys, random_relabeling(rng, sys, 50));
    const auto rep = conjugate_unitary(phi, Truncation(sys, Window::all(sys)), Truncation(copy, Window::all(copy)));
    CHECK(rep.pass);
    CHECK(rep.compared_columns == sys.states().size());
    std::vector<std::size_t> sorted = rep.permutation;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < sorted.size(); ++j) CHECK(sorted[j] == j);
  }
  // A non-homomorphism fails the conjugation.
  const auto sys = make_system(SystemSpec::table(2, {1, 2, 3}, {1, 2, 2}, {2, 3, 1}));
  const auto rot = Morphism::table(sys, sys, {{1, 2}, {2, 3}, {3, 1}});
  CHECK_FALSE(conjugate_unitary(rot, Truncation(sys, Window::all(sys)), Truncation(sys, Window::all(sys))).pass);
  const auto c = collatz();
  CHECK_THROWS_AS(
      conjugate_unitary(Morphism::identity(c), Truncation(c, Window::range(1, 10)), Truncation(c, Window::range(1, 11))),
      Error);
}

TEST_CASE("induced isometries") {
  Rng rng(33);
  for (int t = 0; t < 10; ++t) {
    const auto sys = make_system(random_table(rng, 2 + rng() % 6, 2));
    const auto [doubled, fold] = doubled_with_fold(sys);
    // Inclusion of the first copy.
    std::map<Int, Int> inc;
    for (const auto& x : sys.states()) inc[x] = x;
    const auto phi = Morphism::table(sys, doubled, inc);
    const auto rep = induced_isometry(phi, Truncation(sys, Window::all(sys)), Truncation(doubled, Window::all(doubled)));
    CHECK(rep.pass());
    CHECK(rep.orbit_condition_exact);
  }
  // The fold is not injective.
  Rng r2(2);
  const auto sys = make_system(random_table(r2, 4, 2));
  const auto [doubled, fold] = doubled_with_fold(sys);
  CHECK_THROWS_AS(induced_isometry(fold, Truncation(doubled, Window::all(doubled)), Truncation(sys, Window::all(sys))),
                  Error);
}
