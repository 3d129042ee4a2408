#include <doctest.h>

#include <random>

#include "cdyn/coding.hpp"
#include "cdyn/error.hpp"
#include "cdyn/symbolic.hpp"

using namespace cdyn;

namespace {

DynamicalSystem collatz() { return make_system(SystemSpec::collatz()); }
DynamicalSystem swap() { return make_system(SystemSpec::table(1, {1, 2}, {1, 1}, {2, 1})); }
using B = std::vector<Branch>;

}  // namespace

TEST_CASE("coding prefixes") {
  CHECK(coding_prefix(collatz(), 1, 6).symbols == B{1, 2, 2, 1, 2, 2});
  CHECK(coding_prefix(collatz(), 5, 6).symbols == B{1, 2, 2, 2, 2, 1});
  CHECK(coding_prefix(swap(), 2, 4).symbols == B{1, 1, 1, 1});

  CodingPrefix p;
  p.symbols = {1, 2, 2, 1};
  CHECK(shift(p).symbols == B{2, 2, 1});
  const auto sys = collatz();
  CHECK(shift(coding_prefix(sys, 1, 6), sys) == coding_prefix(sys, 4, 5));
  p.symbols = {1};
  CHECK_THROWS_AS(shift(p), Error);

  for (unsigned long x = 1; x <= 500; ++x) {
    const auto a = coding_prefix(sys, x, 12);
    const auto b = coding_prefix(sys, sys.apply(x), 11);
    CHECK(a.symbols.front() == sys.branch_of(x));
    CHECK(B(a.symbols.begin() + 1, a.symbols.end()) == b.symbols);
  }
}

TEST_CASE("distinguishing prefixes") {
  CHECK(distinguishing_prefix_length(collatz(), 1, 5, 100) == std::size_t{4});
  CHECK(distinguishing_prefix_length(collatz(), 1, 2, 100) == std::size_t{1});
  CHECK_FALSE(distinguishing_prefix_length(swap(), 1, 2, 1000).has_value());

  CHECK(verify_tuc_window(collatz(), Window::range(1, 2000), 256).pass());
  CHECK(verify_tuc_window(make_system(SystemSpec::qxd(5, 3)), Window::range(1, 500), 256).pass());
  const auto r = verify_tuc_window(swap(), Window::all(swap()), 64);
  REQUIRE(r.undistinguished.size() == 1);
  CHECK(r.undistinguished[0] == std::pair<Int, Int>{1, 2});
}

TEST_CASE("long common prefixes use the fallback path") {
  // 1 and 1 + 2^80 share a long prefix; the cached block is 64 symbols.
  const auto sys = collatz();
  Int big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, 80);
  const auto w = Window::of({1, big + 1});
  const auto r = verify_tuc_window(sys, w, 1024);
  CHECK(r.pass());
  CHECK(r.max_length == *distinguishing_prefix_length(sys, 1, big + 1, 1024));
  CHECK(r.max_length > 64);
}

TEST_CASE("alpha-beta hypotheses") {
  for (long q = 1; q <= 9; q += 2) {
    CHECK(check_alphabeta_hypotheses(make_system(SystemSpec::qxd(q, 1)), Window::range(1, 1000)).pass());
  }
  const auto ab = check_alphabeta_hypotheses(make_system(SystemSpec::alphabeta(3, {2, 4}, {1, 5})),
                                             Window::range(1, 10000), 3);
  CHECK(ab.coprime);
  CHECK(ab.checked == 10000);
  const auto bad = check_alphabeta_hypotheses(make_system(SystemSpec::alphabeta(3, {3, 4}, {1, 5})),
                                              Window::range(1, 100));
  CHECK_FALSE(bad.coprime);
  CHECK(bad.non_coprime_branches == B{1});
}

TEST_CASE("residue towers") {
  const auto t = tower_from_state(13, 2, 4);
  CHECK(t.digits == std::vector<Int>{1, 1, 5, 13});
  CHECK(t.compatible());
  CHECK(tower_from_state(16, 2, 4).digits == std::vector<Int>{0, 0, 0, 0});
  CHECK(tower_from_state(1, 3, 5).digits == std::vector<Int>{1, 1, 1, 1, 1});
  CHECK_THROWS_AS(tower_from_state(5, 2, 0), Error);

  const auto sys = collatz();
  CHECK(tower_apply(sys, t) == tower_from_state(40, 2, 4));
  CHECK(tower_apply(sys, tower_from_state(4, 2, 3)) == tower_from_state(2, 2, 2));
  try {
    tower_apply(sys, tower_from_state(6, 2, 1));
    FAIL("expected DepthExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DepthExhausted);
  }
}

TEST_CASE("recovery lemma") {
  const auto sys = collatz();
  const auto a = verify_recovery_lemma(sys, 3, 11, 2, 3);
  CHECK(a.pass);
  CHECK(a.level == 2);
  const auto b = verify_recovery_lemma(sys, 4, 12, 1, 2);
  CHECK(b.pass);
  CHECK(b.level == 2);
  CHECK(verify_recovery_lemma(sys, 7, 7, 3, 4).pass);
  CHECK_THROWS_AS(verify_recovery_lemma(sys, 3, 4, 1, 2), Error);
  CHECK_THROWS_AS(verify_recovery_lemma(sys, 3, 5, 3, 4), Error);
}

TEST_CASE("eventual words") {
  const EventualWord w({1, 2}, {2, 1, 2, 1});
  CHECK(w.preperiod() == B{1, 2});
  CHECK(w.period() == B{2, 1});
  CHECK(w.at(1) == 1);
  CHECK(w.at(4) == 1);
  CHECK(w.prefix(5) == B{1, 2, 2, 1, 2});
  CHECK(w.shifted() == EventualWord({2}, {2, 1}));
  CHECK(EventualWord({1, 2}, {1, 2, 1, 2}) == EventualWord({}, {1, 2}));
  CHECK(EventualWord({2, 1}, {2, 1}) == EventualWord({}, {2, 1}));
  CHECK(EventualWord({}, {1, 2, 2}).shifted().shifted().shifted() == EventualWord({}, {1, 2, 2}));

  const auto sys = collatz();
  const ShiftSystem shift_system(2);
  for (unsigned long x = 1; x <= 300; ++x) {
    const auto xh = coding_of(sys, x, 1000);
    const auto fxh = coding_of(sys, sys.apply(x), 1000);
    REQUIRE(xh);
    REQUIRE(fxh);
    CHECK(shift_system.apply(*xh) == *fxh);
    CHECK(shift_system.branch_of(*xh) == sys.branch_of(x));
    CHECK(xh->prefix(20) == coding_prefix(sys, x, 20).symbols);
  }
}
