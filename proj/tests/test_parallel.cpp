#include <doctest.h>

#include <omp.h>

#include "cdyn/generators.hpp"
#include "cdyn/reference.hpp"

using namespace cdyn;

namespace {

struct ThreadScope {
  explicit ThreadScope(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadScope() { omp_set_num_threads(saved); }
  int saved;
};

std::vector<std::vector<Int>> classes_of(const MinimalityReport& r) {
  std::vector<std::vector<Int>> out;
  for (const auto& c : r.classes) out.push_back(c.members);
  return out;
}

const std::vector<SystemSpec>& affine_specs() {
  static const std::vector<SystemSpec> specs{SystemSpec::collatz(), SystemSpec::qxd(5, 1), SystemSpec::qxd(3, 5),
                                             SystemSpec::qxd(7, 1), SystemSpec::alphabeta(3, {2, 4}, {1, 5})};
  return specs;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference") {
  for (const int threads : {1, 4}) {
    ThreadScope scope(threads);
    CAPTURE(threads);
    for (const auto& spec : affine_specs()) {
      const auto sys = make_system(spec);
      CAPTURE(describe(spec));
      CHECK(enumerate_cycles(sys, 12) == reference::enumerate_cycles(sys, 12));

      const auto w = Window::range(1, 400);
      const auto a = verify_tuc_window(sys, w, 128);
      const auto b = reference::verify_tuc_window(sys, w, 128);
      CHECK(a.max_length == b.max_length);
      CHECK(a.max_pair == b.max_pair);
      CHECK(a.pairs_checked == b.pairs_checked);
      CHECK(a.undistinguished == b.undistinguished);

      const auto ma = minimality_probe(sys, Window::range(1, 300), 2000);
      const auto mb = reference::minimality_probe(sys, Window::range(1, 300), 2000);
      CHECK(classes_of(ma) == classes_of(mb));
      CHECK(ma.budget_exhausted == mb.budget_exhausted);
      CHECK(ma.unresolved_escapes == mb.unresolved_escapes);

      const auto ua = check_uniqueness(sys, 8);
      const auto ub = reference::check_uniqueness(sys, 8);
      CHECK(ua.pass == ub.pass);
      CHECK(ua.words_checked == ub.words_checked);
      CHECK(ua.words_with_fixed_point == ub.words_with_fixed_point);
    }
    const auto c = make_system(SystemSpec::collatz());
    const auto ca = convergence_scan(c, 5000, 1, 1000);
    const auto cb = reference::convergence_scan(c, 5000, 1, 1000);
    CHECK(ca.max_steps == cb.max_steps);
    CHECK(ca.argmax_steps == cb.argmax_steps);
    CHECK(ca.failures == cb.failures);
    // 5x+1 has divergent-looking and cyclic starts that never reach 1.
    const auto f = make_system(SystemSpec::qxd(5, 1));
    const auto fa = convergence_scan(f, 200, 1, 300);
    const auto fb = reference::convergence_scan(f, 200, 1, 300);
    CHECK(fa.failures == fb.failures);
    CHECK_FALSE(fa.failures.empty());
  }
}

TEST_CASE("parallel kernels on random finite tables") {
  Rng rng(2024);
  for (int t = 0; t < 25; ++t) {
    const auto sys = make_system(random_table(rng, 3 + rng() % 12, 2 + static_cast<int>(rng() % 2)));
    for (const int threads : {1, 4}) {
      ThreadScope scope(threads);
      const auto all = Window::all(sys);
      const auto a = verify_tuc_window(sys, all, 200);
      const auto b = reference::verify_tuc_window(sys, all, 200);
      CHECK(a.undistinguished == b.undistinguished);
      CHECK(a.max_length == b.max_length);
      CHECK(classes_of(minimality_probe(sys, all, 10)) == classes_of(reference::minimality_probe(sys, all, 10)));
      const auto ua = check_uniqueness(sys, 6);
      const auto ub = reference::check_uniqueness(sys, 6);
      CHECK(ua.pass == ub.pass);
      CHECK(ua.violations.size() == ub.violations.size());
    }
  }
}
