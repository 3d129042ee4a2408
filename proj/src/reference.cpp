#include "cdyn/reference.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "cdyn/error.hpp"

namespace cdyn::reference {

namespace {

template <class Visit>
void for_each_word(int k, std::size_t max_len, Word& w, Visit&& visit) {
  for (Branch s = 1; s <= k; ++s) {
    w.symbols.push_back(s);
    visit(w);
    if (w.size() < max_len) {
      for_each_word(k, max_len, w, visit);
    }
    w.symbols.pop_back();
  }
}

std::optional<Int> natural_fixed_point(const DynamicalSystem& sys, const Word& w, bool& identity) {
  const AffineMap f = compose_affine(sys, w);
  identity = f.a == 1 && f.b == 0;
  if (f.a == 1) {
    return std::nullopt;
  }
  const Rational x = f.b / (Rational(1) - f.a);
  if (x.get_den() != 1 || x <= 0 || !replay_matches(sys, x.get_num(), w)) {
    return std::nullopt;
  }
  return x.get_num();
}

}  // namespace

std::vector<CycleEntry> enumerate_cycles(const DynamicalSystem& sys, std::size_t max_len) {
  std::set<std::vector<Int>> cycles;
  Word w;
  for_each_word(sys.k(), max_len, w, [&](const Word& word) {
    bool identity = false;
    const auto x = natural_fixed_point(sys, word, identity);
    if (!x) {
      return;
    }
    std::vector<Int> states{*x};
    for (Int cur = sys.apply(*x); cur != *x; cur = sys.apply(cur)) {
      states.push_back(cur);
    }
    cycles.insert(canonical_cycle(std::move(states)));
  });
  std::vector<CycleEntry> out;
  for (const auto& c : cycles) {
    out.push_back(CycleEntry{cycle_word(sys, c), c});
  }
  std::stable_sort(out.begin(), out.end(), [](const CycleEntry& a, const CycleEntry& b) {
    if (a.cycle.front() != b.cycle.front()) return a.cycle.front() < b.cycle.front();
    return a.cycle.size() < b.cycle.size();
  });
  return out;
}

TucReport verify_tuc_window(const DynamicalSystem& sys, const Window& window, std::size_t cap) {
  TucReport report;
  const std::size_t n = window.size();
  report.states = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++report.pairs_checked;
      const auto len = distinguishing_prefix_length(sys, window.at(i), window.at(j), cap);
      if (!len) {
        report.undistinguished.emplace_back(window.at(i), window.at(j));
      } else if (*len > report.max_length) {
        report.max_length = *len;
        report.max_pair = std::make_pair(window.at(i), window.at(j));
      }
    }
  }
  return report;
}

MinimalityReport minimality_probe(const DynamicalSystem& sys, const Window& window, std::size_t budget) {
  const std::size_t n = window.size();
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<bool> unresolved(n, false);
  MinimalityReport report;
  for (std::size_t i = 0; i < n; ++i) {
    Int cur = sys.apply(window.at(i));
    std::optional<std::size_t> hit = window.index_of(cur);
    for (std::size_t step = 0; !hit && step < budget; ++step) {
      cur = sys.apply(cur);
      hit = window.index_of(cur);
    }
    if (hit) {
      adj[i].push_back(*hit);
      adj[*hit].push_back(i);
    } else {
      unresolved[i] = true;
      ++report.unresolved_escapes;
    }
  }
  report.budget_exhausted = report.unresolved_escapes > 0;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return window.at(a) < window.at(b); });
  std::vector<bool> seen(n, false);
  for (const std::size_t s : order) {
    if (seen[s]) continue;
    MinimalityClass cls;
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      cls.members.push_back(window.at(u));
      cls.frontier_resolved = cls.frontier_resolved && !unresolved[u];
      for (const std::size_t v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    std::sort(cls.members.begin(), cls.members.end());
    report.classes.push_back(std::move(cls));
  }
  return report;
}

UniquenessReport check_uniqueness(const DynamicalSystem& sys, std::size_t max_len) {
  UniquenessReport report;
  Word w;
  for_each_word(sys.k(), max_len, w, [&](const Word& word) {
    ++report.words_checked;
    UniquenessViolation v;
    v.word = word;
    if (sys.is_affine()) {
      bool identity = false;
      if (auto x = natural_fixed_point(sys, word, identity)) v.fixed_points.push_back(*x);
      v.identity = identity;
    } else {
      v.fixed_points = fixed_points_exhaustive(sys, word);
    }
    if (!v.fixed_points.empty()) ++report.words_with_fixed_point;
    if (v.identity || v.fixed_points.size() >= 2) report.violations.push_back(std::move(v));
  });
  std::stable_sort(report.violations.begin(), report.violations.end(), [](const auto& a, const auto& b) {
    if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
    return a.word < b.word;
  });
  report.pass = report.violations.empty();
  return report;
}

ConvergenceReport convergence_scan(const DynamicalSystem& sys, unsigned long n, const Int& target, std::size_t cap) {
  ConvergenceReport report;
  report.checked = n;
  report.argmax_steps = 0;
  for (unsigned long i = 1; i <= n; ++i) {
    Int cur = i;
    std::size_t steps = 0;
    while (cur != target && steps < cap) {
      cur = sys.apply(cur);
      ++steps;
    }
    if (cur != target) {
      report.failures.emplace_back(i);
    } else if (steps > report.max_steps) {
      report.max_steps = steps;
      report.argmax_steps = i;
    }
  }
  return report;
}

}  // namespace cdyn::reference
