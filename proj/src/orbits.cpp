#include "cdyn/orbits.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <omp.h>

#include "cdyn/error.hpp"
#include "cdyn/union_find.hpp"

namespace cdyn {

std::vector<Int> canonical_cycle(std::vector<Int> cycle) {
  if (!cycle.empty()) {
    const auto min_it = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), min_it, cycle.end());
  }
  return cycle;
}

OrbitRecord orbit_iterate(const DynamicalSystem& sys, const Int& x, std::size_t cap) {
  if (cap < 1) {
    throw Error(ErrorCode::PreconditionUnmet, "orbit cap must be >= 1");
  }
  OrbitRecord rec;
  rec.start = x;
  rec.cap = cap;
  std::unordered_map<Int, std::size_t, IntHash> seen;
  rec.trajectory.push_back(x);
  seen.emplace(x, 0);
  Int cur = x;
  for (std::size_t step = 0; step < cap; ++step) {
    cur = sys.apply(cur);
    const auto it = seen.find(cur);
    if (it != seen.end()) {
      rec.stop = OrbitRecord::Stop::EnteredCycle;
      rec.entry_index = it->second;
      rec.cycle = canonical_cycle(
          std::vector<Int>(rec.trajectory.begin() + static_cast<std::ptrdiff_t>(it->second), rec.trajectory.end()));
      return rec;
    }
    seen.emplace(cur, rec.trajectory.size());
    rec.trajectory.push_back(cur);
  }
  rec.stop = OrbitRecord::Stop::HitCap;
  return rec;
}

TotalOrbitApprox invariant_closure(const DynamicalSystem& sys, const std::vector<Int>& seed,
                                   const Window& window, std::size_t node_budget) {
  if (node_budget < 1) {
    throw Error(ErrorCode::PreconditionUnmet, "node budget must be >= 1");
  }
  TotalOrbitApprox out;
  std::unordered_set<Int, IntHash> members;
  std::deque<Int> queue;
  for (const auto& x : seed) {
    if (!window.contains(x)) {
      throw Error(ErrorCode::PreconditionUnmet, "seed " + to_dec(x) + " lies outside the window");
    }
    if (members.insert(x).second) {
      queue.push_back(x);
    }
  }
  auto visit = [&](const Int& y) {
    if (members.insert(y).second) {
      queue.push_back(y);
    }
  };
  while (!queue.empty()) {
    if (out.expanded >= node_budget) {
      out.budget_exhausted = true;
      break;
    }
    const Int y = std::move(queue.front());
    queue.pop_front();
    ++out.expanded;
    const Int image = sys.apply(y);
    if (window.contains(image)) {
      visit(image);
    } else {
      out.frontier.insert(y);
    }
    for (const auto& [pre, branch] : sys.preimages(y)) {
      if (window.contains(pre)) {
        visit(pre);
      } else {
        out.frontier.insert(y);
      }
    }
  }
  out.members.insert(members.begin(), members.end());
  return out;
}

TotalOrbitApprox total_orbit(const DynamicalSystem& sys, const Int& x, const Window& window,
                             std::size_t node_budget) {
  return invariant_closure(sys, {x}, window, node_budget);
}

namespace {

/// For state index i: index of the first in-window state on its forward orbit
/// after one step, or nullopt if the chase ran out of budget.
std::optional<std::size_t> reentry(const DynamicalSystem& sys, const Window& window, const Int& x,
                                   std::size_t budget) {
  Int cur = sys.apply(x);
  for (std::size_t step = 0;; ++step) {
    if (auto idx = window.index_of(cur)) {
      return idx;
    }
    if (step >= budget) {
      return std::nullopt;
    }
    cur = sys.apply(cur);
  }
}

}  // namespace

MinimalityReport minimality_probe(const DynamicalSystem& sys, const Window& window, std::size_t budget) {
  const std::size_t n = window.size();
  std::vector<std::optional<std::size_t>> target(n);
  const auto signed_n = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < signed_n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    target[u] = reentry(sys, window, window.at(u), budget);
  }

  UnionFind uf(n);
  std::vector<bool> unresolved(n, false);
  MinimalityReport report;
  for (std::size_t i = 0; i < n; ++i) {
    if (target[i]) {
      uf.unite(i, *target[i]);
    } else {
      unresolved[i] = true;
      ++report.unresolved_escapes;
    }
  }
  report.budget_exhausted = report.unresolved_escapes > 0;

  std::unordered_map<std::size_t, std::size_t> class_of_root;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return window.at(a) < window.at(b); });
  for (const std::size_t i : order) {
    const std::size_t root = uf.find(i);
    auto [it, inserted] = class_of_root.emplace(root, report.classes.size());
    if (inserted) {
      report.classes.emplace_back();
    }
    auto& cls = report.classes[it->second];
    cls.members.push_back(window.at(i));
    if (unresolved[i]) {
      cls.frontier_resolved = false;
    }
  }
  return report;
}

std::optional<std::size_t> steps_to_reach(const DynamicalSystem& sys, const Int& x, const Int& target,
                                          std::size_t cap) {
  Int cur = x;
  for (std::size_t step = 0; step <= cap; ++step) {
    if (cur == target) {
      return step;
    }
    cur = sys.apply(cur);
  }
  return std::nullopt;
}

ConvergenceReport convergence_scan(const DynamicalSystem& sys, unsigned long n, const Int& target,
                                   std::size_t cap) {
  ConvergenceReport report;
  report.checked = n;
  report.argmax_steps = 0;
  std::vector<std::size_t> steps(n, 0);
  std::vector<char> failed(n, 0);
  const auto signed_n = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < signed_n; ++i) {
    const auto s = steps_to_reach(sys, Int(static_cast<unsigned long>(i) + 1), target, cap);
    if (s) {
      steps[static_cast<std::size_t>(i)] = *s;
    } else {
      failed[static_cast<std::size_t>(i)] = 1;
    }
  }
  for (unsigned long i = 0; i < n; ++i) {
    if (failed[i]) {
      report.failures.emplace_back(i + 1);
    } else if (steps[i] > report.max_steps) {
      report.max_steps = steps[i];
      report.argmax_steps = i + 1;
    }
  }
  return report;
}

}  // namespace cdyn
