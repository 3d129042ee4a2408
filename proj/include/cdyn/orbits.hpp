#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "cdyn/integer.hpp"
#include "cdyn/system.hpp"
#include "cdyn/window.hpp"

namespace cdyn {

struct OrbitRecord {
  enum class Stop { EnteredCycle, HitCap };

  Int start;
  /// start, f(start), ... up to the last state before the first revisit (or cap).
  std::vector<Int> trajectory;
  Stop stop = Stop::HitCap;
  /// Cycle rotated so that its minimum state comes first.
  std::vector<Int> cycle;
  /// Index into trajectory where the cycle is entered.
  std::size_t entry_index = 0;
  std::size_t cap = 0;

  bool entered_cycle() const { return stop == Stop::EnteredCycle; }
};

/// Iterates f from x for at most `cap` applications, stopping at the first revisit.
OrbitRecord orbit_iterate(const DynamicalSystem& sys, const Int& x, std::size_t cap);

/// Rotates a cycle so its minimum element is first.
std::vector<Int> canonical_cycle(std::vector<Int> cycle);

/// Window-restricted closure of a seed set under y -> f(y) and y -> f^{-1}(y).
struct TotalOrbitApprox {
  std::set<Int> members;
  /// Members whose image or some preimage lies outside the window.
  std::set<Int> frontier;
  bool budget_exhausted = false;
  std::size_t expanded = 0;

  bool exact() const { return frontier.empty() && !budget_exhausted; }
};

TotalOrbitApprox total_orbit(const DynamicalSystem& sys, const Int& x, const Window& window,
                             std::size_t node_budget);
TotalOrbitApprox invariant_closure(const DynamicalSystem& sys, const std::vector<Int>& seed,
                                   const Window& window, std::size_t node_budget);

struct MinimalityClass {
  std::vector<Int> members;  // ascending
  /// Every forward escape from this class re-entered the window within budget.
  bool frontier_resolved = true;
};

struct MinimalityReport {
  std::vector<MinimalityClass> classes;  // ordered by smallest member
  bool budget_exhausted = false;
  std::size_t unresolved_escapes = 0;

  std::size_t class_count() const { return classes.size(); }
};

/// Partitions the window into classes of the orbit equivalence using in-window
/// edges plus forward chases (up to `budget` steps) of states that leave it.
MinimalityReport minimality_probe(const DynamicalSystem& sys, const Window& window, std::size_t budget);

/// Number of steps until x first reaches `target`, or nullopt if not within cap.
std::optional<std::size_t> steps_to_reach(const DynamicalSystem& sys, const Int& x, const Int& target,
                                          std::size_t cap);

struct ConvergenceReport {
  std::size_t checked = 0;
  std::size_t max_steps = 0;
  Int argmax_steps;
  /// Starts that did not reach the target within the cap, ascending.
  std::vector<Int> failures;
};

/// Scans x = 1..n and records how long each takes to reach `target`.
ConvergenceReport convergence_scan(const DynamicalSystem& sys, unsigned long n, const Int& target,
                                   std::size_t cap);

}  // namespace cdyn
