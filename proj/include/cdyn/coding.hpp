#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cdyn/integer.hpp"
#include "cdyn/system.hpp"
#include "cdyn/window.hpp"

namespace cdyn {

/// First symbols of the coding of `source`: symbols[j] = branch_of(f^j(source)).
struct CodingPrefix {
  std::vector<Branch> symbols;
  std::optional<Int> source;

  std::size_t size() const { return symbols.size(); }
  bool operator==(const CodingPrefix&) const = default;
};

CodingPrefix coding_prefix(const DynamicalSystem& sys, const Int& x, std::size_t len);

/// Drops the first symbol and advances the source to f(source).
CodingPrefix shift(const CodingPrefix& prefix, const DynamicalSystem& sys);
/// Drops the first symbol; any source is discarded.
CodingPrefix shift(const CodingPrefix& prefix);

/// Minimal j <= cap at which the codings of x and y differ.
std::optional<std::size_t> distinguishing_prefix_length(const DynamicalSystem& sys, const Int& x, const Int& y,
                                                        std::size_t cap);

struct TucReport {
  std::size_t states = 0;
  std::size_t pairs_checked = 0;
  std::size_t max_length = 0;
  std::optional<std::pair<Int, Int>> max_pair;
  /// Pairs whose codings agree through the cap, ordered.
  std::vector<std::pair<Int, Int>> undistinguished;
  bool pass() const { return undistinguished.empty(); }
};

/// Runs the distinguishing search over every unordered pair of the window.
TucReport verify_tuc_window(const DynamicalSystem& sys, const Window& window, std::size_t cap);

struct AlphaBetaReport {
  bool coprime = true;
  std::vector<Branch> non_coprime_branches;
  bool multiple_of_k = true;
  std::size_t checked = 0;
  std::size_t horizon = 0;
  /// Starts whose first `horizon` iterates contain no multiple of k (first 64).
  std::vector<Int> multiple_failures;
  std::size_t multiple_failure_count = 0;
  bool pass() const { return coprime && multiple_of_k; }
};

/// gcd(a_i, k) = 1 for every affine branch, and every n in the window meets a
/// multiple of k within {n, f(n), ..., f^{horizon-1}(n)}. horizon 0 means k.
AlphaBetaReport check_alphabeta_hypotheses(const DynamicalSystem& sys, const Window& window,
                                           std::size_t horizon = 0);

/// Compatible residues r_j = x mod k^j, j = 1..depth.
struct ResidueTower {
  Int k;
  std::vector<Int> digits;

  std::size_t depth() const { return digits.size(); }
  /// r_{j+1} mod k^j == r_j for every level.
  bool compatible() const;
  bool operator==(const ResidueTower&) const = default;
};

ResidueTower tower_from_state(const Int& x, const Int& k, std::size_t depth);

/// Applies the extended map level-wise. The division branch consumes one level.
ResidueTower tower_apply(const DynamicalSystem& sys, const ResidueTower& t);

struct RecoveryReport {
  /// x mod k.
  Int residue;
  /// The level at which x and y are shown to agree (j or j+1).
  std::size_t level = 0;
  bool pass = false;
};

/// Given x = y (mod k) and f(x) = f(y) (mod k^j), checks x = y (mod k^j) on the
/// affine branches and x = y (mod k^{j+1}) on the division branch.
RecoveryReport verify_recovery_lemma(const DynamicalSystem& sys, const Int& x, const Int& y, std::size_t j,
                                     std::size_t depth);

}  // namespace cdyn
