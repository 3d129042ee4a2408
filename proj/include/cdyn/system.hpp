#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cdyn/integer.hpp"

namespace cdyn {

/// Branch index, 1-based.
using Branch = int;

struct QxPlusD {
  Int q;
  Int d;
  bool operator==(const QxPlusD&) const = default;
};

/// n -> alpha[i-1] * n + beta[i-1] when n = i (mod k), 1 <= i < k; n -> n / k when k | n.
struct AlphaBeta {
  int k = 2;
  std::vector<Int> alpha;
  std::vector<Int> beta;
  bool operator==(const AlphaBeta&) const = default;
};

struct FiniteTable {
  int k = 1;
  std::vector<Int> states;
  std::map<Int, Branch> branch;
  std::map<Int, Int> image;
  bool operator==(const FiniteTable&) const = default;
};

struct SystemSpec {
  std::variant<QxPlusD, AlphaBeta, FiniteTable> family;

  static SystemSpec collatz() { return qxd(3, 1); }
  static SystemSpec qxd(Int q, Int d) { return {QxPlusD{std::move(q), std::move(d)}}; }
  static SystemSpec alphabeta(int k, std::vector<Int> alpha, std::vector<Int> beta) {
    return {AlphaBeta{k, std::move(alpha), std::move(beta)}};
  }
  /// Branch and image given as parallel lists over `states`.
  static SystemSpec table(int k, const std::vector<Int>& states, const std::vector<Branch>& branch,
                          const std::vector<Int>& image);

  bool operator==(const SystemSpec&) const = default;
};

std::string describe(const SystemSpec& spec);

/// Affine branch x -> a*x + b written over the rationals.
struct BranchMap {
  Rational a;
  Rational b;
};

class DynamicalSystem {
 public:
  const SystemSpec& spec() const { return spec_; }
  int k() const { return k_; }
  bool is_affine() const { return !table_; }
  bool is_finite() const { return static_cast<bool>(table_); }

  bool in_domain(const Int& x) const;
  Branch branch_of(const Int& x) const;
  Int apply(const Int& x) const;
  /// All y with f(y) = x, labelled by branch; at most one per branch.
  std::vector<std::pair<Int, Branch>> preimages(const Int& x) const;

  /// Finite tables only: the state set in ascending order.
  const std::vector<Int>& states() const;

  /// Affine families only: the branch map of branch i as a rational affine map.
  BranchMap branch_map(Branch i) const;
  /// Affine families only: alpha/beta coefficients (length k-1).
  const std::vector<Int>& alpha() const { return alpha_; }
  const std::vector<Int>& beta() const { return beta_; }

 private:
  friend DynamicalSystem make_system(SystemSpec spec);
  friend DynamicalSystem make_system_unchecked(SystemSpec spec);
  static DynamicalSystem build(SystemSpec spec, bool check_injective);

  struct Table {
    std::vector<Int> states;
    std::unordered_map<Int, std::pair<Branch, Int>, IntHash> forward;
    std::unordered_map<Int, std::vector<std::pair<Int, Branch>>, IntHash> inverse;
  };

  SystemSpec spec_;
  int k_ = 0;
  Int k_int_;
  std::vector<Int> alpha_;
  std::vector<Int> beta_;
  std::shared_ptr<const Table> table_;
};

/// Validates the spec (parity, shape, per-branch injectivity) and builds the system.
DynamicalSystem make_system(SystemSpec spec);
/// Builds without the injectivity check; shape and closure are still validated.
/// Used to exercise the bounded-condition checker on corrupted tables.
DynamicalSystem make_system_unchecked(SystemSpec spec);

struct BoundedConditionReport {
  bool pass = true;
  std::size_t checked = 0;
  /// Two distinct states of one branch with the same image.
  std::optional<std::pair<Int, Int>> collision;
  std::optional<Branch> collision_branch;
  /// State whose branch index fell outside 1..k.
  std::optional<Int> bad_branch;
};

class Window;
BoundedConditionReport verify_bounded_condition(const DynamicalSystem& sys, const Window& window);

}  // namespace cdyn
