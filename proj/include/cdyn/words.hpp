#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "cdyn/integer.hpp"
#include "cdyn/system.hpp"

namespace cdyn {

/// Finite branch word (i_1, ..., i_m).
struct Word {
  std::vector<Branch> symbols;

  Word() = default;
  Word(std::initializer_list<Branch> s) : symbols(s) {}
  explicit Word(std::vector<Branch> s) : symbols(std::move(s)) {}

  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  Branch operator[](std::size_t i) const { return symbols[i]; }
  /// The word concatenated with itself m times.
  Word repeat(std::size_t m) const;
  Word rotated(std::size_t by) const;
  std::string str() const;  // "(1,2,2)"

  auto operator<=>(const Word&) const = default;
};

/// Parses "1,2,2" or "(1,2,2)".
Word parse_word(const std::string& text);

/// Throws InvalidSpec unless the word is nonempty with entries in 1..k.
void validate_word(const Word& word, int k);

/// True iff no proper cyclic rotation of the word equals the word.
bool is_aperiodic(const Word& word);
/// True iff the word is aperiodic and lexicographically least among its rotations.
bool is_lyndon(const Word& word);

/// x -> a*x + b with a > 0, kept in canonical form.
struct AffineMap {
  Rational a{1};
  Rational b{0};

  Rational operator()(const Rational& x) const { return a * x + b; }
  /// (this followed by next): x -> next(this(x)).
  AffineMap then(const AffineMap& next) const;
  bool operator==(const AffineMap&) const = default;
};

/// f_I = f_{i_m} o ... o f_{i_1} as an exact affine map.
AffineMap compose_affine(const DynamicalSystem& sys, const Word& word);

/// True iff iterating from x visits branches exactly as `word` prescribes.
bool replay_matches(const DynamicalSystem& sys, const Int& x, const Word& word);

/// The unique natural fixed point of f_I, if it exists and the branch replay is valid.
std::optional<Int> fixed_point_of_word(const DynamicalSystem& sys, const Word& word);

/// All states x of a finite system with f_I(x) = x (replay-validated).
std::vector<Int> fixed_points_exhaustive(const DynamicalSystem& sys, const Word& word);

struct CycleEntry {
  /// Branch word read from the cycle's minimum state.
  Word word;
  /// Cycle rotated to start at its minimum state.
  std::vector<Int> cycle;
  bool operator==(const CycleEntry&) const = default;
};

/// Branch word of a cycle read from cycle[0].
Word cycle_word(const DynamicalSystem& sys, const std::vector<Int>& cycle);

/// Every cycle whose branch word has length <= max_len, once each, ordered by
/// (minimum state, length). With `necklaces_only`, one Lyndon word per rotation
/// class is solved instead of every word.
std::vector<CycleEntry> enumerate_cycles(const DynamicalSystem& sys, std::size_t max_len,
                                         bool necklaces_only = true);

struct SeparatingReport {
  Int x;
  bool periodic = false;
  std::size_t period = 0;
  Word word;
  bool aperiodic = false;
  bool holds() const { return periodic && aperiodic; }
};

SeparatingReport check_separating(const DynamicalSystem& sys, const Int& x, std::size_t cap);

struct UniquenessViolation {
  Word word;
  std::vector<Int> fixed_points;  // empty when the composition is the identity
  bool identity = false;
};

struct UniquenessReport {
  bool pass = true;
  std::size_t words_checked = 0;
  std::size_t words_with_fixed_point = 0;
  std::vector<UniquenessViolation> violations;  // ordered by (length, word)
};

UniquenessReport check_uniqueness(const DynamicalSystem& sys, std::size_t max_len);

struct UniFixReport {
  std::optional<Int> base;
  std::optional<Int> power;
  bool pass = false;
};

UniFixReport verify_unifix(const DynamicalSystem& sys, const Word& word, std::size_t m);

struct CycleWordReport {
  Word word;
  bool aperiodic = false;
  /// (-1)^x along the cycle; only for two-branch affine families.
  std::optional<std::vector<int>> parity;
  bool parity_aperiodic = false;
  bool pass() const { return aperiodic && (!parity || parity_aperiodic); }
};

CycleWordReport cycle_word_aperiodicity(const DynamicalSystem& sys, const std::vector<Int>& cycle);

/// Generic aperiodicity over any comparable sequence.
template <class T>
bool is_aperiodic_sequence(const std::vector<T>& s) {
  const std::size_t m = s.size();
  for (std::size_t l = 1; l < m; ++l) {
    if (m % l != 0) {
      continue;
    }
    bool periodic = true;
    for (std::size_t j = l; j < m && periodic; ++j) {
      periodic = s[j] == s[j - l];
    }
    if (periodic) {
      return false;
    }
  }
  return true;
}

}  // namespace cdyn
