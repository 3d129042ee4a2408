#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cdyn/coding.hpp"
#include "cdyn/integer.hpp"
#include "cdyn/linalg.hpp"
#include "cdyn/system.hpp"
#include "cdyn/window.hpp"
#include "cdyn/words.hpp"

namespace cdyn {

enum class Arithmetic { Exact, Float };

inline constexpr double kFloatTolerance = 1e-9;

/// Spanning set of a subspace of the window's coordinate space.
/// Exact mode keeps mutually orthogonal rational vectors (unnormalized, since
/// unit vectors need square roots); float mode keeps orthonormal vectors.
struct SubspaceBasis {
  Arithmetic mode = Arithmetic::Exact;
  std::vector<RationalVector> exact;
  std::vector<std::vector<double>> approx;
  double tolerance = kFloatTolerance;

  std::size_t dim() const { return mode == Arithmetic::Exact ? exact.size() : approx.size(); }

  static SubspaceBasis from_vectors(const std::vector<RationalVector>& spanning);
  static SubspaceBasis from_vectors(const std::vector<std::vector<double>>& spanning, double tolerance);
};

/// The operators T_1..T_k compressed to a finite window. Column c of M_i holds a
/// single 1 at row index(f(x_c)) when x_c is in branch i and f(x_c) is in the
/// window, and is zero otherwise.
class Truncation {
 public:
  Truncation(DynamicalSystem sys, Window window);

  const DynamicalSystem& system() const { return sys_; }
  const Window& window() const { return window_; }
  int k() const { return sys_.k(); }
  std::size_t size() const { return window_.size(); }

  Branch branch(std::size_t c) const { return branch_[c]; }
  std::optional<std::size_t> image(std::size_t c) const { return image_[c]; }
  /// Image and every preimage of the state lie inside the window.
  bool interior(std::size_t c) const { return interior_[c]; }
  /// Window states of branch i whose image leaves the window (ascending).
  const std::vector<Int>& escapes(Branch i) const { return escapes_[static_cast<std::size_t>(i - 1)]; }
  bool escape_free() const;
  bool closed() const { return closed_; }

  SparseMatrix matrix(Branch i) const;
  RationalVector apply(Branch i, const RationalVector& v) const;
  RationalVector apply_adjoint(Branch i, const RationalVector& v) const;
  std::vector<double> apply(Branch i, const std::vector<double>& v) const;
  std::vector<double> apply_adjoint(Branch i, const std::vector<double>& v) const;

 private:
  DynamicalSystem sys_;
  Window window_;
  std::vector<Branch> branch_;
  std::vector<std::optional<std::size_t>> image_;
  /// For each branch, row index -> column index of the unique column mapping there.
  std::vector<std::vector<std::optional<std::size_t>>> preimage_;
  std::vector<bool> interior_;
  std::vector<std::vector<Int>> escapes_;
  bool closed_ = true;
};

Truncation build_truncation(const DynamicalSystem& sys, const Window& window);

/// M_{i_m} ... M_{i_1} v.
RationalVector apply_word_op(const Truncation& trunc, const Word& word, const RationalVector& v);
std::vector<double> apply_word_op(const Truncation& trunc, const Word& word, const std::vector<double>& v);
SparseMatrix word_operator(const Truncation& trunc, const Word& word);

/// M_{i_1}^T ... M_{i_m}^T M_{i_m} ... M_{i_1} for the prefix symbols.
SparseMatrix projection_P(const Truncation& trunc, const CodingPrefix& prefix);

struct PmLimitReport {
  bool stabilized = false;
  /// First m with P_m a = <a, e_x> e_x.
  std::size_t index = 0;
  std::size_t cap = 0;
  RationalVector limit;
};

/// Applies P_m (prefix = coding of x) to a for m = 1, 2, ... until it equals
/// <a, e_x> e_x. Throws WindowTooSmall when a coordinate is removed because its
/// orbit left the window rather than because its coding differs.
PmLimitReport verify_pm_limit(const Truncation& trunc, const RationalVector& a, const Int& x, std::size_t cap);

SubspaceBasis subspace_from_invariant_set(const Truncation& trunc, const std::vector<Int>& states);

struct ReducingReport {
  bool pass = true;
  struct Witness {
    Branch branch = 0;
    std::size_t vector = 0;
    bool adjoint = false;
  };
  std::optional<Witness> witness;
};

/// Checks M_i v and M_i^T v stay in the span for every basis vector and branch.
/// With interior_only, residual entries are only inspected on interior coordinates.
ReducingReport is_reducing(const Truncation& trunc, const SubspaceBasis& basis, bool interior_only);

struct CommutantReport {
  std::size_t dimension = 0;
  std::vector<IntMatrix> basis;
  bool commutative = false;
  /// Every minimal projection of the commutant was found with rational range.
  bool split = false;
  /// Number of reducing subspaces: 2^dimension when commutative, unset (infinite) otherwise.
  std::optional<std::size_t> lattice_size;
  /// Minimal reducing subspaces (complete when split).
  std::vector<SubspaceBasis> minimal;
};

/// Exact commutant of {M_i, M_i^T} for an escape-free finite system and the
/// minimal reducing subspaces it determines.
CommutantReport commutant_projections(const Truncation& trunc);

struct CorrespondenceReport {
  std::size_t invariant_atoms = 0;       // total orbits
  std::size_t invariant_sets = 0;        // 2^atoms
  std::optional<std::size_t> reducing_subspaces;
  bool atoms_reducing = false;           // every H_K passes is_reducing
  bool injective = false;
  bool surjective = false;
  bool order_preserving = false;
  bool bijection() const { return injective && surjective && order_preserving; }
  CommutantReport commutant;
};

/// Compares the invariant-set lattice with the reducing-subspace lattice of an
/// escape-free finite system through the map K -> span{e_x : x in K}.
CorrespondenceReport invariant_reducing_correspondence(const Truncation& trunc);

/// Eigenvalue-1 eigenspace of the truncated M_I.
SubspaceBasis fixed_vectors_of_word(const Truncation& trunc, const Word& word,
                                    Arithmetic mode = Arithmetic::Exact);

/// Whether the truncated M_I vanishes, and if so whether a window state still
/// follows the word (so T_I itself is nonzero and the window is to blame).
struct WordOperatorStatus {
  bool truncated_zero = false;
  std::optional<Int> replay_witness;
  bool window_caused() const { return truncated_zero && replay_witness.has_value(); }
};

WordOperatorStatus word_operator_status(const Truncation& trunc, const Word& word);

/// Exact identity M M^T M = M.
bool is_partial_isometry(const SparseMatrix& m);

}  // namespace cdyn
