#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cdyn/integer.hpp"
#include "cdyn/operators.hpp"
#include "cdyn/symbolic.hpp"
#include "cdyn/system.hpp"
#include "cdyn/window.hpp"

namespace cdyn {

/// A map between the state sets of two systems with the same branch count.
class Morphism {
 public:
  struct Table {
    std::map<Int, Int> map;
  };
  /// x -> u x + v.
  struct Affine {
    Int u;
    Int v;
  };
  /// Applies `steps` left to right.
  struct Chain {
    std::vector<Morphism> steps;
  };
  using Rule = std::variant<Table, Affine, Chain>;

  Morphism(DynamicalSystem source, DynamicalSystem target, Rule rule);

  static Morphism table(DynamicalSystem source, DynamicalSystem target, std::map<Int, Int> map);
  static Morphism affine(DynamicalSystem source, DynamicalSystem target, Int u, Int v);
  static Morphism identity(const DynamicalSystem& sys);

  const DynamicalSystem& source() const { return *source_; }
  const DynamicalSystem& target() const { return *target_; }
  const Rule& rule() const { return rule_; }
  /// Both systems are finite tables and the rule is defined on every source state.
  bool is_finite() const;

  Int operator()(const Int& x) const;

 private:
  std::shared_ptr<const DynamicalSystem> source_;
  std::shared_ptr<const DynamicalSystem> target_;
  Rule rule_;
};

struct HomomorphismViolation {
  Int x;
  /// 0: phi(x) is not a target state, 1: phi(f(x)) != g(phi(x)), 2: branch not preserved.
  int condition = 0;
  std::string detail;
};

struct HomomorphismReport {
  bool pass = true;
  std::size_t checked = 0;
  /// Evidence covers only a window of an infinite (or partially checked) source.
  bool window_verified = false;
  std::optional<HomomorphismViolation> violation;
};

/// Checks phi(f(x)) = g(phi(x)) and phi(X_i) within Y_i for every x in the window.
HomomorphismReport check_homomorphism(const Morphism& phi, const Window& window);

/// psi after phi. Throws DomainMismatch unless phi's target is psi's source.
Morphism compose(const Morphism& psi, const Morphism& phi);

/// True iff the two morphisms agree at every state of the window.
bool agree_on(const Morphism& a, const Morphism& b, const Window& window);

struct IsomorphismReport {
  bool isomorphism = false;
  bool injective = false;
  bool surjective = false;
  /// Exact verdict over finite state sets; otherwise window evidence.
  bool exact = false;
  std::optional<bool> inverse_homomorphism;
  std::optional<Morphism> inverse;
  std::optional<std::pair<Int, Int>> collision;
};

/// Exact for table morphisms between finite systems. Otherwise checks
/// injectivity on the window and surjectivity onto `target_window`, which
/// defaults to the integer range spanned by phi(window).
IsomorphismReport is_isomorphism(const Morphism& phi, const Window& window,
                                 const std::optional<Window>& target_window = std::nullopt);

/// phi-hat on the stored codings of sampled states: x-hat -> (phi(x))-hat.
struct InducedSymbolic {
  std::map<EventualWord, EventualWord> table;
  std::size_t sampled = 0;
  /// States whose orbit did not close up within the cap.
  std::size_t unresolved = 0;
  bool well_defined = true;
  bool injective = true;
  /// Every stored coding is sent to itself.
  bool preserves_codings = true;

  std::optional<EventualWord> operator()(const EventualWord& w) const;
};

InducedSymbolic induced_symbolic(const Morphism& phi, const std::vector<Int>& sample, std::size_t cap);

/// Finite system on the distinct codings of an escape-free finite system,
/// with states 1..m in the order of the sorted codings.
struct CodingTable {
  DynamicalSystem system;
  std::vector<EventualWord> codings;
  Morphism coding_map;
};

CodingTable coding_table(const DynamicalSystem& sys, std::size_t cap);

/// x -> x-hat as a homomorphism into the shift: branch of x equals the first
/// symbol and f(x)-hat equals the shift of x-hat, for every x in the window.
struct CodingHomReport {
  bool pass = true;
  std::size_t checked = 0;
  std::size_t unresolved = 0;
  std::optional<Int> witness;
};

CodingHomReport check_coding_homomorphism(const DynamicalSystem& sys, const Window& window, std::size_t cap);

struct TucIsoReport {
  bool injective = false;
  bool intertwines = false;
  bool exact = false;
  std::size_t states = 0;
  std::optional<IsomorphismReport> table_iso;
  bool pass() const { return injective && intertwines && (!table_iso || table_iso->isomorphism); }
};

/// Window witness that x -> x-hat is an isomorphism onto the symbolic system.
/// Throws PreconditionUnmet when the window fails the totally uniqueness scan.
TucIsoReport verify_tuc_iso(const DynamicalSystem& sys, const Window& window, std::size_t cap);

struct ConjugationReport {
  bool pass = true;
  std::size_t compared_columns = 0;
  std::optional<Branch> mismatch_branch;
  std::optional<std::size_t> mismatch_column;
  /// perm[c] = target index of phi(window_a[c]).
  std::vector<std::size_t> permutation;
};

/// U e_x = e_{phi(x)}; checks U M_i U^T = N_i on columns interior to both windows.
/// Throws WindowMismatch unless phi maps window A bijectively onto window B.
ConjugationReport conjugate_unitary(const Morphism& phi, const Truncation& a, const Truncation& b);

struct IsometryReport {
  bool isometry = false;  // V^T V = I
  bool intertwines = true;  // V^T N_i V = M_i on interior columns
  bool orbit_condition_exact = true;
  std::size_t compared_columns = 0;
  std::optional<Branch> mismatch_branch;
  std::optional<std::size_t> mismatch_column;
  bool pass() const { return isometry && intertwines; }
};

/// V e_x = e_{phi(x)}. Throws WindowMismatch when phi(window A) is not inside
/// window B or phi is not injective there, and OrbitConditionFailed when
/// phi(Orb(x)) differs from Orb(phi(x)) on the windows.
IsometryReport induced_isometry(const Morphism& phi, const Truncation& a, const Truncation& b,
                                std::size_t node_budget = 1'000'000);

}  // namespace cdyn
