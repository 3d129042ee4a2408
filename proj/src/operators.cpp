#include "cdyn/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "cdyn/error.hpp"
#include "cdyn/union_find.hpp"

namespace cdyn {

SubspaceBasis SubspaceBasis::from_vectors(const std::vector<RationalVector>& spanning) {
  SubspaceBasis b;
  b.mode = Arithmetic::Exact;
  b.exact = gram_schmidt(spanning);
  return b;
}

SubspaceBasis SubspaceBasis::from_vectors(const std::vector<std::vector<double>>& spanning, double tolerance) {
  SubspaceBasis b;
  b.mode = Arithmetic::Float;
  b.tolerance = tolerance;
  for (auto v : spanning) {
    for (const auto& q : b.approx) {
      double c = 0;
      for (std::size_t i = 0; i < v.size(); ++i) c += v[i] * q[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
    }
    double norm = 0;
    for (const double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > tolerance) {
      for (double& x : v) x /= norm;
      b.approx.push_back(std::move(v));
    }
  }
  return b;
}

Truncation::Truncation(DynamicalSystem sys, Window window) : sys_(std::move(sys)), window_(std::move(window)) {
  if (window_.empty()) {
    throw Error(ErrorCode::PreconditionUnmet, "truncation window must be nonempty");
  }
  const std::size_t n = window_.size();
  const auto k = static_cast<std::size_t>(sys_.k());
  branch_.resize(n);
  image_.resize(n);
  interior_.assign(n, false);
  escapes_.assign(k, {});
  preimage_.assign(k, std::vector<std::optional<std::size_t>>(n));
  for (std::size_t c = 0; c < n; ++c) {
    const Int& x = window_.at(c);
    branch_[c] = sys_.branch_of(x);
    image_[c] = window_.index_of(sys_.apply(x));
    const auto b = static_cast<std::size_t>(branch_[c] - 1);
    if (image_[c]) {
      preimage_[b][*image_[c]] = c;
    } else {
      escapes_[b].push_back(x);
      closed_ = false;
    }
    bool inside = image_[c].has_value();
    for (const auto& [pre, branch] : sys_.preimages(x)) {
      inside = inside && window_.contains(pre);
    }
    interior_[c] = inside;
    closed_ = closed_ && inside;
  }
  for (auto& e : escapes_) {
    std::sort(e.begin(), e.end());
  }
}

Truncation build_truncation(const DynamicalSystem& sys, const Window& window) { return Truncation(sys, window); }

bool Truncation::escape_free() const {
  return std::all_of(escapes_.begin(), escapes_.end(), [](const auto& e) { return e.empty(); });
}

SparseMatrix Truncation::matrix(Branch i) const {
  SparseMatrix m(size(), size());
  for (std::size_t c = 0; c < size(); ++c) {
    if (branch_[c] == i && image_[c]) {
      m.set(*image_[c], c, 1);
    }
  }
  return m;
}

namespace {

template <class T>
std::vector<T> forward(const std::vector<Branch>& branch, const std::vector<std::optional<std::size_t>>& image,
                       Branch i, const std::vector<T>& v) {
  std::vector<T> out(v.size(), T(0));
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (branch[c] == i && image[c] && v[c] != T(0)) {
      out[*image[c]] += v[c];
    }
  }
  return out;
}

template <class T>
std::vector<T> backward(const std::vector<Branch>& branch, const std::vector<std::optional<std::size_t>>& image,
                        Branch i, const std::vector<T>& v) {
  std::vector<T> out(v.size(), T(0));
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (branch[c] == i && image[c]) {
      out[c] = v[*image[c]];
    }
  }
  return out;
}

}  // namespace

RationalVector Truncation::apply(Branch i, const RationalVector& v) const { return forward(branch_, image_, i, v); }
RationalVector Truncation::apply_adjoint(Branch i, const RationalVector& v) const {
  return backward(branch_, image_, i, v);
}
std::vector<double> Truncation::apply(Branch i, const std::vector<double>& v) const {
  return forward(branch_, image_, i, v);
}
std::vector<double> Truncation::apply_adjoint(Branch i, const std::vector<double>& v) const {
  return backward(branch_, image_, i, v);
}

RationalVector apply_word_op(const Truncation& trunc, const Word& word, const RationalVector& v) {
  validate_word(word, trunc.k());
  RationalVector out = v;
  for (const Branch s : word.symbols) {
    out = trunc.apply(s, out);
  }
  return out;
}

std::vector<double> apply_word_op(const Truncation& trunc, const Word& word, const std::vector<double>& v) {
  validate_word(word, trunc.k());
  std::vector<double> out = v;
  for (const Branch s : word.symbols) {
    out = trunc.apply(s, out);
  }
  return out;
}

SparseMatrix word_operator(const Truncation& trunc, const Word& word) {
  validate_word(word, trunc.k());
  SparseMatrix acc = SparseMatrix::identity(trunc.size());
  for (const Branch s : word.symbols) {
    acc = trunc.matrix(s) * acc;
  }
  return acc;
}

SparseMatrix projection_P(const Truncation& trunc, const CodingPrefix& prefix) {
  const SparseMatrix w = word_operator(trunc, Word(prefix.symbols));
  return w.transpose() * w;
}

PmLimitReport verify_pm_limit(const Truncation& trunc, const RationalVector& a, const Int& x, std::size_t cap) {
  const auto xi = trunc.window().index_of(x);
  if (!xi) {
    throw Error(ErrorCode::PreconditionUnmet, "x must lie in the window");
  }
  if (a.size() != trunc.size() || a[*xi] == 0) {
    throw Error(ErrorCode::PreconditionUnmet, "a must be indexed by the window with <a, e_x> != 0");
  }
  const DynamicalSystem& sys = trunc.system();
  const CodingPrefix prefix = coding_prefix(sys, x, cap);

  // Forward image of a under M_{i_m}...M_{i_1}, tracked per origin coordinate.
  struct Entry {
    std::size_t origin;
    std::size_t at;
  };
  std::vector<Entry> alive;
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (a[c] != 0) {
      alive.push_back({c, c});
    }
  }
  RationalVector target(a.size());
  target[*xi] = a[*xi];

  PmLimitReport report;
  report.cap = cap;
  for (std::size_t m = 1; m <= cap; ++m) {
    const Branch s = prefix.symbols[m - 1];
    std::vector<Entry> next;
    for (const auto& e : alive) {
      if (trunc.branch(e.at) != s) {
        continue;  // coding differs at position m
      }
      if (!trunc.image(e.at)) {
        throw Error(ErrorCode::WindowTooSmall, "orbit of " + to_dec(trunc.window().at(e.origin)) +
                                                   " leaves the window at step " + std::to_string(m));
      }
      next.push_back({e.origin, *trunc.image(e.at)});
    }
    alive = std::move(next);

    // P_m a = (M_I)^T M_I a.
    RationalVector pushed(a.size());
    for (const auto& e : alive) {
      pushed[e.at] = a[e.origin];
    }
    for (std::size_t j = m; j-- > 0;) {
      pushed = trunc.apply_adjoint(prefix.symbols[j], pushed);
    }
    if (pushed == target) {
      report.stabilized = true;
      report.index = m;
      report.limit = std::move(pushed);
      return report;
    }
    report.limit = std::move(pushed);
  }
  return report;
}

SubspaceBasis subspace_from_invariant_set(const Truncation& trunc, const std::vector<Int>& states) {
  std::vector<std::size_t> idx;
  for (const auto& x : states) {
    const auto i = trunc.window().index_of(x);
    if (!i) {
      throw Error(ErrorCode::PreconditionUnmet, "state " + to_dec(x) + " is outside the window");
    }
    idx.push_back(*i);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  SubspaceBasis b;
  for (const auto i : idx) {
    RationalVector e(trunc.size());
    e[i] = 1;
    b.exact.push_back(std::move(e));
  }
  return b;
}

namespace {

bool coordinate_basis(const SubspaceBasis& basis, std::vector<bool>& support) {
  for (const auto& v : basis.exact) {
    std::size_t nnz = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0) {
        ++nnz;
        at = i;
      }
    }
    if (nnz != 1) {
      return false;
    }
    support[at] = true;
  }
  return true;
}

template <class T>
bool residual_ok(const Truncation& trunc, const std::vector<T>& r, bool interior_only, double tol) {
  for (std::size_t c = 0; c < r.size(); ++c) {
    if (interior_only && !trunc.interior(c)) {
      continue;
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (std::abs(r[c]) > tol) return false;
    } else {
      if (r[c] != 0) return false;
    }
  }
  return true;
}

std::vector<double> residual_float(const std::vector<std::vector<double>>& basis, std::vector<double> v) {
  for (const auto& q : basis) {
    double c = 0;
    for (std::size_t i = 0; i < v.size(); ++i) c += v[i] * q[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
  }
  return v;
}

}  // namespace

ReducingReport is_reducing(const Truncation& trunc, const SubspaceBasis& basis, bool interior_only) {
  ReducingReport report;
  const std::size_t n = trunc.size();
  auto fail = [&](Branch i, std::size_t v, bool adjoint) {
    report.pass = false;
    report.witness = ReducingReport::Witness{i, v, adjoint};
  };

  if (basis.mode == Arithmetic::Float) {
    for (std::size_t v = 0; v < basis.approx.size(); ++v) {
      for (Branch i = 1; i <= trunc.k(); ++i) {
        for (const bool adjoint : {false, true}) {
          auto w = adjoint ? trunc.apply_adjoint(i, basis.approx[v]) : trunc.apply(i, basis.approx[v]);
          if (!residual_ok(trunc, residual_float(basis.approx, std::move(w)), interior_only, basis.tolerance)) {
            fail(i, v, adjoint);
            return report;
          }
        }
      }
    }
    return report;
  }

  std::vector<bool> support(n, false);
  const bool coordinate = coordinate_basis(basis, support);
  for (std::size_t v = 0; v < basis.exact.size(); ++v) {
    for (Branch i = 1; i <= trunc.k(); ++i) {
      for (const bool adjoint : {false, true}) {
        RationalVector w = adjoint ? trunc.apply_adjoint(i, basis.exact[v]) : trunc.apply(i, basis.exact[v]);
        if (coordinate) {
          for (std::size_t c = 0; c < n; ++c) {
            if (support[c]) {
              w[c] = 0;
            }
          }
        } else {
          w = residual(basis.exact, std::move(w));
        }
        if (!residual_ok(trunc, w, interior_only, 0.0)) {
          fail(i, v, adjoint);
          return report;
        }
      }
    }
  }
  return report;
}

namespace {

std::vector<std::vector<std::size_t>> total_orbit_atoms(const Truncation& trunc) {
  UnionFind uf(trunc.size());
  for (std::size_t c = 0; c < trunc.size(); ++c) {
    if (trunc.image(c)) {
      uf.unite(c, *trunc.image(c));
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < trunc.size(); ++c) {
    groups[uf.find(c)].push_back(c);
  }
  std::vector<std::vector<std::size_t>> atoms;
  for (auto& [root, members] : groups) {
    atoms.push_back(std::move(members));
  }
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

Int gershgorin_bound(const IntMatrix& s) {
  Int best = 0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    Int row = 0;
    for (std::size_t j = 0; j < s.cols(); ++j) {
      row += abs(s(i, j));
    }
    best = std::max(best, row);
  }
  return best;
}

struct Piece {
  std::vector<RationalVector> basis;
};

/// Splits a piece into eigenspaces of the symmetric integer matrix s over the
/// integers in [-bound, bound]; any part with irrational eigenvalues is kept as
/// one remainder piece.
std::vector<Piece> split_piece(const IntMatrix& s, const Int& bound, const Piece& piece) {
  const std::size_t n = s.rows();
  const std::size_t d = piece.basis.size();
  std::vector<IntVector> cols;
  for (const auto& w : piece.basis) {
    cols.push_back(to_primitive_integer(w));
  }
  IntMatrix w_int(n, d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      w_int(i, j) = cols[j][i];
    }
  }
  const IntMatrix sw = s * w_int;
  std::vector<Piece> out;
  std::vector<RationalVector> found;
  for (Int lambda = -bound; lambda <= bound && found.size() < d; ++lambda) {
    IntMatrix m = sw;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        m(i, j) -= lambda * w_int(i, j);
      }
    }
    const auto coeffs = nullspace(m);
    if (coeffs.empty()) {
      continue;
    }
    std::vector<RationalVector> eig;
    for (const auto& c : coeffs) {
      IntVector v(n);
      for (std::size_t j = 0; j < d; ++j) {
        if (c[j] != 0) {
          for (std::size_t i = 0; i < n; ++i) {
            v[i] += c[j] * w_int(i, j);
          }
        }
      }
      eig.push_back(to_rational(v));
    }
    Piece p{gram_schmidt(eig)};
    found.insert(found.end(), p.basis.begin(), p.basis.end());
    out.push_back(std::move(p));
  }
  if (found.size() < d) {
    std::vector<RationalVector> rest;
    for (const auto& w : piece.basis) {
      rest.push_back(residual(found, w));
    }
    Piece remainder{gram_schmidt(rest)};
    if (!remainder.basis.empty()) {
      out.push_back(std::move(remainder));
    }
  }
  return out;
}

/// True iff every element of `algebra` acts on the piece as a scalar.
bool scalar_piece(const std::vector<IntMatrix>& algebra, const Piece& piece) {
  for (const auto& b : algebra) {
    std::optional<Rational> scalar;
    for (const auto& w : piece.basis) {
      const IntVector wi = to_primitive_integer(w);
      const IntVector bw = b * wi;
      Rational c = dot(to_rational(bw), to_rational(wi)) / dot(to_rational(wi), to_rational(wi));
      if (scalar && *scalar != c) {
        return false;
      }
      scalar = c;
      for (std::size_t i = 0; i < wi.size(); ++i) {
        if (Rational(bw[i]) != c * wi[i]) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

CommutantReport commutant_projections(const Truncation& trunc) {
  if (!trunc.closed()) {
    throw Error(ErrorCode::NotClosedSystem, "commutant needs an escape-free window closed under preimages");
  }
  const std::size_t n = trunc.size();
  const std::size_t unknowns = n * n;
  auto var = [n](std::size_t r, std::size_t c) { return r * n + c; };

  std::vector<IntVector> equations;
  for (Branch i = 1; i <= trunc.k(); ++i) {
    const IntMatrix m = trunc.matrix(i).dense();
    const IntMatrix mt = m.transpose();
    for (const IntMatrix* op : {&m, &mt}) {
      // (A op - op A)[r][c] = sum_t A[r][t] op[t][c] - sum_t op[r][t] A[t][c]
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          IntVector eq(unknowns);
          bool any = false;
          for (std::size_t t = 0; t < n; ++t) {
            if ((*op)(t, c) != 0) {
              eq[var(r, t)] += (*op)(t, c);
              any = true;
            }
            if ((*op)(r, t) != 0) {
              eq[var(t, c)] -= (*op)(r, t);
              any = true;
            }
          }
          if (any) {
            equations.push_back(std::move(eq));
          }
        }
      }
    }
  }
  IntMatrix system(equations.size(), unknowns);
  for (std::size_t e = 0; e < equations.size(); ++e) {
    for (std::size_t u = 0; u < unknowns; ++u) {
      system(e, u) = equations[e][u];
    }
  }

  CommutantReport report;
  for (const auto& v : nullspace(system)) {
    IntMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) = v[var(r, c)];
      }
    }
    report.basis.push_back(std::move(a));
  }
  report.dimension = report.basis.size();

  report.commutative = true;
  for (std::size_t a = 0; a < report.basis.size() && report.commutative; ++a) {
    for (std::size_t b = a + 1; b < report.basis.size() && report.commutative; ++b) {
      report.commutative = report.basis[a] * report.basis[b] == report.basis[b] * report.basis[a];
    }
  }
  if (!report.commutative) {
    return report;
  }
  if (report.dimension < 8 * sizeof(std::size_t)) {
    report.lattice_size = std::size_t{1} << report.dimension;
  }

  std::vector<Piece> pieces;
  {
    Piece full;
    for (std::size_t i = 0; i < n; ++i) {
      RationalVector e(n);
      e[i] = 1;
      full.basis.push_back(std::move(e));
    }
    pieces.push_back(std::move(full));
  }
  for (const auto& b : report.basis) {
    const IntMatrix s = b + b.transpose();
    const Int bound = gershgorin_bound(s);
    std::vector<Piece> next;
    for (const auto& p : pieces) {
      auto parts = split_piece(s, bound, p);
      next.insert(next.end(), std::make_move_iterator(parts.begin()), std::make_move_iterator(parts.end()));
    }
    pieces = std::move(next);
  }
  bool all_scalar = true;
  for (const auto& p : pieces) {
    all_scalar = all_scalar && scalar_piece(report.basis, p);
  }
  report.split = all_scalar && pieces.size() == report.dimension;
  for (auto& p : pieces) {
    SubspaceBasis sb;
    sb.exact = std::move(p.basis);
    report.minimal.push_back(std::move(sb));
  }
  std::sort(report.minimal.begin(), report.minimal.end(), [](const auto& x, const auto& y) {
    auto first_support = [](const SubspaceBasis& s) {
      std::size_t best = s.exact.empty() ? 0 : s.exact[0].size();
      for (const auto& v : s.exact)
        for (std::size_t i = 0; i < v.size(); ++i)
          if (v[i] != 0) best = std::min(best, i);
      return best;
    };
    const auto fx = first_support(x);
    const auto fy = first_support(y);
    if (fx != fy) return fx < fy;
    return x.exact < y.exact;
  });
  return report;
}

CorrespondenceReport invariant_reducing_correspondence(const Truncation& trunc) {
  CorrespondenceReport report;
  const auto atoms = total_orbit_atoms(trunc);
  report.invariant_atoms = atoms.size();
  report.invariant_sets = atoms.size() < 64 ? (std::size_t{1} << atoms.size()) : 0;

  report.atoms_reducing = true;
  std::vector<SubspaceBasis> atom_spaces;
  for (const auto& atom : atoms) {
    std::vector<Int> states;
    for (const auto c : atom) states.push_back(trunc.window().at(c));
    atom_spaces.push_back(subspace_from_invariant_set(trunc, states));
    report.atoms_reducing = report.atoms_reducing && is_reducing(trunc, atom_spaces.back(), false).pass;
  }

  report.commutant = commutant_projections(trunc);
  report.reducing_subspaces = report.commutant.lattice_size;

  std::vector<std::size_t> atom_of(trunc.size());
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    for (const auto c : atoms[a]) atom_of[c] = a;
  }
  // Distinct nonempty disjoint supports give distinct coordinate subspaces.
  report.injective = report.atoms_reducing &&
                     std::all_of(atom_spaces.begin(), atom_spaces.end(), [](const auto& s) { return s.dim() > 0; });

  if (!report.commutant.commutative || !report.commutant.split) {
    report.surjective = false;
    report.order_preserving = report.injective;
    return report;
  }

  // Express each H_K as the set of minimal reducing subspaces it contains.
  const auto& pieces = report.commutant.minimal;
  std::vector<std::vector<bool>> atom_mask(atoms.size(), std::vector<bool>(pieces.size(), false));
  std::vector<std::size_t> atom_dim(atoms.size(), 0);
  bool pieces_inside_atoms = true;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    std::optional<std::size_t> home;
    for (const auto& v : pieces[p].exact) {
      for (std::size_t c = 0; c < v.size(); ++c) {
        if (v[c] == 0) continue;
        if (home && *home != atom_of[c]) pieces_inside_atoms = false;
        home = atom_of[c];
      }
    }
    if (home) {
      atom_mask[*home][p] = true;
      atom_dim[*home] += pieces[p].dim();
    }
  }
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (atom_dim[a] != atoms[a].size()) pieces_inside_atoms = false;
  }
  report.injective = report.injective && pieces_inside_atoms;
  report.surjective = pieces_inside_atoms;
  for (const auto& mask : atom_mask) {
    report.surjective = report.surjective && std::count(mask.begin(), mask.end(), true) == 1;
  }

  // Order check over every pair of invariant sets (unions of atoms).
  report.order_preserving = report.injective;
  if (atoms.size() <= 12) {
    const std::size_t sets = std::size_t{1} << atoms.size();
    std::vector<std::vector<bool>> image(sets, std::vector<bool>(pieces.size(), false));
    for (std::size_t u = 1; u < sets; ++u) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(u));
      image[u] = image[u & (u - 1)];
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        if (atom_mask[low][p]) image[u][p] = true;
      }
    }
    auto subset = [&](const std::vector<bool>& a, const std::vector<bool>& b) {
      for (std::size_t p = 0; p < a.size(); ++p)
        if (a[p] && !b[p]) return false;
      return true;
    };
    for (std::size_t u = 0; u < sets && report.order_preserving; ++u) {
      for (std::size_t v = 0; v < sets; ++v) {
        const bool sets_included = (u & ~v) == 0;
        if (sets_included != subset(image[u], image[v])) {
          report.order_preserving = false;
          break;
        }
      }
    }
  }
  return report;
}

SubspaceBasis fixed_vectors_of_word(const Truncation& trunc, const Word& word, Arithmetic mode) {
  const std::size_t n = trunc.size();
  const SparseMatrix w = word_operator(trunc, word);
  if (mode == Arithmetic::Exact) {
    IntMatrix m = w.dense() - IntMatrix::identity(n);
    std::vector<RationalVector> vecs;
    for (const auto& v : nullspace(std::move(m))) {
      vecs.push_back(to_rational(v));
    }
    return SubspaceBasis::from_vectors(vecs);
  }
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    a[r][r] = -1.0;
    for (const auto& [c, v] : w.row(r)) {
      a[r][c] += v.get_d();
    }
  }
  auto vecs = nullspace_gauss_jordan(std::move(a), n, [](double x) { return std::abs(x) <= kFloatTolerance; });
  return SubspaceBasis::from_vectors(vecs, kFloatTolerance);
}

WordOperatorStatus word_operator_status(const Truncation& trunc, const Word& word) {
  WordOperatorStatus status;
  status.truncated_zero = word_operator(trunc, word).nonzeros() == 0;
  for (const auto& x : trunc.window().states()) {
    if (replay_matches(trunc.system(), x, word)) {
      status.replay_witness = x;
      break;
    }
  }
  return status;
}

bool is_partial_isometry(const SparseMatrix& m) { return m * m.transpose() * m == m; }

}  // namespace cdyn
