#include "cdyn/morphisms.hpp"

#include <algorithm>
#include <set>

#include "cdyn/coding.hpp"
#include "cdyn/error.hpp"
#include "cdyn/orbits.hpp"

namespace cdyn {

Morphism::Morphism(DynamicalSystem source, DynamicalSystem target, Rule rule)
    : source_(std::make_shared<const DynamicalSystem>(std::move(source))),
      target_(std::make_shared<const DynamicalSystem>(std::move(target))),
      rule_(std::move(rule)) {
  if (source_->k() != target_->k()) {
    throw Error(ErrorCode::InvalidSpec, "morphism systems have different branch counts (" +
                                            std::to_string(source_->k()) + " and " +
                                            std::to_string(target_->k()) + ")");
  }
  if (const auto* chain = std::get_if<Chain>(&rule_)) {
    for (std::size_t i = 1; i < chain->steps.size(); ++i) {
      if (!(chain->steps[i - 1].target().spec() == chain->steps[i].source().spec())) {
        throw Error(ErrorCode::DomainMismatch, "chain steps do not connect");
      }
    }
  }
}

Morphism Morphism::table(DynamicalSystem source, DynamicalSystem target, std::map<Int, Int> map) {
  return Morphism(std::move(source), std::move(target), Table{std::move(map)});
}

Morphism Morphism::affine(DynamicalSystem source, DynamicalSystem target, Int u, Int v) {
  return Morphism(std::move(source), std::move(target), Affine{std::move(u), std::move(v)});
}

Morphism Morphism::identity(const DynamicalSystem& sys) {
  if (sys.is_finite()) {
    std::map<Int, Int> map;
    for (const auto& x : sys.states()) map.emplace(x, x);
    return table(sys, sys, std::move(map));
  }
  return affine(sys, sys, 1, 0);
}

bool Morphism::is_finite() const { return source_->is_finite() && target_->is_finite(); }

Int Morphism::operator()(const Int& x) const {
  if (const auto* t = std::get_if<Table>(&rule_)) {
    const auto it = t->map.find(x);
    if (it == t->map.end()) {
      throw Error(ErrorCode::OutOfDomain, "morphism is undefined at " + to_dec(x));
    }
    return it->second;
  }
  if (const auto* a = std::get_if<Affine>(&rule_)) {
    return Int(a->u * x + a->v);
  }
  Int y = x;
  for (const auto& step : std::get<Chain>(rule_).steps) {
    y = step(y);
  }
  return y;
}

namespace {

bool covers_all_states(const DynamicalSystem& sys, const Window& window) {
  if (!sys.is_finite()) return false;
  for (const auto& x : sys.states()) {
    if (!window.contains(x)) return false;
  }
  return true;
}

std::optional<HomomorphismViolation> check_state(const Morphism& phi, const Int& x) {
  const auto& f = phi.source();
  const auto& g = phi.target();
  if (!f.in_domain(x)) {
    throw Error(ErrorCode::PreconditionUnmet, "window state " + to_dec(x) + " is not a source state");
  }
  Int y;
  try {
    y = phi(x);
  } catch (const Error& e) {
    return HomomorphismViolation{x, 0, e.what()};
  }
  if (!g.in_domain(y)) {
    return HomomorphismViolation{x, 0, "phi(" + to_dec(x) + ") = " + to_dec(y) + " is not a target state"};
  }
  const Branch bx = f.branch_of(x);
  const Branch by = g.branch_of(y);
  if (bx != by) {
    return HomomorphismViolation{x, 2, "x lies in branch " + std::to_string(bx) + " but phi(x) = " + to_dec(y) +
                                           " lies in branch " + std::to_string(by)};
  }
  const Int lhs = phi(f.apply(x));
  const Int rhs = g.apply(y);
  if (lhs != rhs) {
    return HomomorphismViolation{x, 1, "phi(f(x)) = " + to_dec(lhs) + " but g(phi(x)) = " + to_dec(rhs)};
  }
  return std::nullopt;
}

}  // namespace

HomomorphismReport check_homomorphism(const Morphism& phi, const Window& window) {
  HomomorphismReport report;
  const std::size_t n = window.size();
  std::vector<std::optional<HomomorphismViolation>> found(n);
  const auto signed_n = static_cast<std::ptrdiff_t>(n);
  bool precondition_failed = false;
  std::string precondition_message;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < signed_n; ++i) {
    try {
      found[static_cast<std::size_t>(i)] = check_state(phi, window.at(static_cast<std::size_t>(i)));
    } catch (const Error& e) {
#pragma omp critical(cdyn_hom_error)
      {
        precondition_failed = true;
        precondition_message = e.what();
      }
    }
  }
  if (precondition_failed) {
    throw Error(ErrorCode::PreconditionUnmet, precondition_message);
  }
  report.checked = n;
  report.window_verified = !covers_all_states(phi.source(), window);
  for (auto& v : found) {
    if (v) {
      report.pass = false;
      report.violation = std::move(v);
      break;
    }
  }
  return report;
}

Morphism compose(const Morphism& psi, const Morphism& phi) {
  if (!(phi.target().spec() == psi.source().spec())) {
    throw Error(ErrorCode::DomainMismatch, "target of the inner morphism is not the source of the outer one");
  }
  const auto* inner = std::get_if<Morphism::Table>(&phi.rule());
  const auto* outer = std::get_if<Morphism::Table>(&psi.rule());
  if (inner && outer) {
    std::map<Int, Int> map;
    for (const auto& [x, y] : inner->map) {
      const auto it = outer->map.find(y);
      if (it != outer->map.end()) map.emplace(x, it->second);
    }
    return Morphism::table(phi.source(), psi.target(), std::move(map));
  }
  const auto* a = std::get_if<Morphism::Affine>(&phi.rule());
  const auto* b = std::get_if<Morphism::Affine>(&psi.rule());
  if (a && b) {
    return Morphism::affine(phi.source(), psi.target(), b->u * a->u, b->u * a->v + b->v);
  }
  Morphism::Chain chain;
  for (const Morphism* m : {&phi, &psi}) {
    if (const auto* c = std::get_if<Morphism::Chain>(&m->rule())) {
      chain.steps.insert(chain.steps.end(), c->steps.begin(), c->steps.end());
    } else {
      chain.steps.push_back(*m);
    }
  }
  return Morphism(phi.source(), psi.target(), std::move(chain));
}

bool agree_on(const Morphism& a, const Morphism& b, const Window& window) {
  for (const auto& x : window.states()) {
    if (a(x) != b(x)) return false;
  }
  return true;
}

IsomorphismReport is_isomorphism(const Morphism& phi, const Window& window, const std::optional<Window>& target_window) {
  IsomorphismReport report;
  std::map<Int, Int> inverse;
  report.injective = true;
  for (const auto& x : window.states()) {
    const Int y = phi(x);
    const auto [it, fresh] = inverse.emplace(y, x);
    if (!fresh && report.injective) {
      report.injective = false;
      report.collision = std::make_pair(std::min(it->second, x), std::max(it->second, x));
    }
  }

  report.exact = phi.is_finite() && covers_all_states(phi.source(), window) && !target_window;
  if (report.exact) {
    const auto& states = phi.target().states();
    report.surjective = inverse.size() == states.size() &&
                        std::all_of(states.begin(), states.end(), [&](const Int& y) { return inverse.count(y) != 0; });
  } else {
    Window tw;
    if (target_window) {
      tw = *target_window;
    } else if (!inverse.empty()) {
      tw = Window::range(inverse.begin()->first, inverse.rbegin()->first);
    }
    report.surjective = std::all_of(tw.states().begin(), tw.states().end(),
                                    [&](const Int& y) { return inverse.count(y) != 0; });
  }
  report.isomorphism = report.injective && report.surjective;
  if (report.isomorphism && report.exact) {
    Morphism inv = Morphism::table(phi.target(), phi.source(), std::move(inverse));
    report.inverse_homomorphism = check_homomorphism(inv, Window::all(phi.target())).pass;
    report.isomorphism = *report.inverse_homomorphism;
    report.inverse = std::move(inv);
  }
  return report;
}

std::optional<EventualWord> InducedSymbolic::operator()(const EventualWord& w) const {
  const auto it = table.find(w);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

InducedSymbolic induced_symbolic(const Morphism& phi, const std::vector<Int>& sample, std::size_t cap) {
  InducedSymbolic out;
  std::map<EventualWord, EventualWord> inverse;
  for (const auto& x : sample) {
    ++out.sampled;
    auto xh = coding_of(phi.source(), x, cap);
    auto yh = coding_of(phi.target(), phi(x), cap);
    if (!xh || !yh) {
      ++out.unresolved;
      continue;
    }
    out.preserves_codings = out.preserves_codings && *xh == *yh;
    const auto [it, fresh] = out.table.emplace(*xh, *yh);
    if (!fresh && it->second != *yh) {
      out.well_defined = false;
    }
    const auto [jt, fresh_image] = inverse.emplace(*yh, *xh);
    if (!fresh_image && jt->second != *xh) {
      out.injective = false;
    }
  }
  return out;
}

CodingTable coding_table(const DynamicalSystem& sys, std::size_t cap) {
  if (!sys.is_finite()) {
    throw Error(ErrorCode::PreconditionUnmet, "coding table needs a finite system");
  }
  std::map<Int, EventualWord> code;
  std::set<EventualWord> distinct;
  for (const auto& x : sys.states()) {
    auto c = coding_of(sys, x, cap);
    if (!c) {
      throw Error(ErrorCode::PreconditionUnmet, "orbit of " + to_dec(x) + " does not close within the cap");
    }
    distinct.insert(*c);
    code.emplace(x, std::move(*c));
  }
  std::vector<EventualWord> codings(distinct.begin(), distinct.end());
  auto index_of = [&](const EventualWord& w) {
    return Int(static_cast<unsigned long>(std::lower_bound(codings.begin(), codings.end(), w) - codings.begin() + 1));
  };
  std::vector<Int> states;
  std::vector<Branch> branch;
  std::vector<Int> image;
  for (const auto& w : codings) {
    states.push_back(index_of(w));
    branch.push_back(w.at(1));
    image.push_back(index_of(w.shifted()));
  }
  DynamicalSystem hat = make_system(SystemSpec::table(sys.k(), states, branch, image));
  std::map<Int, Int> map;
  for (const auto& [x, w] : code) map.emplace(x, index_of(w));
  Morphism coding_map = Morphism::table(sys, hat, std::move(map));
  return CodingTable{std::move(hat), std::move(codings), std::move(coding_map)};
}

CodingHomReport check_coding_homomorphism(const DynamicalSystem& sys, const Window& window, std::size_t cap) {
  CodingHomReport report;
  const ShiftSystem shift_system(sys.k());
  for (const auto& x : window.states()) {
    ++report.checked;
    const auto xh = coding_of(sys, x, cap);
    const auto fxh = coding_of(sys, sys.apply(x), cap);
    if (!xh || !fxh) {
      ++report.unresolved;
      continue;
    }
    if (shift_system.branch_of(*xh) != sys.branch_of(x) || shift_system.apply(*xh) != *fxh) {
      report.pass = false;
      report.witness = x;
      break;
    }
  }
  return report;
}

TucIsoReport verify_tuc_iso(const DynamicalSystem& sys, const Window& window, std::size_t cap) {
  const TucReport tuc = verify_tuc_window(sys, window, cap);
  if (!tuc.pass()) {
    throw Error(ErrorCode::PreconditionUnmet, "window fails the totally uniqueness scan at pair (" +
                                                  to_dec(tuc.undistinguished.front().first) + ", " +
                                                  to_dec(tuc.undistinguished.front().second) + ")");
  }
  TucIsoReport report;
  report.states = window.size();
  report.injective = true;
  const auto hom = check_coding_homomorphism(sys, window, cap);
  report.intertwines = hom.pass && hom.unresolved == 0;
  if (covers_all_states(sys, window)) {
    const CodingTable ct = coding_table(sys, cap);
    report.table_iso = is_isomorphism(ct.coding_map, window);
    report.exact = true;
  }
  return report;
}

namespace {

/// Index in `b` of phi(x) for each coordinate of `a`.
std::vector<std::size_t> transport(const Morphism& phi, const Truncation& a, const Truncation& b, bool bijective) {
  std::vector<std::size_t> perm(a.size());
  std::vector<bool> hit(b.size(), false);
  for (std::size_t c = 0; c < a.size(); ++c) {
    const auto j = b.window().index_of(phi(a.window().at(c)));
    if (!j) {
      throw Error(ErrorCode::WindowMismatch,
                  "phi(" + to_dec(a.window().at(c)) + ") is outside the target window");
    }
    if (hit[*j]) {
      throw Error(ErrorCode::WindowMismatch, "phi is not injective on the source window");
    }
    hit[*j] = true;
    perm[c] = *j;
  }
  if (bijective && a.size() != b.size()) {
    throw Error(ErrorCode::WindowMismatch, "target window is not the image of the source window");
  }
  return perm;
}

}  // namespace

ConjugationReport conjugate_unitary(const Morphism& phi, const Truncation& a, const Truncation& b) {
  ConjugationReport report;
  report.permutation = transport(phi, a, b, true);
  const auto& perm = report.permutation;
  for (Branch i = 1; i <= a.k() && report.pass; ++i) {
    // U M_i U^T sends e_{perm[c]} to e_{perm[image(c)]} when branch(c) = i.
    for (std::size_t c = 0; c < a.size(); ++c) {
      const std::size_t col = perm[c];
      if (!a.interior(c) || !b.interior(col)) continue;
      if (i == 1) ++report.compared_columns;
      const bool lhs_nonzero = a.branch(c) == i && a.image(c);
      const bool rhs_nonzero = b.branch(col) == i && b.image(col);
      const bool same = lhs_nonzero == rhs_nonzero && (!lhs_nonzero || perm[*a.image(c)] == *b.image(col));
      if (!same) {
        report.pass = false;
        report.mismatch_branch = i;
        report.mismatch_column = col;
        break;
      }
    }
  }
  return report;
}

IsometryReport induced_isometry(const Morphism& phi, const Truncation& a, const Truncation& b,
                                std::size_t node_budget) {
  const auto perm = transport(phi, a, b, false);

  // Orbit condition, one total orbit at a time.
  IsometryReport report;
  std::vector<bool> done(a.size(), false);
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (done[c]) continue;
    const Int& x = a.window().at(c);
    const auto src = total_orbit(a.system(), x, a.window(), node_budget);
    const auto dst = total_orbit(b.system(), phi(x), b.window(), node_budget);
    report.orbit_condition_exact = report.orbit_condition_exact && src.exact() && dst.exact();
    std::set<Int> mapped;
    for (const auto& y : src.members) {
      mapped.insert(phi(y));
      done[*a.window().index_of(y)] = true;
    }
    if (mapped != dst.members) {
      throw Error(ErrorCode::OrbitConditionFailed,
                  "phi(Orb(" + to_dec(x) + ")) has " + std::to_string(mapped.size()) + " states but Orb(" +
                      to_dec(phi(x)) + ") has " + std::to_string(dst.members.size()));
    }
  }

  // V^T V = I holds iff the columns e_{perm[c]} are distinct, which transport guarantees;
  // it is still formed explicitly.
  SparseMatrix v(b.size(), a.size());
  for (std::size_t c = 0; c < a.size(); ++c) v.set(perm[c], c, 1);
  const SparseMatrix vt = v.transpose();
  report.isometry = vt * v == SparseMatrix::identity(a.size());

  for (Branch i = 1; i <= a.k() && report.intertwines; ++i) {
    const SparseMatrix lhs = vt * b.matrix(i) * v;
    const SparseMatrix m = a.matrix(i);
    const SparseMatrix lt = lhs.transpose();
    const SparseMatrix mt = m.transpose();
    for (std::size_t c = 0; c < a.size(); ++c) {
      if (!a.interior(c)) continue;
      if (i == 1) ++report.compared_columns;
      if (lt.row(c) != mt.row(c)) {
        report.intertwines = false;
        report.mismatch_branch = i;
        report.mismatch_column = c;
        break;
      }
    }
  }
  return report;
}

}  // namespace cdyn
