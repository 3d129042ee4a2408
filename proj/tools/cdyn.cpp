// Command-line front end: one subcommand per module, JSON reports on stdout or --out.

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "acceptance_suite.hpp"
#include "cdyn/coding.hpp"
#include "cdyn/error.hpp"
#include "cdyn/morphisms.hpp"
#include "cdyn/operators.hpp"
#include "cdyn/orbits.hpp"
#include "cdyn/report.hpp"
#include "cdyn/spec_json.hpp"
#include "cdyn/symbolic.hpp"
#include "cdyn/words.hpp"

using namespace cdyn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string system = "collatz";
  std::string out;
  std::string format = "json";
  int threads = 0;
  bool timing = false;
  bool exact = false;
  bool floating = false;

  std::string window;
  std::string target_window;
  std::size_t cap = 0;
  std::size_t max_len = 24;
  std::size_t len = 16;
  std::size_t depth = 4;
  std::size_t budget = 100000;
  std::size_t horizon = 0;
  std::string x;
  std::string word;
  std::string set_file;
  std::string vector;
  std::string phi;
  std::string source;
  std::string target;
  std::string preset = "paper";
  int criterion = 0;
};

struct Outcome {
  Json parameters = Json::object();
  Json results = Json::object();
  std::vector<std::string> anomalies;
  bool pass = true;
  /// Set for commands that can emit CSV.
  std::function<std::string()> csv;
};

Json load_document(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::Parse, e.what());
    }
  }
  if (text == "collatz") {
    return Json{{"family", "collatz"}};
  }
  return read_json_file(text);
}

Json system_json(const std::string& text) { return system_spec_to_json(system_spec_from_json(load_document(text))); }

DynamicalSystem load_system(const std::string& text) { return make_system(system_spec_from_json(load_document(text))); }

Int required_int(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw UsageError(std::string(flag) + " is required");
  }
  return parse_int(value);
}

Window window_for(const DynamicalSystem& sys, const std::string& text) {
  if (!text.empty()) {
    return Window::parse_range(text);
  }
  if (sys.is_finite()) {
    return Window::all(sys);
  }
  throw UsageError("--window A..B is required for an infinite system");
}

Json window_json(const Window& w) {
  if (w.empty()) {
    return Json::array();
  }
  if (w.is_range()) {
    return to_dec(w.at(0)) + ".." + to_dec(w.at(w.size() - 1));
  }
  return to_dec(w.states());
}

Arithmetic arithmetic(const Options& o) {
  if (o.exact && o.floating) {
    throw UsageError("--exact and --float are mutually exclusive");
  }
  return o.floating ? Arithmetic::Float : Arithmetic::Exact;
}

Json ints(const std::vector<Int>& v) { return to_dec(v); }

Json ints(const std::set<Int>& s) { return to_dec(std::vector<Int>(s.begin(), s.end())); }

// ---------------------------------------------------------------- orbits

Outcome cmd_orbit(const Options& o) {
  const auto sys = load_system(o.system);
  const Int x = required_int(o.x, "--x");
  const std::size_t cap = o.cap ? o.cap : 10000;
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"x", to_dec(x)}, {"cap", cap}};
  const auto r = orbit_iterate(sys, x, cap);
  Json stop{{"kind", r.entered_cycle() ? "entered_cycle" : "hit_cap"}, {"steps", r.trajectory.size()}};
  if (r.entered_cycle()) {
    stop["cycle"] = ints(r.cycle);
    stop["entry_index"] = r.entry_index;
  } else {
    out.anomalies.push_back("no revisit within cap " + std::to_string(cap));
  }
  out.results = {{"start", to_dec(r.start)}, {"trajectory", ints(r.trajectory)}, {"stop", stop}};
  return out;
}

Outcome cmd_total_orbit(const Options& o) {
  const auto sys = load_system(o.system);
  const Int x = required_int(o.x, "--x");
  const Window w = window_for(sys, o.window);
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"x", to_dec(x)}, {"window", window_json(w)}, {"budget", o.budget}};
  const auto r = total_orbit(sys, x, w, o.budget);
  out.results = {{"members", ints(r.members)},
                 {"frontier", ints(r.frontier)},
                 {"exact", r.exact()},
                 {"budget_exhausted", r.budget_exhausted},
                 {"expanded", r.expanded}};
  if (!r.exact()) {
    out.anomalies.push_back(std::to_string(r.frontier.size()) + " frontier states; total orbit is window-truncated");
  }
  return out;
}

Outcome cmd_minimality(const Options& o) {
  const auto sys = load_system(o.system);
  const Window w = window_for(sys, o.window);
  const std::size_t budget = o.cap ? o.cap : 10000;
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"window", window_json(w)}, {"budget", budget}};
  const auto r = minimality_probe(sys, w, budget);
  Json classes = Json::array();
  for (const auto& c : r.classes) {
    classes.push_back({{"members", ints(c.members)}, {"frontier_resolved", c.frontier_resolved}});
  }
  out.results = {{"class_count", r.class_count()},
                 {"classes", classes},
                 {"budget_exhausted", r.budget_exhausted},
                 {"unresolved_escapes", r.unresolved_escapes}};
  if (r.budget_exhausted) {
    out.anomalies.push_back(std::to_string(r.unresolved_escapes) + " escapes did not re-enter within budget");
  }
  return out;
}

// ---------------------------------------------------------------- words

Outcome cmd_cycles(const Options& o) {
  const auto sys = load_system(o.system);
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"max_len", o.max_len}};
  const auto cycles = enumerate_cycles(sys, o.max_len);
  for (const auto& c : cycles) {
    if (orbit_iterate(sys, c.cycle.front(), c.cycle.size() + 1).cycle != c.cycle) {
      out.pass = false;
      out.anomalies.push_back("cycle through " + to_dec(c.cycle.front()) + " failed orbit replay");
    }
  }
  out.results = {{"count", cycles.size()}, {"cycles", cycles_to_json(cycles)}};
  out.csv = [cycles] { return cycles_csv(cycles); };
  return out;
}

Outcome cmd_check_uniqueness(const Options& o) {
  const auto sys = load_system(o.system);
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"max_len", o.max_len}};
  const auto r = check_uniqueness(sys, o.max_len);
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"word", word_to_json(v.word)}, {"fixed_points", ints(v.fixed_points)}, {"identity", v.identity}});
  }
  out.results = {{"pass", r.pass},
                 {"words_checked", r.words_checked},
                 {"words_with_fixed_point", r.words_with_fixed_point},
                 {"violations", violations}};
  out.pass = r.pass;
  return out;
}

Outcome cmd_check_separating(const Options& o) {
  const auto sys = load_system(o.system);
  const Int x = required_int(o.x, "--x");
  const std::size_t cap = o.cap ? o.cap : 10000;
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"x", to_dec(x)}, {"cap", cap}};
  const auto r = check_separating(sys, x, cap);
  out.results = {{"periodic", r.periodic}, {"holds", r.holds()}};
  if (r.periodic) {
    out.results["period"] = r.period;
    out.results["word"] = word_to_json(r.word);
    out.results["aperiodic"] = r.aperiodic;
    out.pass = r.aperiodic;
  } else {
    out.anomalies.push_back(to_dec(x) + " did not return to itself within cap " + std::to_string(cap));
  }
  return out;
}

Outcome cmd_check_bounded(const Options& o) {
  const auto sys = load_system(o.system);
  const Window w = window_for(sys, o.window);
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"window", window_json(w)}};
  const auto r = verify_bounded_condition(sys, w);
  out.results = {{"pass", r.pass}, {"checked", r.checked}};
  if (r.collision) {
    out.results["collision"] = {to_dec(r.collision->first), to_dec(r.collision->second)};
    out.results["collision_branch"] = *r.collision_branch;
  }
  if (r.bad_branch) {
    out.results["bad_branch"] = to_dec(*r.bad_branch);
  }
  out.pass = r.pass;
  return out;
}

// ---------------------------------------------------------------- coding

Outcome cmd_check_alphabeta(const Options& o) {
  const auto sys = load_system(o.system);
  const Window w = window_for(sys, o.window);
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"window", window_json(w)}, {"horizon", o.horizon}};
  const auto r = check_alphabeta_hypotheses(sys, w, o.horizon);
  out.results = {{"coprime", r.coprime},
                 {"non_coprime_branches", r.non_coprime_branches},
                 {"multiple_of_k", r.multiple_of_k},
                 {"checked", r.checked},
                 {"horizon", r.horizon},
                 {"multiple_failures", ints(r.multiple_failures)},
                 {"multiple_failure_count", r.multiple_failure_count}};
  out.pass = r.pass();
  return out;
}

Outcome cmd_code(const Options& o) {
  const auto sys = load_system(o.system);
  const Int x = required_int(o.x, "--x");
  const std::size_t cap = o.cap ? o.cap : 10000;
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"x", to_dec(x)}, {"len", o.len}, {"cap", cap}};
  out.results = {{"prefix", coding_prefix(sys, x, o.len).symbols}};
  if (const auto full = coding_of(sys, x, cap)) {
    out.results["coding"] = {{"preperiod", full->preperiod()}, {"period", full->period()}};
  } else {
    out.results["coding"] = nullptr;
    out.anomalies.push_back("orbit did not close up within cap " + std::to_string(cap));
  }
  return out;
}

Outcome cmd_tuc_scan(const Options& o) {
  const auto sys = load_system(o.system);
  const Window w = window_for(sys, o.window);
  const std::size_t cap = o.cap ? o.cap : 1024;
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"window", window_json(w)}, {"cap", cap}};
  const auto r = verify_tuc_window(sys, w, cap);
  Json undistinguished = Json::array();
  for (const auto& [a, b] : r.undistinguished) undistinguished.push_back({to_dec(a), to_dec(b)});
  out.results = {{"states", r.states},
                 {"pairs_checked", r.pairs_checked},
                 {"max_length", r.max_length},
                 {"undistinguished", undistinguished}};
  if (r.max_pair) {
    out.results["max_pair"] = {to_dec(r.max_pair->first), to_dec(r.max_pair->second)};
  }
  out.pass = r.pass();
  return out;
}

Json tower_json(const ResidueTower& t) { return {{"k", to_dec(t.k)}, {"digits", ints(t.digits)}}; }

Outcome cmd_tower(const Options& o) {
  const auto sys = load_system(o.system);
  const Int x = required_int(o.x, "--x");
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"x", to_dec(x)}, {"depth", o.depth}};
  const auto t = tower_from_state(x, sys.k(), o.depth);
  out.results = {{"tower", tower_json(t)}};
  try {
    const auto image = tower_apply(sys, t);
    const auto direct = tower_from_state(sys.apply(x), sys.k(), image.depth());
    out.results["image"] = tower_json(image);
    out.results["commutes"] = image == direct;
    out.pass = image == direct;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DepthExhausted) throw;
    out.results["image"] = nullptr;
    out.anomalies.push_back(e.what());
  }
  return out;
}

// ---------------------------------------------------------------- operators

Outcome cmd_ops_build(const Options& o) {
  const auto sys = load_system(o.system);
  const Window w = window_for(sys, o.window);
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"window", window_json(w)}};
  const Truncation t(sys, w);
  Json branches = Json::array();
  for (Branch i = 1; i <= t.k(); ++i) {
    const auto m = t.matrix(i);
    branches.push_back({{"branch", i},
                        {"nonzeros", m.nonzeros()},
                        {"escapes", ints(t.escapes(i))},
                        {"partial_isometry", is_partial_isometry(m)}});
  }
  std::size_t interior = 0;
  for (std::size_t c = 0; c < t.size(); ++c) interior += t.interior(c) ? 1 : 0;
  out.results = {{"size", t.size()},
                 {"closed", t.closed()},
                 {"escape_free", t.escape_free()},
                 {"interior", interior},
                 {"branches", branches}};
  for (const auto& b : branches) {
    if (!b["partial_isometry"].get<bool>()) out.pass = false;
  }
  return out;
}

std::vector<Int> read_states(const Options& o) {
  if (o.set_file.empty()) {
    throw UsageError("--set-file is required");
  }
  return states_from_json(load_document(o.set_file));
}

Outcome cmd_ops_reduce_check(const Options& o) {
  const auto sys = load_system(o.system);
  const Window w = window_for(sys, o.window);
  const auto states = read_states(o);
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"window", window_json(w)}, {"set", ints(states)}};
  const Truncation t(sys, w);
  const auto basis = subspace_from_invariant_set(t, states);
  const bool interior_only = !t.closed();
  const auto r = is_reducing(t, basis, interior_only);
  const auto closure = invariant_closure(sys, states, w, o.budget);
  const bool invariant = closure.members == std::set<Int>(states.begin(), states.end());
  out.results = {{"reducing", r.pass}, {"interior_only", interior_only}, {"invariant", invariant}};
  if (r.witness) {
    out.results["witness"] = {{"branch", r.witness->branch},
                              {"state", to_dec(states[r.witness->vector])},
                              {"adjoint", r.witness->adjoint}};
  }
  if (interior_only) {
    out.anomalies.push_back("window is not closed; only interior coordinates were compared");
  }
  // An invariant set must give a reducing subspace.
  out.pass = !invariant || r.pass;
  return out;
}

Json commutant_json(const CommutantReport& c) {
  Json minimal = Json::array();
  for (const auto& m : c.minimal) minimal.push_back(basis_to_json(m));
  Json j{{"dimension", c.dimension}, {"commutative", c.commutative}, {"split", c.split}, {"minimal", minimal}};
  j["lattice_size"] = c.lattice_size ? Json(*c.lattice_size) : Json(nullptr);
  return j;
}

Outcome cmd_ops_commutant(const Options& o) {
  const auto sys = load_system(o.system);
  const Window w = window_for(sys, o.window);
  Outcome out;
  out.parameters = {{"system", system_json(o.system)}, {"window", window_json(w)}};
  const Truncation t(sys, w);
  const auto corr = invariant_reducing_correspondence(t);
  const bool tuc = verify_tuc_window(sys, w, w.size() * w.size() + 1).pass();
  out.results = {{"commutant", commutant_json(corr.commutant)},
                 {"invariant_atoms", corr.invariant_atoms},
                 {"invariant_sets", corr.invariant_sets},
                 {"atoms_reducing", corr.atoms_reducing},
                 {"injective", corr.injective},
                 {"surjective", corr.surjective},
                 {"order_preserving", corr.order_preserving},
                 {"bijection", corr.bijection()},
                 {"tuc", tuc}};
  out.results["reducing_subspaces"] = corr.reducing_subspaces ? Json(*corr.reducing_subspaces) : Json(nullptr);
  out.pass = corr.injective && (!tuc || corr.bijection());
  if (!tuc && !corr.surjective) {
    out.anomalies.push_back("totally uniqueness fails on the window; surjectivity is not expected");
  }
  return out;
}

Outcome cmd_ops_fixed_vectors(const Options& o) {
  const auto sys = load_system(o.system);
  const Window w = window_for(sys, o.window);
  if (o.word.empty()) {
    throw UsageError("--word is required");
  }
  const Word word = parse_word(o.word);
  validate_word(word, sys.k());
  const Arithmetic mode = arithmetic(o);
  Outcome out;
  out.parameters = {{"system", system_json(o.system)},
                    {"window", window_json(w)},
                    {"word", word_to_json(word)},
                    {"arithmetic", mode == Arithmetic::Exact ? "exact" : "float"}};
  const Truncation t(sys, w);
  const auto basis = fixed_vectors_of_word(t, word, mode);
  const auto status = word_operator_status(t, word);
  out.results = {{"dimension", basis.dim()}, {"basis", basis_to_json(basis)}, {"truncated_zero", status.truncated_zero}};
  if (mode == Arithmetic::Float) {
    out.results["tolerance"] = basis.tolerance;
  }
  if (status.window_caused()) {
    out.anomalies.push_back("M_I vanishes on the window although " + to_dec(*status.replay_witness) +
                            " follows the word; enlarge the window");
  }
  return out;
}

Outcome cmd_ops_pm_limit(const Options& o) {
  const auto sys = load_system(o.system);
  const Window w = window_for(sys, o.window);
  const Int x = required_int(o.x, "--x");
  if (o.vector.empty()) {
    throw UsageError("--vector is required");
  }
  const std::size_t cap = o.cap ? o.cap : 64;
  std::vector<Int> support;
  for (const auto& s : CLI::detail::split(o.vector, ',')) support.push_back(parse_int(s));
  RationalVector a(w.size());
  for (const auto& s : support) {
    const auto idx = w.index_of(s);
    if (!idx) {
      throw Error(ErrorCode::OutOfDomain, to_dec(s) + " is not in the window");
    }
    a[*idx] += 1;
  }
  Outcome out;
  out.parameters = {
      {"system", system_json(o.system)}, {"window", window_json(w)}, {"x", to_dec(x)}, {"vector", ints(support)}, {"cap", cap}};
  const auto r = verify_pm_limit(Truncation(sys, w), a, x, cap);
  out.results = {{"stabilized", r.stabilized}, {"index", r.index}, {"cap", r.cap}};
  Json limit = Json::object();
  for (std::size_t c = 0; c < r.limit.size(); ++c) {
    if (r.limit[c] != 0) limit[to_dec(w.at(c))] = to_dec(r.limit[c]);
  }
  out.results["limit"] = limit;
  out.pass = r.stabilized;
  return out;
}

// ---------------------------------------------------------------- morphisms

struct MorphismInputs {
  DynamicalSystem source;
  DynamicalSystem target;
  Morphism phi;
  Json parameters;
};

MorphismInputs load_morphism(const Options& o) {
  if (o.phi.empty()) {
    throw UsageError("--phi is required");
  }
  const std::string src = o.source.empty() ? o.system : o.source;
  const std::string tgt = o.target.empty() ? src : o.target;
  auto source = load_system(src);
  auto target = load_system(tgt);
  auto phi = morphism_from_json(load_document(o.phi), source, target);
  Json params{{"source", system_json(src)}, {"target", system_json(tgt)}, {"phi", morphism_to_json(phi)}};
  return {std::move(source), std::move(target), std::move(phi), std::move(params)};
}

Outcome cmd_morphism_check(const Options& o) {
  const auto in = load_morphism(o);
  const Window w = window_for(in.source, o.window);
  Outcome out;
  out.parameters = in.parameters;
  out.parameters["window"] = window_json(w);
  const auto r = check_homomorphism(in.phi, w);
  out.results = {{"pass", r.pass}, {"checked", r.checked}, {"window_verified", r.window_verified}};
  if (r.violation) {
    out.results["violation"] = {
        {"x", to_dec(r.violation->x)}, {"condition", r.violation->condition}, {"detail", r.violation->detail}};
  }
  out.pass = r.pass;
  return out;
}

Outcome cmd_morphism_iso(const Options& o) {
  const auto in = load_morphism(o);
  const Window w = window_for(in.source, o.window);
  std::optional<Window> tw;
  if (!o.target_window.empty()) tw = Window::parse_range(o.target_window);
  Outcome out;
  out.parameters = in.parameters;
  out.parameters["window"] = window_json(w);
  if (tw) out.parameters["target_window"] = window_json(*tw);
  const auto hom = check_homomorphism(in.phi, w);
  const auto r = is_isomorphism(in.phi, w, tw);
  out.results = {{"homomorphism", hom.pass},
                 {"isomorphism", r.isomorphism},
                 {"injective", r.injective},
                 {"surjective", r.surjective},
                 {"exact", r.exact}};
  if (r.inverse_homomorphism) out.results["inverse_homomorphism"] = *r.inverse_homomorphism;
  if (r.inverse) out.results["inverse"] = morphism_to_json(*r.inverse);
  if (r.collision) out.results["collision"] = {to_dec(r.collision->first), to_dec(r.collision->second)};
  if (!r.exact) out.anomalies.push_back("verdict covers the window only");
  out.pass = hom.pass && r.isomorphism;
  return out;
}

Outcome cmd_morphism_conjugate(const Options& o) {
  const auto in = load_morphism(o);
  const Window wa = window_for(in.source, o.window);
  const Window wb = window_for(in.target, o.target_window);
  Outcome out;
  out.parameters = in.parameters;
  out.parameters["window"] = window_json(wa);
  out.parameters["target_window"] = window_json(wb);
  const auto r = conjugate_unitary(in.phi, Truncation(in.source, wa), Truncation(in.target, wb));
  out.results = {{"pass", r.pass}, {"compared_columns", r.compared_columns}};
  if (r.mismatch_branch) {
    out.results["mismatch"] = {{"branch", *r.mismatch_branch}, {"state", to_dec(wa.at(*r.mismatch_column))}};
  }
  out.pass = r.pass;
  return out;
}

Outcome cmd_morphism_isometry(const Options& o) {
  const auto in = load_morphism(o);
  const Window wa = window_for(in.source, o.window);
  const Window wb = window_for(in.target, o.target_window);
  Outcome out;
  out.parameters = in.parameters;
  out.parameters["window"] = window_json(wa);
  out.parameters["target_window"] = window_json(wb);
  const auto r = induced_isometry(in.phi, Truncation(in.source, wa), Truncation(in.target, wb), o.budget);
  out.results = {{"isometry", r.isometry},
                 {"intertwines", r.intertwines},
                 {"orbit_condition_exact", r.orbit_condition_exact},
                 {"compared_columns", r.compared_columns}};
  if (r.mismatch_branch) {
    out.results["mismatch"] = {{"branch", *r.mismatch_branch}, {"state", to_dec(wa.at(*r.mismatch_column))}};
  }
  if (!r.orbit_condition_exact) out.anomalies.push_back("orbit condition verified on the windows only");
  out.pass = r.pass();
  return out;
}

// ---------------------------------------------------------------- verify-all

Outcome cmd_verify_all(const Options& o) {
  if (o.preset != "paper") {
    throw UsageError("unknown preset '" + o.preset + "'");
  }
  Outcome out;
  out.parameters = {{"preset", o.preset}};
  std::vector<verify::Criterion> criteria;
  if (o.criterion) {
    if (o.criterion < 1 || o.criterion > verify::kCriterionCount) {
      throw UsageError("--criterion must be in 1.." + std::to_string(verify::kCriterionCount));
    }
    out.parameters["criterion"] = o.criterion;
    criteria.push_back(verify::run_criterion(o.criterion));
  } else {
    criteria = verify::run_all();
  }
  Json list = Json::array();
  for (const auto& c : criteria) {
    std::cerr << verify::format_line(c) << '\n';
    Json entry{{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}};
    if (o.timing) entry["seconds"] = c.seconds;
    list.push_back(entry);
    out.pass = out.pass && c.pass;
  }
  out.results = {{"criteria", list}, {"pass", out.pass}};
  return out;
}

// ---------------------------------------------------------------- driver

int emit(const std::string& command, const Options& o, Outcome outcome, double seconds) {
  std::string text;
  if (o.format == "csv") {
    if (!outcome.csv) {
      throw UsageError("--format csv is only available for cycles");
    }
    text = outcome.csv();
  } else {
    if (o.timing) outcome.results["elapsed_seconds"] = seconds;
    text = render(make_report(command, outcome.parameters, outcome.results, outcome.anomalies));
  }
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text(o.out, text);
  }
  return outcome.pass ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Collatz systems, codings and operator truncations"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--system", o.system, "System JSON file, inline JSON, or 'collatz'");
  app.add_option("--out", o.out, "Write the report to a file instead of stdout");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", o.threads, "OpenMP thread count")->check(CLI::PositiveNumber);
  app.add_flag("--timing", o.timing, "Include wall-clock timings in the report");

  std::string command;
  std::function<Outcome(const Options&)> handler;
  auto bind = [&](CLI::App* sub, std::string name, Outcome (*fn)(const Options&)) {
    sub->callback([&, name, fn] {
      command = name;
      handler = fn;
    });
    return sub;
  };
  auto x_opt = [&](CLI::App* s) { s->add_option("--x", o.x, "Start state (decimal)"); };
  auto window_opt = [&](CLI::App* s) { s->add_option("--window", o.window, "Window A..B"); };
  auto cap_opt = [&](CLI::App* s) { s->add_option("--cap", o.cap, "Iteration or prefix cap"); };

  auto* orbit = bind(app.add_subcommand("orbit", "Forward orbit until the first revisit"), "orbit", cmd_orbit);
  x_opt(orbit);
  cap_opt(orbit);

  auto* total = bind(app.add_subcommand("total-orbit", "Window-restricted total orbit"), "total-orbit", cmd_total_orbit);
  x_opt(total);
  window_opt(total);
  total->add_option("--budget", o.budget, "Node budget");

  auto* minimal = bind(app.add_subcommand("minimality", "Orbit-equivalence classes on a window"), "minimality",
                       cmd_minimality);
  window_opt(minimal);
  cap_opt(minimal);

  auto* cycles = bind(app.add_subcommand("cycles", "Exact cycle enumeration by word composition"), "cycles", cmd_cycles);
  cycles->add_option("--max-len", o.max_len, "Longest word length");

  auto* check = app.add_subcommand("check", "Condition checkers");
  check->require_subcommand(1);
  auto* uniq = bind(check->add_subcommand("uniqueness"), "check uniqueness", cmd_check_uniqueness);
  uniq->add_option("--max-len", o.max_len, "Longest word length");
  auto* sep = bind(check->add_subcommand("separating"), "check separating", cmd_check_separating);
  x_opt(sep);
  cap_opt(sep);
  auto* bounded = bind(check->add_subcommand("bounded"), "check bounded", cmd_check_bounded);
  window_opt(bounded);
  auto* ab = bind(check->add_subcommand("alphabeta"), "check alphabeta", cmd_check_alphabeta);
  window_opt(ab);
  ab->add_option("--horizon", o.horizon, "Steps allowed to meet a multiple of k (0 means k)");

  auto* code = bind(app.add_subcommand("code", "Coding prefix and eventual coding"), "code", cmd_code);
  x_opt(code);
  cap_opt(code);
  code->add_option("--len", o.len, "Prefix length");

  auto* tuc = bind(app.add_subcommand("tuc-scan", "Distinguishing prefixes for all window pairs"), "tuc-scan",
                   cmd_tuc_scan);
  window_opt(tuc);
  cap_opt(tuc);

  auto* tower = bind(app.add_subcommand("tower", "k-adic residue tower and its image"), "tower", cmd_tower);
  x_opt(tower);
  tower->add_option("--depth", o.depth, "Tower depth");

  auto* ops = app.add_subcommand("operators", "Finite truncations of the operators");
  ops->require_subcommand(1);
  auto* build = bind(ops->add_subcommand("build"), "operators build", cmd_ops_build);
  window_opt(build);
  auto* reduce = bind(ops->add_subcommand("reduce-check"), "operators reduce-check", cmd_ops_reduce_check);
  window_opt(reduce);
  reduce->add_option("--set-file", o.set_file, "JSON state set");
  reduce->add_option("--budget", o.budget, "Node budget for the invariance closure");
  auto* comm = bind(ops->add_subcommand("commutant"), "operators commutant", cmd_ops_commutant);
  window_opt(comm);
  comm->add_option("--table", o.system, "Finite system JSON (same as --system)");
  auto* fixed = bind(ops->add_subcommand("fixed-vectors"), "operators fixed-vectors", cmd_ops_fixed_vectors);
  window_opt(fixed);
  fixed->add_option("--word", o.word, "Branch word, e.g. 1,2,2");
  fixed->add_flag("--exact", o.exact, "Exact rational arithmetic (default)");
  fixed->add_flag("--float", o.floating, "Double precision with tolerance 1e-9");
  auto* pm = bind(ops->add_subcommand("pm-limit"), "operators pm-limit", cmd_ops_pm_limit);
  window_opt(pm);
  x_opt(pm);
  cap_opt(pm);
  pm->add_option("--vector", o.vector, "Support of a as comma-separated states, each with weight 1");

  auto* morph = app.add_subcommand("morphism", "Morphism checks");
  morph->require_subcommand(1);
  auto morph_opts = [&](CLI::App* s) {
    s->add_option("--phi", o.phi, "Morphism JSON");
    s->add_option("--source", o.source, "Source system (default --system)");
    s->add_option("--target", o.target, "Target system (default source)");
    s->add_option("--window", o.window, "Source window A..B");
    s->add_option("--target-window", o.target_window, "Target window A..B");
  };
  morph_opts(bind(morph->add_subcommand("check"), "morphism check", cmd_morphism_check));
  morph_opts(bind(morph->add_subcommand("iso"), "morphism iso", cmd_morphism_iso));
  morph_opts(bind(morph->add_subcommand("conjugate"), "morphism conjugate", cmd_morphism_conjugate));
  auto* isom = bind(morph->add_subcommand("isometry"), "morphism isometry", cmd_morphism_isometry);
  morph_opts(isom);
  isom->add_option("--budget", o.budget, "Node budget for the orbit condition");

  auto* verify_all = bind(app.add_subcommand("verify-all", "Run the acceptance suite"), "verify-all", cmd_verify_all);
  verify_all->add_option("--preset", o.preset, "Suite preset")->check(CLI::IsMember({"paper"}));
  verify_all->add_option("--criterion", o.criterion, "Run a single criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (!handler) {
    std::cerr << "error: a subcommand is required\n";
    return kExitUsage;
  }
  if (o.threads > 0) {
    omp_set_num_threads(o.threads);
  }
  try {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome = handler(o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return emit(command, o, std::move(outcome), secs);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::OrbitConditionFailed ? kExitFailed : kExitUsage;
  }
}
