#include "cdyn/words.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <omp.h>

#include "cdyn/error.hpp"
#include "cdyn/orbits.hpp"

namespace cdyn {

Word Word::repeat(std::size_t m) const {
  Word out;
  out.symbols.reserve(symbols.size() * m);
  for (std::size_t r = 0; r < m; ++r) {
    out.symbols.insert(out.symbols.end(), symbols.begin(), symbols.end());
  }
  return out;
}

Word Word::rotated(std::size_t by) const {
  Word out = *this;
  if (!out.empty()) {
    std::rotate(out.symbols.begin(), out.symbols.begin() + static_cast<std::ptrdiff_t>(by % size()),
                out.symbols.end());
  }
  return out;
}

std::string Word::str() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out << (i ? "," : "") << symbols[i];
  }
  out << ')';
  return out.str();
}

Word parse_word(const std::string& text) {
  Word w;
  std::string cleaned;
  for (char c : text) {
    if (c != '(' && c != ')' && c != '[' && c != ']' && c != ' ') {
      cleaned.push_back(c);
    }
  }
  std::istringstream in(cleaned);
  std::string item;
  while (std::getline(in, item, ',')) {
    const Int v = parse_int(item);
    if (!v.fits_sint_p()) {
      throw Error(ErrorCode::Parse, "branch index too large: " + item);
    }
    w.symbols.push_back(static_cast<Branch>(v.get_si()));
  }
  return w;
}

void validate_word(const Word& word, int k) {
  if (word.empty()) {
    throw Error(ErrorCode::InvalidSpec, "word must be nonempty");
  }
  for (const Branch s : word.symbols) {
    if (s < 1 || s > k) {
      throw Error(ErrorCode::InvalidSpec, "word symbol " + std::to_string(s) + " outside 1.." + std::to_string(k));
    }
  }
}

bool is_aperiodic(const Word& word) { return is_aperiodic_sequence(word.symbols); }

bool is_lyndon(const Word& word) {
  const std::size_t m = word.size();
  for (std::size_t j = 1; j < m; ++j) {
    // Compare rotation by j against the word.
    for (std::size_t t = 0; t < m; ++t) {
      const Branch r = word.symbols[(j + t) % m];
      if (r < word.symbols[t]) {
        return false;
      }
      if (r > word.symbols[t]) {
        break;
      }
      if (t + 1 == m) {
        return false;  // rotation equal to the word: periodic
      }
    }
  }
  return m > 0;
}

AffineMap AffineMap::then(const AffineMap& next) const { return {next.a * a, next.a * b + next.b}; }

AffineMap compose_affine(const DynamicalSystem& sys, const Word& word) {
  if (!sys.is_affine()) {
    throw Error(ErrorCode::NotAffineFamily, "compose_affine needs an affine family");
  }
  validate_word(word, sys.k());
  AffineMap acc;
  for (const Branch s : word.symbols) {
    const BranchMap m = sys.branch_map(s);
    acc = acc.then(AffineMap{m.a, m.b});
  }
  return acc;
}

bool replay_matches(const DynamicalSystem& sys, const Int& x, const Word& word) {
  Int cur = x;
  for (const Branch s : word.symbols) {
    if (!sys.in_domain(cur) || sys.branch_of(cur) != s) {
      return false;
    }
    cur = sys.apply(cur);
  }
  return true;
}

std::optional<Int> fixed_point_of_word(const DynamicalSystem& sys, const Word& word) {
  const AffineMap f = compose_affine(sys, word);
  if (f.a == 1) {
    if (f.b == 0) {
      throw Error(ErrorCode::IdentityComposition, "f_I is the identity for I=" + word.str());
    }
    return std::nullopt;
  }
  const Rational x = f.b / (1 - f.a);
  if (x.get_den() != 1 || x.get_num() < 1) {
    return std::nullopt;
  }
  Int n = x.get_num();
  if (!replay_matches(sys, n, word)) {
    return std::nullopt;
  }
  return n;
}

std::vector<Int> fixed_points_exhaustive(const DynamicalSystem& sys, const Word& word) {
  validate_word(word, sys.k());
  std::vector<Int> out;
  for (const auto& x : sys.states()) {
    if (!replay_matches(sys, x, word)) {
      continue;
    }
    Int cur = x;
    for (std::size_t j = 0; j < word.size(); ++j) {
      cur = sys.apply(cur);
    }
    if (cur == x) {
      out.push_back(x);
    }
  }
  return out;
}

Word cycle_word(const DynamicalSystem& sys, const std::vector<Int>& cycle) {
  Word w;
  w.symbols.reserve(cycle.size());
  for (const auto& x : cycle) {
    w.symbols.push_back(sys.branch_of(x));
  }
  return w;
}

namespace {

/// f_I(x) = (A x + B) / k^t with integers A, B.
struct IntAffine {
  Int a{1};
  Int b{0};
  Int kt{1};

  void step(const DynamicalSystem& sys, Branch s) {
    if (s == sys.k()) {
      kt *= sys.k();
      return;
    }
    const auto i = static_cast<std::size_t>(s - 1);
    b = sys.alpha()[i] * b + sys.beta()[i] * kt;
    a *= sys.alpha()[i];
  }

  /// Natural solution of A x + B = k^t x, if any.
  std::optional<Int> natural_fixed_point() const {
    const Int den = kt - a;
    if (den <= 0 || b <= 0 || !mpz_divisible_p(b.get_mpz_t(), den.get_mpz_t())) {
      return std::nullopt;
    }
    Int x;
    mpz_divexact(x.get_mpz_t(), b.get_mpz_t(), den.get_mpz_t());
    return x;
  }
};

/// Turns a validated fixed point of some word into the canonical cycle entry.
CycleEntry cycle_entry_from(const DynamicalSystem& sys, const Int& x, std::size_t word_len) {
  std::vector<Int> states{x};
  Int cur = sys.apply(x);
  for (std::size_t j = 1; j < word_len && cur != x; ++j) {
    states.push_back(cur);
    cur = sys.apply(cur);
  }
  CycleEntry e;
  e.cycle = canonical_cycle(std::move(states));
  e.word = cycle_word(sys, e.cycle);
  return e;
}

struct CycleCollector {
  const DynamicalSystem& sys;
  bool necklaces_only;
  std::vector<CycleEntry> found;

  void consider(const Word& w, const IntAffine& st) {
    const auto x = st.natural_fixed_point();
    if (!x) {
      return;
    }
    if (necklaces_only && !is_lyndon(w)) {
      return;
    }
    if (!replay_matches(sys, *x, w)) {
      return;
    }
    found.push_back(cycle_entry_from(sys, *x, w.size()));
  }

  void dfs(Word& w, const IntAffine& st, std::size_t max_len) {
    for (Branch s = 1; s <= sys.k(); ++s) {
      IntAffine next = st;
      next.step(sys, s);
      w.symbols.push_back(s);
      consider(w, next);
      if (w.size() < max_len) {
        dfs(w, next, max_len);
      }
      w.symbols.pop_back();
    }
  }
};

bool cycle_order(const CycleEntry& a, const CycleEntry& b) {
  if (a.cycle.front() != b.cycle.front()) {
    return a.cycle.front() < b.cycle.front();
  }
  if (a.cycle.size() != b.cycle.size()) {
    return a.cycle.size() < b.cycle.size();
  }
  return a.cycle < b.cycle;
}

std::vector<CycleEntry> dedupe_cycles(std::vector<CycleEntry> all) {
  std::sort(all.begin(), all.end(), cycle_order);
  all.erase(std::unique(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.cycle == b.cycle; }),
            all.end());
  return all;
}

Word word_from_index(std::size_t index, std::size_t len, int k) {
  Word w;
  w.symbols.assign(len, 1);
  for (std::size_t j = len; j-- > 0;) {
    w.symbols[j] = static_cast<Branch>(index % static_cast<std::size_t>(k)) + 1;
    index /= static_cast<std::size_t>(k);
  }
  return w;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) {
    r *= base;
  }
  return r;
}

}  // namespace

std::vector<CycleEntry> enumerate_cycles(const DynamicalSystem& sys, std::size_t max_len, bool necklaces_only) {
  if (!sys.is_affine()) {
    throw Error(ErrorCode::NotAffineFamily, "cycle enumeration needs an affine family");
  }
  if (max_len < 1) {
    throw Error(ErrorCode::PreconditionUnmet, "max_len must be >= 1");
  }
  const auto k = static_cast<std::size_t>(sys.k());
  std::size_t split = 1;
  while (split < max_len && ipow(k, split) < 256) {
    ++split;
  }

  // Words shorter than the split depth are handled serially.
  CycleCollector head{sys, necklaces_only, {}};
  if (split > 1) {
    Word w;
    head.dfs(w, IntAffine{}, split - 1);
  }

  const std::size_t tasks = ipow(k, split);
  std::vector<std::vector<CycleEntry>> per_task(tasks);
  const auto signed_tasks = static_cast<std::ptrdiff_t>(tasks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < signed_tasks; ++t) {
    CycleCollector local{sys, necklaces_only, {}};
    Word w = word_from_index(static_cast<std::size_t>(t), split, sys.k());
    IntAffine st;
    for (const Branch s : w.symbols) {
      st.step(sys, s);
    }
    local.consider(w, st);
    if (split < max_len) {
      local.dfs(w, st, max_len);
    }
    per_task[static_cast<std::size_t>(t)] = std::move(local.found);
  }

  std::vector<CycleEntry> all = std::move(head.found);
  for (auto& v : per_task) {
    all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  return dedupe_cycles(std::move(all));
}

SeparatingReport check_separating(const DynamicalSystem& sys, const Int& x, std::size_t cap) {
  SeparatingReport r;
  r.x = x;
  Int cur = x;
  Word w;
  for (std::size_t m = 1; m <= cap; ++m) {
    w.symbols.push_back(sys.branch_of(cur));
    cur = sys.apply(cur);
    if (cur == x) {
      r.periodic = true;
      r.period = m;
      r.word = w;
      r.aperiodic = is_aperiodic(w);
      return r;
    }
  }
  return r;
}

UniquenessReport check_uniqueness(const DynamicalSystem& sys, std::size_t max_len) {
  UniquenessReport report;
  const auto k = static_cast<std::size_t>(sys.k());
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t count = ipow(k, len);
    std::vector<std::vector<UniquenessViolation>> found(static_cast<std::size_t>(omp_get_max_threads()));
    std::size_t with_fixed = 0;
    const auto signed_count = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) reduction(+ : with_fixed)
    for (std::ptrdiff_t idx = 0; idx < signed_count; ++idx) {
      const Word w = word_from_index(static_cast<std::size_t>(idx), len, sys.k());
      UniquenessViolation v;
      v.word = w;
      if (sys.is_affine()) {
        try {
          if (auto x = fixed_point_of_word(sys, w)) {
            v.fixed_points.push_back(*x);
          }
        } catch (const Error&) {
          // Only IdentityComposition can surface here: the word is valid by construction.
          v.identity = true;
        }
      } else {
        v.fixed_points = fixed_points_exhaustive(sys, w);
      }
      if (!v.fixed_points.empty()) {
        ++with_fixed;
      }
      if (v.identity || v.fixed_points.size() >= 2) {
        found[static_cast<std::size_t>(omp_get_thread_num())].push_back(std::move(v));
      }
    }
    report.words_checked += count;
    report.words_with_fixed_point += with_fixed;
    std::vector<UniquenessViolation> merged;
    for (auto& f : found) {
      merged.insert(merged.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
    }
    std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.word < b.word; });
    report.violations.insert(report.violations.end(), std::make_move_iterator(merged.begin()),
                             std::make_move_iterator(merged.end()));
  }
  report.pass = report.violations.empty();
  return report;
}

UniFixReport verify_unifix(const DynamicalSystem& sys, const Word& word, std::size_t m) {
  if (m < 1) {
    throw Error(ErrorCode::PreconditionUnmet, "power m must be >= 1");
  }
  UniFixReport r;
  r.base = fixed_point_of_word(sys, word);
  r.power = fixed_point_of_word(sys, word.repeat(m));
  r.pass = r.base.has_value() == r.power.has_value() && (!r.base || *r.base == *r.power);
  return r;
}

CycleWordReport cycle_word_aperiodicity(const DynamicalSystem& sys, const std::vector<Int>& cycle) {
  if (cycle.empty()) {
    throw Error(ErrorCode::NotACycle, "empty cycle");
  }
  {
    std::vector<Int> sorted = cycle;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::NotACycle, "cycle states are not distinct");
    }
  }
  for (std::size_t j = 0; j < cycle.size(); ++j) {
    if (!sys.in_domain(cycle[j]) || sys.apply(cycle[j]) != cycle[(j + 1) % cycle.size()]) {
      throw Error(ErrorCode::NotACycle, "f(" + to_dec(cycle[j]) + ") does not continue the cycle");
    }
  }
  CycleWordReport r;
  r.word = cycle_word(sys, cycle);
  r.aperiodic = is_aperiodic(r.word);
  if (sys.is_affine() && sys.k() == 2) {
    std::vector<int> parity;
    for (const auto& x : cycle) {
      parity.push_back(is_even(x) ? 1 : -1);
    }
    r.parity_aperiodic = is_aperiodic_sequence(parity);
    r.parity = std::move(parity);
  }
  return r;
}

}  // namespace cdyn
