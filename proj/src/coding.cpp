#include "cdyn/coding.hpp"

#include <algorithm>
#include <tuple>

#include <omp.h>

#include "cdyn/error.hpp"

namespace cdyn {

CodingPrefix coding_prefix(const DynamicalSystem& sys, const Int& x, std::size_t len) {
  if (len < 1) {
    throw Error(ErrorCode::PreconditionUnmet, "prefix length must be >= 1");
  }
  CodingPrefix p;
  p.source = x;
  p.symbols.reserve(len);
  Int cur = x;
  for (std::size_t j = 0; j < len; ++j) {
    p.symbols.push_back(sys.branch_of(cur));
    if (j + 1 < len) {
      cur = sys.apply(cur);
    }
  }
  return p;
}

CodingPrefix shift(const CodingPrefix& prefix, const DynamicalSystem& sys) {
  CodingPrefix out = shift(prefix);
  if (prefix.source) {
    out.source = sys.apply(*prefix.source);
  }
  return out;
}

CodingPrefix shift(const CodingPrefix& prefix) {
  if (prefix.size() < 2) {
    throw Error(ErrorCode::TooShort, "shift needs a prefix of length >= 2");
  }
  CodingPrefix out;
  out.symbols.assign(prefix.symbols.begin() + 1, prefix.symbols.end());
  return out;
}

std::optional<std::size_t> distinguishing_prefix_length(const DynamicalSystem& sys, const Int& x, const Int& y,
                                                        std::size_t cap) {
  Int a = x;
  Int b = y;
  for (std::size_t j = 1; j <= cap; ++j) {
    if (sys.branch_of(a) != sys.branch_of(b)) {
      return j;
    }
    if (j < cap) {
      a = sys.apply(a);
      b = sys.apply(b);
    }
  }
  return std::nullopt;
}

namespace {

constexpr std::size_t kPrefixBlock = 64;

struct Best {
  std::size_t len = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  bool set = false;

  void offer(std::size_t l, std::size_t a, std::size_t b) {
    if (!set || l > len || (l == len && std::tie(a, b) < std::tie(i, j))) {
      len = l;
      i = a;
      j = b;
      set = true;
    }
  }
};

}  // namespace

TucReport verify_tuc_window(const DynamicalSystem& sys, const Window& window, std::size_t cap) {
  TucReport report;
  const std::size_t n = window.size();
  report.states = n;
  report.pairs_checked = n < 2 ? 0 : n * (n - 1) / 2;
  if (n < 2 || cap == 0) {
    if (cap == 0) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) report.undistinguished.emplace_back(window.at(i), window.at(j));
    }
    return report;
  }

  // Cache a block of coding symbols per state plus the iterate after the block,
  // so most pairs are settled by comparing small integer arrays.
  const std::size_t block = std::min(cap, kPrefixBlock);
  std::vector<Branch> symbols(n * block);
  std::vector<Int> tail(n);
  const auto signed_n = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t si = 0; si < signed_n; ++si) {
    const auto i = static_cast<std::size_t>(si);
    Int cur = window.at(i);
    for (std::size_t t = 0; t < block; ++t) {
      symbols[i * block + t] = sys.branch_of(cur);
      cur = sys.apply(cur);
    }
    tail[i] = std::move(cur);
  }

  const int threads = omp_get_max_threads();
  std::vector<Best> best(static_cast<std::size_t>(threads));
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> stuck(static_cast<std::size_t>(threads));
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t si = 0; si < signed_n; ++si) {
    const auto i = static_cast<std::size_t>(si);
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
    const Branch* a = &symbols[i * block];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Branch* b = &symbols[j * block];
      std::size_t t = 0;
      while (t < block && a[t] == b[t]) {
        ++t;
      }
      std::optional<std::size_t> len;
      if (t < block) {
        len = t + 1;
      } else if (cap > block) {
        if (auto rest = distinguishing_prefix_length(sys, tail[i], tail[j], cap - block)) {
          len = block + *rest;
        }
      }
      if (len) {
        best[tid].offer(*len, i, j);
      } else {
        stuck[tid].emplace_back(i, j);
      }
    }
  }

  Best overall;
  for (const auto& b : best) {
    if (b.set) {
      overall.offer(b.len, b.i, b.j);
    }
  }
  if (overall.set) {
    report.max_length = overall.len;
    report.max_pair = std::make_pair(window.at(overall.i), window.at(overall.j));
  }
  std::vector<std::pair<std::size_t, std::size_t>> all_stuck;
  for (auto& s : stuck) {
    all_stuck.insert(all_stuck.end(), s.begin(), s.end());
  }
  std::sort(all_stuck.begin(), all_stuck.end());
  for (const auto& [i, j] : all_stuck) {
    report.undistinguished.emplace_back(window.at(i), window.at(j));
  }
  return report;
}

AlphaBetaReport check_alphabeta_hypotheses(const DynamicalSystem& sys, const Window& window, std::size_t horizon) {
  if (!sys.is_affine()) {
    throw Error(ErrorCode::NotAffineFamily, "alphabeta hypotheses apply to affine families only");
  }
  AlphaBetaReport r;
  const Int k = sys.k();
  r.horizon = horizon == 0 ? static_cast<std::size_t>(sys.k()) : horizon;
  for (std::size_t i = 0; i < sys.alpha().size(); ++i) {
    Int g;
    mpz_gcd(g.get_mpz_t(), sys.alpha()[i].get_mpz_t(), k.get_mpz_t());
    if (g != 1) {
      r.coprime = false;
      r.non_coprime_branches.push_back(static_cast<Branch>(i + 1));
    }
  }
  for (const auto& n : window.states()) {
    ++r.checked;
    Int cur = n;
    bool hit = false;
    for (std::size_t t = 0; t < r.horizon && !hit; ++t) {
      hit = sys.branch_of(cur) == sys.k();
      if (!hit) {
        cur = sys.apply(cur);
      }
    }
    if (!hit) {
      r.multiple_of_k = false;
      if (r.multiple_failures.size() < 64) {
        r.multiple_failures.push_back(n);
      }
      ++r.multiple_failure_count;
    }
  }
  return r;
}

bool ResidueTower::compatible() const {
  Int kj = k;
  for (std::size_t j = 0; j + 1 < digits.size(); ++j) {
    if (mod_floor(digits[j + 1], kj) != digits[j]) {
      return false;
    }
    kj *= k;
  }
  for (std::size_t j = 0; j < digits.size(); ++j) {
    if (digits[j] < 0 || digits[j] >= pow_ui(k, static_cast<unsigned long>(j + 1))) {
      return false;
    }
  }
  return true;
}

ResidueTower tower_from_state(const Int& x, const Int& k, std::size_t depth) {
  if (depth < 1) {
    throw Error(ErrorCode::PreconditionUnmet, "tower depth must be >= 1");
  }
  if (k < 2) {
    throw Error(ErrorCode::PreconditionUnmet, "tower base must be >= 2");
  }
  ResidueTower t;
  t.k = k;
  Int kj = k;
  for (std::size_t j = 0; j < depth; ++j) {
    t.digits.push_back(mod_floor(x, kj));
    kj *= k;
  }
  return t;
}

ResidueTower tower_apply(const DynamicalSystem& sys, const ResidueTower& t) {
  if (!sys.is_affine()) {
    throw Error(ErrorCode::NotAffineFamily, "towers need an affine family");
  }
  if (t.k != sys.k()) {
    throw Error(ErrorCode::PreconditionUnmet, "tower base differs from the system's k");
  }
  if (t.digits.empty()) {
    throw Error(ErrorCode::DepthExhausted, "empty tower");
  }
  ResidueTower out;
  out.k = t.k;
  const Int& r1 = t.digits.front();
  if (r1 == 0) {
    if (t.depth() < 2) {
      throw Error(ErrorCode::DepthExhausted, "division branch needs depth >= 2");
    }
    for (std::size_t j = 1; j < t.depth(); ++j) {
      Int q;
      mpz_divexact(q.get_mpz_t(), t.digits[j].get_mpz_t(), t.k.get_mpz_t());
      out.digits.push_back(std::move(q));
    }
    return out;
  }
  const auto i = static_cast<std::size_t>(r1.get_ui() - 1);
  const Int& a = sys.alpha()[i];
  const Int& b = sys.beta()[i];
  Int kj = t.k;
  for (std::size_t j = 0; j < t.depth(); ++j) {
    out.digits.push_back(mod_floor(a * t.digits[j] + b, kj));
    kj *= t.k;
  }
  return out;
}

RecoveryReport verify_recovery_lemma(const DynamicalSystem& sys, const Int& x, const Int& y, std::size_t j,
                                     std::size_t depth) {
  if (j < 1 || depth < j + 1) {
    throw Error(ErrorCode::PreconditionUnmet, "need j >= 1 and depth >= j+1");
  }
  const Int k = sys.k();
  const ResidueTower tx = tower_from_state(x, k, depth);
  const ResidueTower ty = tower_from_state(y, k, depth);
  const ResidueTower tfx = tower_from_state(sys.apply(x), k, depth);
  const ResidueTower tfy = tower_from_state(sys.apply(y), k, depth);
  if (tx.digits[0] != ty.digits[0]) {
    throw Error(ErrorCode::PreconditionUnmet, "x and y differ mod k");
  }
  if (tfx.digits[j - 1] != tfy.digits[j - 1]) {
    throw Error(ErrorCode::PreconditionUnmet, "f(x) and f(y) differ mod k^j");
  }
  RecoveryReport r;
  r.residue = tx.digits[0];
  r.level = r.residue == 0 ? j + 1 : j;
  r.pass = tx.digits[r.level - 1] == ty.digits[r.level - 1];
  return r;
}

}  // namespace cdyn
