#include "cdyn/system.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cdyn/error.hpp"
#include "cdyn/window.hpp"

namespace cdyn {

SystemSpec SystemSpec::table(int k, const std::vector<Int>& states, const std::vector<Branch>& branch,
                             const std::vector<Int>& image) {
  if (branch.size() != states.size() || image.size() != states.size()) {
    throw Error(ErrorCode::InvalidSpec, "table lists must have equal length");
  }
  FiniteTable t;
  t.k = k;
  t.states = states;
  for (std::size_t i = 0; i < states.size(); ++i) {
    t.branch[states[i]] = branch[i];
    t.image[states[i]] = image[i];
  }
  return {std::move(t)};
}

std::string describe(const SystemSpec& spec) {
  std::ostringstream out;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, QxPlusD>) {
          out << "qxd(q=" << f.q << ", d=" << f.d << ")";
        } else if constexpr (std::is_same_v<F, AlphaBeta>) {
          out << "alphabeta(k=" << f.k << ", alpha=[";
          for (std::size_t i = 0; i < f.alpha.size(); ++i) out << (i ? "," : "") << f.alpha[i];
          out << "], beta=[";
          for (std::size_t i = 0; i < f.beta.size(); ++i) out << (i ? "," : "") << f.beta[i];
          out << "])";
        } else {
          out << "table(k=" << f.k << ", " << f.states.size() << " states)";
        }
      },
      spec.family);
  return out.str();
}

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) {
    throw Error(ErrorCode::InvalidSpec, msg);
  }
}

bool odd_positive(const Int& v) { return v >= 1 && !is_even(v); }

}  // namespace

DynamicalSystem make_system(SystemSpec spec) { return DynamicalSystem::build(std::move(spec), true); }

DynamicalSystem make_system_unchecked(SystemSpec spec) {
  return DynamicalSystem::build(std::move(spec), false);
}

DynamicalSystem DynamicalSystem::build(SystemSpec spec, bool check_injective) {
  DynamicalSystem sys;
  if (const auto* f = std::get_if<QxPlusD>(&spec.family)) {
    require(odd_positive(f->q), "q must be a positive odd integer, got " + to_dec(f->q));
    require(odd_positive(f->d), "d must be a positive odd integer, got " + to_dec(f->d));
    sys.k_ = 2;
    sys.alpha_ = {f->q};
    sys.beta_ = {f->d};
  } else if (const auto* f = std::get_if<AlphaBeta>(&spec.family)) {
    require(f->k >= 2, "alphabeta needs k >= 2");
    const auto n = static_cast<std::size_t>(f->k - 1);
    require(f->alpha.size() == n && f->beta.size() == n, "alpha and beta must have length k-1");
    for (std::size_t i = 0; i < n; ++i) {
      require(f->alpha[i] >= 1 && f->beta[i] >= 1, "alpha and beta entries must be >= 1");
    }
    sys.k_ = f->k;
    sys.alpha_ = f->alpha;
    sys.beta_ = f->beta;
  } else {
    const auto& t = std::get<FiniteTable>(spec.family);
    require(t.k >= 1, "table needs k >= 1");
    require(!t.states.empty(), "table state set must be nonempty");
    auto table = std::make_shared<Table>();
    std::set<Int> seen(t.states.begin(), t.states.end());
    require(seen.size() == t.states.size(), "duplicate state in table");
    table->states.assign(seen.begin(), seen.end());
    for (const auto& x : table->states) {
      const auto b = t.branch.find(x);
      const auto im = t.image.find(x);
      require(b != t.branch.end(), "state " + to_dec(x) + " has no branch");
      require(im != t.image.end(), "state " + to_dec(x) + " has no image");
      require(b->second >= 1 && b->second <= t.k,
              "branch of state " + to_dec(x) + " outside 1.." + std::to_string(t.k));
      require(seen.count(im->second) != 0,
              "image of state " + to_dec(x) + " is not a state: " + to_dec(im->second));
      table->forward.emplace(x, std::make_pair(b->second, im->second));
      table->inverse[im->second].emplace_back(x, b->second);
    }
    require(t.branch.size() == t.states.size() && t.image.size() == t.states.size(),
            "branch/image maps mention unknown states");
    for (auto& [target, sources] : table->inverse) {
      std::sort(sources.begin(), sources.end(),
                [](const auto& a, const auto& b) { return a.second != b.second ? a.second < b.second : a.first < b.first; });
      if (check_injective) {
        for (std::size_t i = 1; i < sources.size(); ++i) {
          if (sources[i].second == sources[i - 1].second) {
            throw Error(ErrorCode::NonInjectiveBranch,
                        "states " + to_dec(sources[i - 1].first) + " and " + to_dec(sources[i].first) +
                            " of branch " + std::to_string(sources[i].second) + " both map to " +
                            to_dec(target));
          }
        }
      }
    }
    sys.k_ = t.k;
    sys.table_ = std::move(table);
  }
  sys.k_int_ = sys.k_;
  sys.spec_ = std::move(spec);
  return sys;
}

bool DynamicalSystem::in_domain(const Int& x) const {
  if (table_) {
    return table_->forward.count(x) != 0;
  }
  return x >= 1;
}

Branch DynamicalSystem::branch_of(const Int& x) const {
  if (table_) {
    const auto it = table_->forward.find(x);
    if (it == table_->forward.end()) {
      throw Error(ErrorCode::OutOfDomain, to_dec(x) + " is not a state of the table");
    }
    return it->second.first;
  }
  if (x < 1) {
    throw Error(ErrorCode::OutOfDomain, to_dec(x) + " is not a positive integer");
  }
  if (k_ == 2) {
    return is_even(x) ? 2 : 1;
  }
  const unsigned long r = mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(k_));
  return r == 0 ? k_ : static_cast<Branch>(r);
}

Int DynamicalSystem::apply(const Int& x) const {
  if (table_) {
    const auto it = table_->forward.find(x);
    if (it == table_->forward.end()) {
      throw Error(ErrorCode::OutOfDomain, to_dec(x) + " is not a state of the table");
    }
    return it->second.second;
  }
  const Branch i = branch_of(x);
  if (i == k_) {
    Int y;
    mpz_divexact_ui(y.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(k_));
    return y;
  }
  return alpha_[static_cast<std::size_t>(i - 1)] * x + beta_[static_cast<std::size_t>(i - 1)];
}

std::vector<std::pair<Int, Branch>> DynamicalSystem::preimages(const Int& x) const {
  if (!in_domain(x)) {
    throw Error(ErrorCode::OutOfDomain, to_dec(x) + " is outside the state domain");
  }
  std::vector<std::pair<Int, Branch>> out;
  if (table_) {
    const auto it = table_->inverse.find(x);
    if (it != table_->inverse.end()) {
      out = it->second;
    }
    return out;
  }
  out.emplace_back(k_int_ * x, k_);
  for (Branch i = 1; i < k_; ++i) {
    const auto& a = alpha_[static_cast<std::size_t>(i - 1)];
    const auto& b = beta_[static_cast<std::size_t>(i - 1)];
    const Int num = x - b;
    if (num < 1 || !mpz_divisible_p(num.get_mpz_t(), a.get_mpz_t())) {
      continue;
    }
    Int y;
    mpz_divexact(y.get_mpz_t(), num.get_mpz_t(), a.get_mpz_t());
    if (y >= 1 && branch_of(y) == i) {
      out.emplace_back(std::move(y), i);
    }
  }
  return out;
}

const std::vector<Int>& DynamicalSystem::states() const {
  if (!table_) {
    throw Error(ErrorCode::InvalidSpec, "infinite system has no finite state list");
  }
  return table_->states;
}

BranchMap DynamicalSystem::branch_map(Branch i) const {
  if (table_) {
    throw Error(ErrorCode::NotAffineFamily, "finite tables have no affine branch maps");
  }
  if (i < 1 || i > k_) {
    throw Error(ErrorCode::OutOfDomain, "branch index out of range");
  }
  if (i == k_) {
    return {Rational(1, k_int_), Rational(0)};
  }
  return {Rational(alpha_[static_cast<std::size_t>(i - 1)]), Rational(beta_[static_cast<std::size_t>(i - 1)])};
}

BoundedConditionReport verify_bounded_condition(const DynamicalSystem& sys, const Window& window) {
  BoundedConditionReport report;
  std::vector<std::unordered_map<Int, Int, IntHash>> seen(static_cast<std::size_t>(sys.k()) + 1);
  for (const auto& x : window.states()) {
    ++report.checked;
    const Branch b = sys.branch_of(x);
    if (b < 1 || b > sys.k()) {
      report.pass = false;
      report.bad_branch = x;
      return report;
    }
    const Int y = sys.apply(x);
    auto [it, inserted] = seen[static_cast<std::size_t>(b)].emplace(y, x);
    if (!inserted) {
      report.pass = false;
      report.collision = std::make_pair(it->second, x);
      report.collision_branch = b;
      return report;
    }
  }
  return report;
}

}  // namespace cdyn
