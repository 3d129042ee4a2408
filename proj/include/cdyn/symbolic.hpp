#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cdyn/integer.hpp"
#include "cdyn/system.hpp"

namespace cdyn {

/// Eventually periodic symbol sequence u v v v ..., stored normalized: the
/// period is primitive and the preperiod is as short as possible, so two
/// sequences are equal iff their representations are equal.
class EventualWord {
 public:
  EventualWord() = default;
  EventualWord(std::vector<Branch> preperiod, std::vector<Branch> period);

  const std::vector<Branch>& preperiod() const { return preperiod_; }
  const std::vector<Branch>& period() const { return period_; }

  /// j-th symbol, 1-based.
  Branch at(std::size_t j) const;
  std::vector<Branch> prefix(std::size_t n) const;
  /// Drops the first symbol.
  EventualWord shifted() const;
  std::string str() const;  // "1,2,(2,1)"

  auto operator<=>(const EventualWord&) const = default;

 private:
  std::vector<Branch> preperiod_;
  std::vector<Branch> period_;
};

/// One-sided shift on eventually periodic sequences over {1..k}; branch i is
/// the set of sequences starting with i.
class ShiftSystem {
 public:
  explicit ShiftSystem(int k);
  int k() const { return k_; }
  Branch branch_of(const EventualWord& w) const;
  EventualWord apply(const EventualWord& w) const { return w.shifted(); }

 private:
  int k_;
};

/// The full coding of x, if its orbit enters a cycle within `cap` steps.
std::optional<EventualWord> coding_of(const DynamicalSystem& sys, const Int& x, std::size_t cap);

}  // namespace cdyn
