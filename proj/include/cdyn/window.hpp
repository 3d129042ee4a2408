#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdyn/integer.hpp"

namespace cdyn {

class DynamicalSystem;

/// Finite ordered set of states. Either a contiguous integer range or an
/// explicit list; the order defines coordinate indices for truncations.
class Window {
 public:
  Window() = default;

  static Window range(const Int& lo, const Int& hi);
  /// Keeps first occurrence order; duplicates are dropped.
  static Window of(const std::vector<Int>& states);
  /// Whole state set of a finite system.
  static Window all(const DynamicalSystem& sys);
  /// Parses "A..B".
  static Window parse_range(std::string_view text);

  bool contains(const Int& x) const;
  std::optional<std::size_t> index_of(const Int& x) const;
  const std::vector<Int>& states() const { return states_; }
  const Int& at(std::size_t i) const { return states_[i]; }
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  bool is_range() const { return range_; }

 private:
  std::vector<Int> states_;
  bool range_ = false;
  Int lo_;
  Int hi_;
  std::unordered_map<Int, std::size_t, IntHash> index_;
};

}  // namespace cdyn
