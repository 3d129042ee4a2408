#include "cdyn/window.hpp"

#include <string>

#include "cdyn/error.hpp"
#include "cdyn/system.hpp"

namespace cdyn {

Window Window::range(const Int& lo, const Int& hi) {
  if (hi < lo) {
    throw Error(ErrorCode::InvalidSpec, "empty window " + to_dec(lo) + ".." + to_dec(hi));
  }
  Window w;
  w.range_ = true;
  w.lo_ = lo;
  w.hi_ = hi;
  const Int n = hi - lo + 1;
  w.states_.reserve(n.get_ui());
  for (Int x = lo; x <= hi; ++x) {
    w.states_.push_back(x);
  }
  return w;
}

Window Window::of(const std::vector<Int>& states) {
  Window w;
  for (const auto& x : states) {
    if (w.index_.emplace(x, w.states_.size()).second) {
      w.states_.push_back(x);
    }
  }
  return w;
}

Window Window::all(const DynamicalSystem& sys) { return of(sys.states()); }

Window Window::parse_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    throw Error(ErrorCode::Parse, "window must look like A..B, got '" + std::string(text) + "'");
  }
  return range(parse_int(text.substr(0, dots)), parse_int(text.substr(dots + 2)));
}

bool Window::contains(const Int& x) const {
  if (range_) {
    return lo_ <= x && x <= hi_;
  }
  return index_.count(x) != 0;
}

std::optional<std::size_t> Window::index_of(const Int& x) const {
  if (range_) {
    if (lo_ <= x && x <= hi_) {
      return Int(x - lo_).get_ui();
    }
    return std::nullopt;
  }
  const auto it = index_.find(x);
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

}  // namespace cdyn
