#include "cdyn/symbolic.hpp"

#include <algorithm>
#include <sstream>

#include "cdyn/error.hpp"
#include "cdyn/orbits.hpp"

namespace cdyn {

EventualWord::EventualWord(std::vector<Branch> preperiod, std::vector<Branch> period)
    : preperiod_(std::move(preperiod)), period_(std::move(period)) {
  if (period_.empty()) {
    throw Error(ErrorCode::InvalidSpec, "eventually periodic word needs a nonempty period");
  }
  const std::size_t m = period_.size();
  for (std::size_t l = 1; l < m; ++l) {
    if (m % l != 0) {
      continue;
    }
    bool periodic = true;
    for (std::size_t j = l; j < m && periodic; ++j) {
      periodic = period_[j] == period_[j - l];
    }
    if (periodic) {
      period_.resize(l);
      break;
    }
  }
  while (!preperiod_.empty() && preperiod_.back() == period_.back()) {
    preperiod_.pop_back();
    std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
  }
}

Branch EventualWord::at(std::size_t j) const {
  if (j < 1) {
    throw Error(ErrorCode::OutOfDomain, "symbol positions are 1-based");
  }
  --j;
  if (j < preperiod_.size()) {
    return preperiod_[j];
  }
  return period_[(j - preperiod_.size()) % period_.size()];
}

std::vector<Branch> EventualWord::prefix(std::size_t n) const {
  std::vector<Branch> out;
  out.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    out.push_back(at(j));
  }
  return out;
}

EventualWord EventualWord::shifted() const {
  if (!preperiod_.empty()) {
    return EventualWord(std::vector<Branch>(preperiod_.begin() + 1, preperiod_.end()), period_);
  }
  std::vector<Branch> rotated = period_;
  std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
  return EventualWord({}, std::move(rotated));
}

std::string EventualWord::str() const {
  std::ostringstream out;
  for (const Branch b : preperiod_) {
    out << b << ',';
  }
  out << '(';
  for (std::size_t i = 0; i < period_.size(); ++i) {
    out << (i ? "," : "") << period_[i];
  }
  out << ')';
  return out.str();
}

ShiftSystem::ShiftSystem(int k) : k_(k) {
  if (k < 1) {
    throw Error(ErrorCode::InvalidSpec, "shift needs k >= 1");
  }
}

Branch ShiftSystem::branch_of(const EventualWord& w) const {
  const Branch b = w.at(1);
  if (b < 1 || b > k_) {
    throw Error(ErrorCode::OutOfDomain, "sequence symbol outside 1..k");
  }
  return b;
}

std::optional<EventualWord> coding_of(const DynamicalSystem& sys, const Int& x, std::size_t cap) {
  const OrbitRecord rec = orbit_iterate(sys, x, cap);
  if (!rec.entered_cycle()) {
    return std::nullopt;
  }
  std::vector<Branch> pre;
  std::vector<Branch> per;
  for (std::size_t i = 0; i < rec.trajectory.size(); ++i) {
    (i < rec.entry_index ? pre : per).push_back(sys.branch_of(rec.trajectory[i]));
  }
  return EventualWord(std::move(pre), std::move(per));
}

}  // namespace cdyn
