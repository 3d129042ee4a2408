#include "cdyn/integer.hpp"

#include <string>

#include "cdyn/error.hpp"

namespace cdyn {

Int parse_int(std::string_view text) {
  std::string s(text);
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) {
    throw Error(ErrorCode::Parse, "empty integer");
  }
  s = s.substr(first, last - first + 1);
  std::size_t digits_from = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (digits_from == s.size()) {
    throw Error(ErrorCode::Parse, "malformed integer '" + s + "'");
  }
  for (std::size_t i = digits_from; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') {
      throw Error(ErrorCode::Parse, "malformed integer '" + s + "'");
    }
  }
  if (s[0] == '+') {
    s.erase(0, 1);
  }
  return Int(s, 10);
}

std::string to_dec(const Rational& v) { return v.get_str(10); }

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_int(text));
  }
  Int num = parse_int(text.substr(0, slash));
  Int den = parse_int(text.substr(slash + 1));
  if (den == 0) {
    throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::vector<std::string> to_dec(const std::vector<Int>& values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    out.push_back(to_dec(v));
  }
  return out;
}

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NonInjectiveBranch: return "NonInjectiveBranch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NotAffineFamily: return "NotAffineFamily";
    case ErrorCode::IdentityComposition: return "IdentityComposition";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::DepthExhausted: return "DepthExhausted";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::NotClosedSystem: return "NotClosedSystem";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::WindowMismatch: return "WindowMismatch";
    case ErrorCode::OrbitConditionFailed: return "OrbitConditionFailed";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace cdyn
