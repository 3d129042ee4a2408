#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace cdyn {

using Int = mpz_class;
using Rational = mpq_class;

/// Parses a base-10 integer; throws cdyn::Error(Parse) on malformed input.
Int parse_int(std::string_view text);

inline std::string to_dec(const Int& v) { return v.get_str(10); }
std::string to_dec(const Rational& v);

Rational parse_rational(std::string_view text);

inline bool is_even(const Int& v) { return mpz_even_p(v.get_mpz_t()) != 0; }

/// x mod m in [0, m) for m > 0.
inline Int mod_floor(const Int& x, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int pow_ui(const Int& base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

struct IntHash {
  std::size_t operator()(const Int& v) const noexcept {
    const auto* z = v.get_mpz_t();
    std::size_t h = static_cast<std::size_t>(z->_mp_size) * 0x9e3779b97f4a7c15ULL;
    const int n = z->_mp_size < 0 ? -z->_mp_size : z->_mp_size;
    for (int i = 0; i < n; ++i) {
      h ^= static_cast<std::size_t>(z->_mp_d[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

std::vector<std::string> to_dec(const std::vector<Int>& values);

}  // namespace cdyn
