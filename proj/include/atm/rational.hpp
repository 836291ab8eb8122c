#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <type_traits>

namespace atm {

using Rational = mpq_class;
using Integer = mpz_class;

/// Exact "num/den" rendering; integers print without a denominator.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational factorial(unsigned n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

/// Integer power of a rational, exact.
inline Rational pow(const Rational& base, unsigned e) {
  Rational r = 1;
  for (unsigned k = 0; k < e; ++k) r *= base;
  return r;
}

/// Converts an exact rational into the scalar type used by a computation.
///
/// double goes through GMP's correctly truncated mpq_get_d; any other
/// constructible-from-string type (boost multiprecision floats) is built from
/// numerator and denominator separately.
template <class T>
T rational_cast(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>) {
    return r;
  } else if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(r.get_d());
  } else {
    return T(r.get_num().get_str()) / T(r.get_den().get_str());
  }
}

template <class T>
bool is_finite(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return true;
  } else {
    using std::isfinite;
    return isfinite(x);
  }
}

template <class T>
double to_double(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return x.get_d();
  } else {
    return static_cast<double>(x);
  }
}

}  // namespace atm
