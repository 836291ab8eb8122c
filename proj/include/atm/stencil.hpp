#pragma once

// Centered finite-difference operators with exact rational weights.
//
// The operator for the p-th derivative at accuracy order 2q uses the
// offsets -s..s with s = floor((p-1)/2) + q. Its weights are the unique
// solution of the moment system
//
//     sum_{i=-s}^{s} c_i i^m = p! [m == p],   m = 0..2s,
//
// which makes the operator exact on polynomials of degree <= p+2q-1.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "atm/errors.hpp"
#include "atm/matrix.hpp"
#include "atm/rational.hpp"

namespace atm {

class StencilCoefficients {
 public:
  StencilCoefficients(int p, int q, std::vector<Rational> coeffs)
      : p_(p), q_(q), s_(halfwidth(p, q)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != static_cast<std::size_t>(2 * s_ + 1))
      throw ShapeError("stencil: expected " + std::to_string(2 * s_ + 1) + " weights");
  }

  static int halfwidth(int p, int q) { return (p - 1) / 2 + q; }

  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int s() const noexcept { return s_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Weight at offset i, -s <= i <= s.
  const Rational& operator[](int offset) const { return coeffs_.at(static_cast<std::size_t>(offset + s_)); }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

  /// Weights converted once to a working scalar type, in offset order -s..s.
  template <class T>
  std::vector<T> weights_as() const {
    std::vector<T> w;
    w.reserve(coeffs_.size());
    for (const auto& c : coeffs_) w.push_back(rational_cast<T>(c));
    return w;
  }

  /// Exact check of sum_i c_i i^m == p! [m == p] for m = 0..upto.
  bool satisfies_moments(int upto) const {
    const Rational pfact = factorial(static_cast<unsigned>(p_));
    for (int m = 0; m <= upto; ++m) {
      Rational acc = 0;
      for (int i = -s_; i <= s_; ++i) acc += (*this)[i] * pow(Rational(i), static_cast<unsigned>(m));
      if (acc != (m == p_ ? pfact : Rational(0))) return false;
    }
    return true;
  }

 private:
  int p_;
  int q_;
  int s_;
  std::vector<Rational> coeffs_;
};

inline StencilCoefficients derive_stencil(int p, int q) {
  if (p < 1) throw DomainError("derive_stencil: derivative order p must be >= 1");
  if (q < 1) throw DomainError("derive_stencil: half accuracy order q must be >= 1");
  const int s = StencilCoefficients::halfwidth(p, q);
  const std::size_t n = static_cast<std::size_t>(2 * s + 1);

  Matrix<Rational> moments(n, n);
  for (std::size_t m = 0; m < n; ++m)
    for (int i = -s; i <= s; ++i)
      moments(m, static_cast<std::size_t>(i + s)) = pow(Rational(i), static_cast<unsigned>(m));
  Vector<Rational> rhs(n, Rational(0));
  rhs[static_cast<std::size_t>(p)] = factorial(static_cast<unsigned>(p));

  return StencilCoefficients(p, q, solve(std::move(moments), std::move(rhs)));
}

/// (1/h^p) sum_i w_i samples[i] for pre-converted weights, componentwise.
template <class T>
Vector<T> apply_weights(std::span<const T> weights, int p, std::span<const Vector<T>> samples, const std::type_identity_t<T>& h) {
  if (samples.size() != weights.size())
    throw ShapeError("apply_stencil: got " + std::to_string(samples.size()) + " samples, expected " +
                     std::to_string(weights.size()));
  const std::size_t dim = samples.empty() ? 0 : samples.front().size();
  Vector<T> out(dim, T(0));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k].size() != dim) throw ShapeError("apply_stencil: ragged samples");
    if (weights[k] == 0) continue;
    for (std::size_t d = 0; d < dim; ++d) out[d] += weights[k] * samples[k][d];
  }
  T hp(1);
  for (int k = 0; k < p; ++k) hp *= h;
  for (auto& x : out) x /= hp;
  return out;
}

/// Applies the stencil to samples taken at offsets -s..s (samples[0] is offset -s).
template <class T>
Vector<T> apply_stencil(const StencilCoefficients& st, std::span<const Vector<T>> samples, const std::type_identity_t<T>& h) {
  if (!(h > 0)) throw DomainError("apply_stencil: h must be positive");
  const auto w = st.weights_as<T>();
  return apply_weights<T>(w, st.p(), samples, h);
}

template <class T>
Vector<T> apply_stencil(const StencilCoefficients& st, const std::vector<Vector<T>>& samples, const std::type_identity_t<T>& h) {
  return apply_stencil<T>(st, std::span<const Vector<T>>(samples), h);
}

/// Weights gamma_i^{l,R} of the level-l derivative estimate in an order-R
/// method: the full stencil for p = l, q = ceil((R-l)/2), keyed by offset.
/// Level 0 is the single weight {0 -> 1}.
inline std::map<int, Rational> gamma_coefficients(int l, int R) {
  if (R < 1) throw DomainError("gamma_coefficients: order R must be >= 1");
  if (l < 0 || l >= R) throw DomainError("gamma_coefficients: level must satisfy 0 <= l <= R-1");
  std::map<int, Rational> out;
  if (l == 0) {
    out.emplace(0, Rational(1));
    return out;
  }
  const auto st = derive_stencil(l, (R - l + 1) / 2);
  for (int i = -st.s(); i <= st.s(); ++i) out.emplace(i, st[i]);
  return out;
}

}  // namespace atm
