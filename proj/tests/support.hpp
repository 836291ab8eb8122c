#pragma once

// Test-only oracles and generators. Nothing here calls into the code paths
// it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "atm/integrator.hpp"
#include "atm/matrix.hpp"
#include "atm/rational.hpp"

namespace atm::testing {

/// Centered-difference weights from Lagrange interpolation: w_i is the p-th
/// derivative at 0 of the interpolating basis polynomial for node i on the
/// nodes -s..s. Expands each basis polynomial into monomial coefficients;
/// no linear solve involved.
inline std::vector<Rational> lagrange_weights(int p, int s) {
  std::vector<Rational> w;
  for (int i = -s; i <= s; ++i) {
    std::vector<Rational> poly{Rational(1)};  // ascending coefficients
    for (int k = -s; k <= s; ++k) {
      if (k == i) continue;
      std::vector<Rational> next(poly.size() + 1, Rational(0));
      const Rational denom = i - k;
      for (std::size_t d = 0; d < poly.size(); ++d) {
        next[d + 1] += poly[d] / denom;
        next[d] -= poly[d] * k / denom;
      }
      poly = std::move(next);
    }
    w.push_back(static_cast<std::size_t>(p) < poly.size() ? poly[static_cast<std::size_t>(p)] * factorial(static_cast<unsigned>(p))
                                                          : Rational(0));
  }
  return w;
}

/// One monomial c * prod_k u_k^{e_k}.
struct Monomial {
  Rational coef;
  std::vector<unsigned> exps;
};

/// Polynomial vector field with rational coefficients; evaluates in any
/// scalar type, so the same instance drives double and exact runs.
struct PolynomialField {
  std::size_t dim = 0;
  std::vector<std::vector<Monomial>> components;

  template <class T>
  State<T> operator()(const State<T>& u) const {
    State<T> out(dim, T(0));
    for (std::size_t c = 0; c < dim; ++c)
      for (const auto& mono : components[c]) {
        T term = rational_cast<T>(mono.coef);
        for (std::size_t k = 0; k < dim; ++k)
          for (unsigned e = 0; e < mono.exps[k]; ++e) term *= u[k];
        out[c] += term;
      }
    return out;
  }

  template <class T>
  OdeProblem<T> problem(State<T> u0) const {
    OdeProblem<T> p;
    p.dim = dim;
    p.u0 = std::move(u0);
    p.rhs = [self = *this](const State<T>& u) { return self(u); };
    return p;
  }
};

/// Random field with up to `terms` monomials of total degree <= max_degree
/// per component and coefficients k/8, k in [-8, 8].
inline PolynomialField random_field(std::mt19937_64& rng, std::size_t dim, int terms, unsigned max_degree) {
  std::uniform_int_distribution<int> coef(-8, 8);
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> var(0, dim - 1);
  PolynomialField f;
  f.dim = dim;
  f.components.resize(dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (int t = 0; t < terms; ++t) {
      Monomial m{Rational(coef(rng), 8), std::vector<unsigned>(dim, 0)};
      const unsigned d = deg(rng);
      for (unsigned k = 0; k < d; ++k) ++m.exps[var(rng)];
      f.components[c].push_back(std::move(m));
    }
  return f;
}

inline Matrix<double> random_matrix(std::mt19937_64& rng, std::size_t m, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix<double> a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = u(rng);
  return a;
}

inline State<double> random_state(std::mt19937_64& rng, std::size_t m, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  State<double> v(m);
  for (auto& x : v) x = u(rng);
  return v;
}

/// |a - b|_inf / max(|b|_inf, tiny)
inline double rel_max_diff(const State<double>& a, const State<double>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / std::max(den, 1e-300);
}

}  // namespace atm::testing
