#pragma once

// Butcher-array form of the R-th order approximate Taylor method.
//
// Stages are the distinct rhs samples of one step: (0,0) for f(v), and
// (l,i) for f(T^l(i h)) with 1 <= l <= R-1, 0 < |i| <= m_{l,R}. They are
// numbered 1..n_R level by level, offsets ascending within a level.

#include <cstddef>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "atm/errors.hpp"
#include "atm/integrator.hpp"
#include "atm/matrix.hpp"
#include "atm/rational.hpp"
#include "atm/stencil.hpp"

namespace atm {

/// Stencil half-width m_{l,R} used at derivative level l. m_{0,R} = 0.
inline int stage_halfwidth(int l, int R) {
  if (R < 1) throw DomainError("stage_halfwidth: order must be >= 1");
  if (l == 0) return 0;
  if (l < 1 || l > R - 1) throw DomainError("stage_halfwidth: level must satisfy 1 <= l <= R-1");
  if (R % 2 == 1) return (R - 1) / 2;
  return l % 2 == 0 ? R / 2 - 1 : R / 2;
}

/// n_R. The closed form holds for R >= 2; R = 1 (explicit Euler) has one stage.
inline std::size_t stage_count(int R) {
  if (R < 1) throw DomainError("stage_count: order must be >= 1");
  if (R == 1) return 1;
  const auto r1 = static_cast<std::size_t>(R - 1);
  return (R % 2 == 1 ? 1 : 2) + r1 * r1;
}

struct StageIndex {
  int l = 0;
  int i = 0;
  friend bool operator==(const StageIndex&, const StageIndex&) = default;
};

inline bool in_stage_set(int l, int i, int R) {
  if (R < 1) return false;
  if (l == 0) return i == 0;
  if (l < 1 || l > R - 1 || i == 0) return false;
  const int m = stage_halfwidth(l, R);
  return -m <= i && i <= m;
}

/// 1-based position of stage (l, i).
inline std::size_t index_map(int l, int i, int R) {
  if (!in_stage_set(l, i, R))
    throw DomainError("index_map: (" + std::to_string(l) + ", " + std::to_string(i) + ") is not a stage of order " +
                      std::to_string(R));
  if (l == 0) return 1;
  int prefix = 0;
  for (int k = 1; k < l; ++k) prefix += 2 * stage_halfwidth(k, R);
  const int m = stage_halfwidth(l, R);
  return static_cast<std::size_t>((i < 0 ? 2 : 1) + prefix + i + m);
}

/// All stages in index_map order.
inline std::vector<StageIndex> stage_list(int R) {
  if (R < 1) throw DomainError("stage_list: order must be >= 1");
  std::vector<StageIndex> out{{0, 0}};
  for (int l = 1; l < R; ++l) {
    const int m = stage_halfwidth(l, R);
    for (int i = -m; i <= m; ++i)
      if (i != 0) out.push_back({l, i});
  }
  return out;
}

struct ButcherTableau {
  int order = 0;
  std::size_t stages = 0;
  std::vector<StageIndex> index;  ///< index[s] is the stage at 1-based position s+1
  Matrix<Rational> A;
  std::vector<Rational> b;
  std::vector<Rational> c;
};

inline ButcherTableau build_tableau(int R) {
  if (R < 1) throw DomainError("build_tableau: order must be >= 1");
  ButcherTableau tab;
  tab.order = R;
  tab.index = stage_list(R);
  tab.stages = tab.index.size();
  const std::size_t n = tab.stages;
  tab.A = Matrix<Rational>(n, n);
  tab.b.assign(n, Rational(0));
  tab.c.assign(n, Rational(0));

  std::vector<std::map<int, Rational>> gamma;
  std::vector<Rational> inv_fact;  // 1/(l+1)!
  for (int l = 0; l < R; ++l) {
    gamma.push_back(gamma_coefficients(l, R));
    inv_fact.push_back(1 / factorial(static_cast<unsigned>(l + 1)));
  }
  auto center = [&](int l) -> Rational {
    const auto it = gamma[static_cast<std::size_t>(l)].find(0);
    return it == gamma[static_cast<std::size_t>(l)].end() ? Rational(0) : it->second;
  };

  for (std::size_t row = 1; row < n; ++row) {
    const auto [k, j] = tab.index[row];
    Rational jpow = j;  // j^{l+1}
    Rational center_sum = 0;
    for (int l = 0; l < k; ++l, jpow *= j) {
      center_sum += jpow * center(l) * inv_fact[static_cast<std::size_t>(l)];
      if (l == 0) continue;
      for (const auto& [i, g] : gamma[static_cast<std::size_t>(l)]) {
        if (i == 0) continue;
        tab.A(row, index_map(l, i, R) - 1) = jpow * g * inv_fact[static_cast<std::size_t>(l)];
      }
    }
    tab.A(row, 0) = center_sum;
  }

  for (int l = 0; l < R; ++l) {
    tab.b[0] += center(l) * inv_fact[static_cast<std::size_t>(l)];
    if (l == 0) continue;
    for (const auto& [i, g] : gamma[static_cast<std::size_t>(l)])
      if (i != 0) tab.b[index_map(l, i, R) - 1] = g * inv_fact[static_cast<std::size_t>(l)];
  }

  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t col = 0; col < row; ++col) tab.c[row] += tab.A(row, col);
  return tab;
}

/// Explicit Runge-Kutta evaluation of a strictly lower triangular tableau,
/// with coefficients converted to T once.
template <class T>
class ExplicitRungeKutta {
 public:
  explicit ExplicitRungeKutta(const ButcherTableau& tab) : n_(tab.stages), a_(n_, n_), b_(n_) {
    for (std::size_t s = 0; s < n_; ++s) {
      for (std::size_t t = 0; t < n_; ++t) {
        if (t >= s && tab.A(s, t) != 0)
          throw DomainError("explicit_rk_step: A must be strictly lower triangular");
        a_(s, t) = rational_cast<T>(tab.A(s, t));
      }
      b_[s] = rational_cast<T>(tab.b[s]);
    }
  }

  std::size_t stages() const noexcept { return n_; }

  State<T> step(const OdeProblem<T>& problem, const State<T>& v, const T& h) const {
    if (v.size() != problem.dim) throw ShapeError("state dimension does not match problem");
    std::vector<State<T>> g;
    g.reserve(n_);
    for (std::size_t s = 0; s < n_; ++s) {
      State<T> arg = v;
      for (std::size_t t = 0; t < s; ++t) {
        if (a_(s, t) == 0) continue;
        const T coef = h * a_(s, t);
        for (std::size_t c = 0; c < arg.size(); ++c) arg[c] += coef * g[t][c];
      }
      State<T> y = problem.rhs(arg);
      if (y.size() != problem.dim) throw ShapeError("rhs returned a vector of the wrong dimension");
      for (const auto& x : y)
        if (!is_finite(x))
          throw StepFailure("non-finite rhs value at stage " + std::to_string(s + 1), -1, 0, s + 1);
      g.push_back(std::move(y));
    }
    State<T> sum(v.size(), T(0));
    for (std::size_t s = 0; s < n_; ++s) {
      if (b_[s] == 0) continue;
      for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += b_[s] * g[s][c];
    }
    State<T> next = v;
    for (std::size_t c = 0; c < next.size(); ++c) next[c] += h * sum[c];
    return next;
  }

 private:
  std::size_t n_;
  Matrix<T> a_;
  std::vector<T> b_;
};

template <class T>
State<T> explicit_rk_step(const ButcherTableau& tab, const OdeProblem<T>& problem, const State<T>& v, const std::type_identity_t<T>& h) {
  return ExplicitRungeKutta<T>(tab).step(problem, v, h);
}

struct StructuralReport {
  int order = 0;
  std::size_t stages = 0;
  std::size_t nilpotency_index = 0;  ///< least k >= 1 with A^k = 0
  std::size_t rank = 0;              ///< rank of A
  std::size_t augmented_rank = 0;    ///< rank of A with b appended as an extra row
  bool is_block_strictly_lower = false;
  bool stage_count_ok = false;
  bool abscissae_are_offsets = false;  ///< c at stage (k, j) equals j
  bool abscissae_are_row_sums = false;
  bool columns_proportional = false;   ///< nonzero columns within a level are multiples of one another
  Rational weights_sum;
  Rational weighted_abscissae_sum;     ///< sum_s b_s c_s
  bool degenerate = false;             ///< R = 1: A is the 1x1 zero matrix
};

namespace detail {

inline bool proportional_columns(const Matrix<Rational>& a, std::size_t x, std::size_t y) {
  // Columns x and y are parallel iff every 2x2 minor vanishes.
  std::size_t ref = a.rows();
  for (std::size_t r = 0; r < a.rows(); ++r)
    if (a(r, x) != 0) {
      ref = r;
      break;
    }
  if (ref == a.rows()) return true;
  for (std::size_t r = 0; r < a.rows(); ++r)
    if (a(r, x) * a(ref, y) != a(r, y) * a(ref, x)) return false;
  return true;
}

}  // namespace detail

inline StructuralReport structural_report(const ButcherTableau& tab) {
  StructuralReport rep;
  rep.order = tab.order;
  rep.stages = tab.stages;
  rep.degenerate = tab.order == 1;
  const std::size_t n = tab.stages;

  rep.stage_count_ok = n == stage_count(tab.order) && n == tab.index.size();

  rep.is_block_strictly_lower = true;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (tab.index[t].l >= tab.index[s].l && tab.A(s, t) != 0) rep.is_block_strictly_lower = false;

  Matrix<Rational> power = tab.A;
  rep.nilpotency_index = 1;
  while (!power.is_zero() && rep.nilpotency_index <= n) {
    power = power * tab.A;
    ++rep.nilpotency_index;
  }

  rep.rank = rank(tab.A);
  Matrix<Rational> aug(n + 1, n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) aug(s, t) = tab.A(s, t);
  for (std::size_t t = 0; t < n; ++t) aug(n, t) = tab.b[t];
  rep.augmented_rank = rank(std::move(aug));

  rep.abscissae_are_offsets = true;
  rep.abscissae_are_row_sums = true;
  for (std::size_t s = 0; s < n; ++s) {
    Rational row = 0;
    for (std::size_t t = 0; t < n; ++t) row += tab.A(s, t);
    if (row != tab.c[s]) rep.abscissae_are_row_sums = false;
    if (tab.c[s] != tab.index[s].i) rep.abscissae_are_offsets = false;
  }

  rep.columns_proportional = true;
  for (std::size_t x = 1; x < n; ++x)
    for (std::size_t y = x + 1; y < n && tab.index[y].l == tab.index[x].l; ++y)
      if (!detail::proportional_columns(tab.A, x, y)) rep.columns_proportional = false;

  rep.weights_sum = 0;
  rep.weighted_abscissae_sum = 0;
  for (std::size_t s = 0; s < n; ++s) {
    rep.weights_sum += tab.b[s];
    rep.weighted_abscissae_sum += tab.b[s] * tab.c[s];
  }
  return rep;
}

}  // namespace atm
