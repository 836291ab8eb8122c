#pragma once

// Approximate Taylor stepper.
//
// The l-th time derivative of the solution is estimated by applying a
// centered difference operator (derivative order l-1, accuracy order
// 2*ceil((R-l+1)/2)) to samples of f along the degree-(l-1) Taylor polynomial
// built from the lower derivatives. No derivative of f is ever formed.

#include <atomic>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "atm/errors.hpp"
#include "atm/matrix.hpp"
#include "atm/rational.hpp"
#include "atm/stencil.hpp"

namespace atm {

template <class T>
using State = Vector<T>;

/// Autonomous initial value problem u' = f(u), u(0) = u0.
template <class T>
struct OdeProblem {
  using Rhs = std::function<State<T>(const State<T>&)>;
  using Exact = std::function<State<T>(const T&)>;

  std::size_t dim = 0;
  Rhs rhs;
  State<T> u0;
  Exact exact;  ///< closed-form solution; empty when unknown

  bool has_exact() const { return static_cast<bool>(exact); }
};

template <class T>
struct DerivativeStack {
  int order = 0;
  T h{};
  std::vector<State<T>> derivs;      ///< v^(0..R)
  std::vector<State<T>> increments;  ///< w^(1..R), stored at index l-1

  const State<T>& w(int l) const { return increments.at(static_cast<std::size_t>(l - 1)); }
};

/// sum_{l=0}^{k} derivs[l] rho^l / l!, Horner in rho.
template <class T>
State<T> taylor_poly_eval(const std::vector<State<T>>& derivs, int k, const std::type_identity_t<T>& rho) {
  if (k < 0 || static_cast<std::size_t>(k) >= derivs.size())
    throw DomainError("taylor_poly_eval: degree " + std::to_string(k) + " out of range");
  State<T> acc = derivs[static_cast<std::size_t>(k)];
  for (int l = k - 1; l >= 0; --l) {
    const T scale = rho / T(l + 1);
    const auto& d = derivs[static_cast<std::size_t>(l)];
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] = d[c] + acc[c] * scale;
  }
  return acc;
}

template <class T>
State<T> taylor_poly_eval(const DerivativeStack<T>& stack, int k, const std::type_identity_t<T>& rho) {
  return taylor_poly_eval(stack.derivs, k, rho);
}

/// R-th order approximate Taylor method. Holds the per-level stencil weights
/// converted to T; otherwise stateless and safe to share between threads.
template <class T>
class ApproximateTaylor {
 public:
  explicit ApproximateTaylor(int order) : order_(order) {
    if (order < 1) throw DomainError("approximate Taylor order must be >= 1");
    levels_.reserve(static_cast<std::size_t>(order));
    levels_.push_back({});  // level 0: v^(1) = f(v), no stencil
    for (int k = 1; k < order; ++k) {
      const auto st = derive_stencil(k, (order - k + 1) / 2);
      levels_.push_back({st.s(), st.weights_as<T>()});
    }
  }

  int order() const noexcept { return order_; }

  /// Half-width m_{k,R} of the level-k stencil.
  int halfwidth(int k) const { return levels_.at(static_cast<std::size_t>(k)).halfwidth; }

  DerivativeStack<T> derivatives(const OdeProblem<T>& problem, const State<T>& v, const T& h) const {
    if (!(h > 0)) throw DomainError("step size h must be positive");
    if (v.size() != problem.dim) throw ShapeError("state dimension does not match problem");

    DerivativeStack<T> stack;
    stack.order = order_;
    stack.h = h;
    stack.derivs.reserve(static_cast<std::size_t>(order_) + 1);
    stack.derivs.push_back(v);
    // f(T^k(0)) = f(v) for every k; evaluated once and reused as the center sample.
    const State<T> f_center = eval(problem, v, 0, 0);
    stack.derivs.push_back(f_center);

    std::vector<State<T>> samples;
    for (int k = 1; k < order_; ++k) {
      const auto& level = levels_[static_cast<std::size_t>(k)];
      samples.clear();
      for (int i = -level.halfwidth; i <= level.halfwidth; ++i) {
        if (i == 0) {
          samples.push_back(f_center);
        } else {
          samples.push_back(eval(problem, taylor_poly_eval(stack.derivs, k, T(i) * h), k, i));
        }
      }
      stack.derivs.push_back(apply_weights<T>(level.weights, k, samples, h));
    }

    stack.increments.reserve(static_cast<std::size_t>(order_));
    T scale(1);  // h^{l-1} / l!
    for (int l = 1; l <= order_; ++l) {
      if (l > 1) scale = scale * h / T(l);
      State<T> w = stack.derivs[static_cast<std::size_t>(l)];
      for (auto& x : w) x *= scale;
      stack.increments.push_back(std::move(w));
    }
    return stack;
  }

  /// v + h * sum_{l=1}^{R} w^(l), summed with l ascending.
  State<T> step(const OdeProblem<T>& problem, const State<T>& v, const T& h) const {
    const auto stack = derivatives(problem, v, h);
    State<T> sum = stack.increments.front();
    for (std::size_t l = 1; l < stack.increments.size(); ++l)
      for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += stack.increments[l][c];
    State<T> next = v;
    for (std::size_t c = 0; c < next.size(); ++c) next[c] += h * sum[c];
    return next;
  }

 private:
  struct Level {
    int halfwidth = 0;
    std::vector<T> weights;
  };

  static State<T> eval(const OdeProblem<T>& problem, const State<T>& x, int level, int offset) {
    State<T> y = problem.rhs(x);
    if (y.size() != problem.dim) throw ShapeError("rhs returned a vector of the wrong dimension");
    for (const auto& c : y)
      if (!is_finite(c))
        throw StepFailure("non-finite rhs value at level " + std::to_string(level) + ", offset " +
                              std::to_string(offset),
                          level, offset);
    return y;
  }

  int order_;
  std::vector<Level> levels_;
};

template <class T>
DerivativeStack<T> derivative_recursion(const OdeProblem<T>& problem, const State<T>& v, const std::type_identity_t<T>& h, int order) {
  return ApproximateTaylor<T>(order).derivatives(problem, v, h);
}

template <class T>
State<T> step(const OdeProblem<T>& problem, const State<T>& v, const std::type_identity_t<T>& h, int order) {
  return ApproximateTaylor<T>(order).step(problem, v, h);
}

template <class T>
struct TrajectoryPoint {
  T t;
  State<T> u;
};

template <class T>
using Trajectory = std::vector<TrajectoryPoint<T>>;

/// Step failure inside integrate(); carries the trajectory up to the last
/// accepted step and the index of the step that failed.
template <class T>
class IntegrationFailure : public StepFailure {
 public:
  IntegrationFailure(const StepFailure& cause, std::size_t step_index, Trajectory<T> partial)
      : StepFailure("step " + std::to_string(step_index) + ": " + cause.what(), cause.level(), cause.offset(),
                    cause.stage()),
        step_index_(step_index),
        partial_(std::move(partial)) {}

  std::size_t step_index() const noexcept { return step_index_; }
  const Trajectory<T>& partial() const noexcept { return partial_; }

 private:
  std::size_t step_index_;
  Trajectory<T> partial_;
};

/// Fixed-step integration from t = 0; point n sits at t = n*h.
template <class T, class Stepper>
Trajectory<T> integrate_with(const Stepper& stepper, const OdeProblem<T>& problem, const std::type_identity_t<T>& h, std::size_t n_steps) {
  Trajectory<T> traj;
  traj.reserve(n_steps + 1);
  traj.push_back({T(0), problem.u0});
  for (std::size_t n = 0; n < n_steps; ++n) {
    try {
      State<T> next = stepper.step(problem, traj.back().u, h);
      traj.push_back({T(n + 1) * h, std::move(next)});
    } catch (const StepFailure& e) {
      throw IntegrationFailure<T>(e, n, std::move(traj));
    }
  }
  return traj;
}

template <class T>
Trajectory<T> integrate(const OdeProblem<T>& problem, const std::type_identity_t<T>& h, std::size_t n_steps, int order) {
  return integrate_with(ApproximateTaylor<T>(order), problem, h, n_steps);
}

/// Q(hA) v with Q the degree-R truncated exponential, accumulated from
/// repeated matrix-vector products.
template <class T>
State<T> exact_taylor_linear_step(const Matrix<T>& a, const State<T>& v, const std::type_identity_t<T>& h, int order) {
  if (!a.square()) throw ShapeError("exact_taylor_linear_step: matrix must be square");
  if (a.cols() != v.size()) throw ShapeError("exact_taylor_linear_step: dimension mismatch");
  State<T> term = v;
  State<T> acc = v;
  for (int k = 1; k <= order; ++k) {
    term = a * term;
    const T scale = h / T(k);
    for (std::size_t c = 0; c < term.size(); ++c) {
      term[c] *= scale;
      acc[c] += term[c];
    }
  }
  return acc;
}

/// f(u) = A u.
template <class T>
OdeProblem<T> linear_problem(Matrix<T> a, State<T> u0) {
  if (!a.square() || a.cols() != u0.size()) throw ShapeError("linear_problem: dimension mismatch");
  OdeProblem<T> p;
  p.dim = u0.size();
  p.u0 = std::move(u0);
  p.rhs = [a = std::move(a)](const State<T>& u) { return a * u; };
  return p;
}

/// Rewrites u' = g(t, u) as an autonomous system in (u, t) with t' = 1.
/// The optional exact solution is lifted to (exact(t), t).
template <class T>
OdeProblem<T> autonomize(std::function<State<T>(const T&, const State<T>&)> rhs_t, std::size_t m, State<T> u0,
                         const std::type_identity_t<T>& t0, std::function<State<T>(const T&)> exact_t = {}) {
  if (u0.size() != m) throw ShapeError("autonomize: initial state dimension mismatch");
  OdeProblem<T> p;
  p.dim = m + 1;
  p.u0 = std::move(u0);
  p.u0.push_back(t0);
  p.rhs = [g = std::move(rhs_t), m](const State<T>& y) {
    const State<T> u(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m));
    State<T> out = g(y[m], u);
    if (out.size() != m) throw ShapeError("autonomize: rhs returned a vector of the wrong dimension");
    out.push_back(T(1));
    return out;
  };
  if (exact_t) {
    // The autonomous time origin is 0; the physical time is t0 + t.
    p.exact = [e = std::move(exact_t), t0](const T& t) {
      const T tt = t0 + t;
      State<T> out = e(tt);
      out.push_back(tt);
      return out;
    };
  }
  return p;
}

/// Wraps the rhs so every evaluation bumps `counter`.
template <class T>
OdeProblem<T> with_eval_counter(OdeProblem<T> problem, std::atomic<std::size_t>& counter) {
  problem.rhs = [f = std::move(problem.rhs), &counter](const State<T>& u) {
    counter.fetch_add(1, std::memory_order_relaxed);
    return f(u);
  };
  return problem;
}

}  // namespace atm
