#pragma once

// Built-in test problems, each with a closed-form solution.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atm/errors.hpp"
#include "atm/integrator.hpp"
#include "atm/matrix.hpp"

namespace atm {

struct ProblemSpec {
  std::string name;
  std::optional<State<double>> u0;        ///< overrides the default initial state
  std::map<std::string, double> params;  ///< overrides named parameters
};

struct NamedProblem {
  std::string name;
  OdeProblem<double> problem;
  std::optional<Matrix<double>> matrix;  ///< set when f(u) = A u
};

inline const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"decay", "riccati", "oscillator", "linear-system",
                                              "nonautonomous-demo"};
  return names;
}

namespace detail {

class ParamReader {
 public:
  ParamReader(const ProblemSpec& spec, std::map<std::string, double> defaults) : values_(std::move(defaults)) {
    for (const auto& [key, value] : spec.params) {
      auto it = values_.find(key);
      if (it == values_.end()) throw DomainError("problem '" + spec.name + "' has no parameter '" + key + "'");
      it->second = value;
    }
  }
  double operator[](const std::string& key) const { return values_.at(key); }

 private:
  std::map<std::string, double> values_;
};

inline State<double> initial_state(const ProblemSpec& spec, State<double> fallback) {
  if (!spec.u0) return fallback;
  if (spec.u0->size() != fallback.size())
    throw ShapeError("problem '" + spec.name + "' expects an initial state of dimension " +
                     std::to_string(fallback.size()));
  return *spec.u0;
}

// (x, y) rotated clockwise by theta: the flow of u' = (u2, -u1) for time theta.
inline State<double> rotate(const State<double>& u, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * u[0] + s * u[1], -s * u[0] + c * u[1]};
}

}  // namespace detail

/// decay:              u' = -rate u
/// riccati:            u' = -u^2,                 u = u0 / (1 + u0 t)
/// oscillator:         u' = omega (u2, -u1)
/// linear-system:      u' = [[a, b], [-b, a]] u
/// nonautonomous-demo: u' = cos(t) u,             u = u0 exp(sin t), autonomized to (u, t)
inline NamedProblem make_problem(const ProblemSpec& spec) {
  NamedProblem out;
  out.name = spec.name;
  if (spec.name == "decay") {
    const detail::ParamReader par(spec, {{"rate", 1.0}});
    const double rate = par["rate"];
    const auto u0 = detail::initial_state(spec, {1.0});
    Matrix<double> a{{-rate}};
    out.problem = linear_problem(a, u0);
    out.problem.exact = [u0, rate](double t) { return State<double>{u0[0] * std::exp(-rate * t)}; };
    out.matrix = a;
  } else if (spec.name == "riccati") {
    const detail::ParamReader par(spec, {});
    const auto u0 = detail::initial_state(spec, {1.0});
    out.problem.dim = 1;
    out.problem.u0 = u0;
    out.problem.rhs = [](const State<double>& u) { return State<double>{-u[0] * u[0]}; };
    out.problem.exact = [u0](double t) { return State<double>{u0[0] / (1.0 + u0[0] * t)}; };
  } else if (spec.name == "oscillator") {
    const detail::ParamReader par(spec, {{"omega", 1.0}});
    const double omega = par["omega"];
    const auto u0 = detail::initial_state(spec, {1.0, 0.0});
    Matrix<double> a{{0.0, omega}, {-omega, 0.0}};
    out.problem = linear_problem(a, u0);
    out.problem.exact = [u0, omega](double t) { return detail::rotate(u0, omega * t); };
    out.matrix = a;
  } else if (spec.name == "linear-system") {
    const detail::ParamReader par(spec, {{"a", -0.5}, {"b", 2.0}});
    const double a = par["a"], b = par["b"];
    const auto u0 = detail::initial_state(spec, {1.0, 0.5});
    Matrix<double> m{{a, b}, {-b, a}};
    out.problem = linear_problem(m, u0);
    out.problem.exact = [u0, a, b](double t) {
      auto r = detail::rotate(u0, b * t);
      const double g = std::exp(a * t);
      return State<double>{g * r[0], g * r[1]};
    };
    out.matrix = m;
  } else if (spec.name == "nonautonomous-demo") {
    const detail::ParamReader par(spec, {});
    const auto u0 = detail::initial_state(spec, {1.0});
    out.problem = autonomize<double>([](double t, const State<double>& u) { return State<double>{std::cos(t) * u[0]}; },
                                     1, u0, 0.0,
                                     [u0](double t) { return State<double>{u0[0] * std::exp(std::sin(t))}; });
  } else {
    throw DomainError("unknown problem '" + spec.name + "'");
  }
  return out;
}

}  // namespace atm
