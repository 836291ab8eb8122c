#pragma once

// Fixed-step convergence studies against a closed-form solution.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "atm/errors.hpp"
#include "atm/format.hpp"
#include "atm/integrator.hpp"

namespace atm {

/// Number of steps of size h that land on t_end; rejects non-multiples.
inline std::size_t steps_to(double t_end, double h) {
  if (!(h > 0) || !std::isfinite(h)) throw DomainError("step size h must be positive");
  if (!(t_end >= 0) || !std::isfinite(t_end)) throw DomainError("t_end must be non-negative");
  const double ratio = t_end / h;
  if (ratio > 1e9) throw DomainError("t_end / h exceeds 1e9 steps");
  const double n = std::round(ratio);
  if (std::abs(n * h - t_end) > 1e-9 * std::max(1.0, t_end))
    throw DomainError("t_end must be an integer multiple of h");
  return static_cast<std::size_t>(n);
}

inline double max_norm_distance(const State<double>& a, const State<double>& b) {
  if (a.size() != b.size()) throw ShapeError("max_norm_distance: dimension mismatch");
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

struct ConvergenceRow {
  double h = 0;
  std::size_t n_steps = 0;
  double error = 0;
  std::optional<double> observed_order;  ///< log2(E(2h) / E(h)); absent on the first row
  std::size_t rhs_evals = 0;
};

struct ConvergenceReport {
  std::string problem;
  int order = 0;
  double t_end = 0;
  std::vector<ConvergenceRow> rows;
};

/// Integrates at h0, h0/2, ..., h0/2^(levels-1) and records the max-norm
/// error at t_end.
inline ConvergenceReport run_convergence(const std::string& name, const OdeProblem<double>& problem, int order,
                                         double h0, int levels, double t_end) {
  if (levels < 2) throw DomainError("convergence study needs at least 2 levels");
  if (!problem.has_exact()) throw DomainError("problem '" + name + "' has no exact solution");
  ConvergenceReport rep{name, order, t_end, {}};
  const ApproximateTaylor<double> stepper(order);
  const State<double> truth = problem.exact(t_end);
  double h = h0;
  for (int level = 0; level < levels; ++level, h *= 0.5) {
    std::atomic<std::size_t> evals{0};
    const auto counted = with_eval_counter(problem, evals);
    ConvergenceRow row;
    row.h = h;
    row.n_steps = steps_to(t_end, h);
    const auto traj = integrate_with(stepper, counted, h, row.n_steps);
    row.error = max_norm_distance(traj.back().u, truth);
    row.rhs_evals = evals.load();
    if (!rep.rows.empty()) row.observed_order = std::log2(rep.rows.back().error / row.error);
    rep.rows.push_back(row);
  }
  return rep;
}

inline void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep) {
  os << "h,n_steps,error,observed_order,rhs_evals\n";
  for (const auto& r : rep.rows) {
    os << format_real(r.h) << ',' << r.n_steps << ',' << format_real(r.error) << ','
       << (r.observed_order ? format_real(*r.observed_order) : std::string()) << ',' << r.rhs_evals << '\n';
  }
}

}  // namespace atm
