#pragma once

// Absolute stability of the order-R method: on u' = lambda u a step
// multiplies by Q(h lambda), Q(z) = sum_{k<=R} z^k / k!, so the region is
// { z : |Q(z)| <= 1 }.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <ostream>
#include <vector>

#include "atm/errors.hpp"
#include "atm/format.hpp"
#include "atm/integrator.hpp"
#include "atm/matrix.hpp"

namespace atm {

using Complex = std::complex<double>;

inline Complex q_eval(Complex z, int R) {
  if (R < 1) throw DomainError("q_eval: order must be >= 1");
  Complex acc = 1.0;
  for (int k = R; k >= 1; --k) acc = 1.0 + acc * z / static_cast<double>(k);
  return acc;
}

inline bool in_region(Complex z, int R) { return std::abs(q_eval(z, R)) <= 1.0; }

/// Left end x* < 0 of the largest interval [x*, 0] inside the region,
/// located by a 1e-3 scan followed by bisection.
inline double real_stability_interval(int R) {
  if (R < 1) throw DomainError("real_stability_interval: order must be >= 1");
  constexpr double scan_step = 1e-3;
  constexpr double scan_limit = 1e3;
  double inside = 0.0;
  double outside = 0.0;
  for (long k = 1;; ++k) {
    const double x = -static_cast<double>(k) * scan_step;
    if (!in_region(x, R)) {
      outside = x;
      break;
    }
    inside = x;
    if (-x > scan_limit) throw DomainError("real_stability_interval: no boundary found");
  }
  while (inside - outside > 1e-13) {
    const double mid = 0.5 * (inside + outside);
    (in_region(mid, R) ? inside : outside) = mid;
  }
  return inside;
}

struct Window {
  double re_min = -1, re_max = 1, im_min = -1, im_max = 1;
};

struct StabilityGrid {
  int order = 0;
  Window window;
  std::size_t nx = 0, ny = 0;
  std::vector<char> flags;        ///< nx*ny, index i*ny + j
  std::vector<Complex> boundary;  ///< |Q| = 1 crossings on grid edges

  bool inside(std::size_t i, std::size_t j) const { return flags[i * ny + j] != 0; }

  /// Grid coordinates are convex combinations of the window ends, so a
  /// window symmetric about the real axis yields exactly mirrored rows.
  double re(std::size_t i) const { return lerp(window.re_min, window.re_max, i, nx); }
  double im(std::size_t j) const { return lerp(window.im_min, window.im_max, j, ny); }
  Complex point(std::size_t i, std::size_t j) const { return {re(i), im(j)}; }

  std::size_t inside_count() const { return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1)); }

 private:
  static double lerp(double lo, double hi, std::size_t k, std::size_t n) {
    const double d = static_cast<double>(n - 1);
    return (lo * static_cast<double>(n - 1 - k) + hi * static_cast<double>(k)) / d;
  }
};

namespace detail {

// Bisects | |Q| - 1 | to 1e-10 along the segment a-b, where exactly one end is inside.
inline Complex refine_crossing(Complex a, Complex b, int R) {
  auto g = [R](Complex z) { return std::abs(q_eval(z, R)) - 1.0; };
  bool a_inside = g(a) <= 0;
  Complex best = std::abs(g(a)) < std::abs(g(b)) ? a : b;
  for (int it = 0; it < 200 && std::abs(g(best)) > 1e-10; ++it) {
    const Complex mid = 0.5 * (a + b);
    const double gm = g(mid);
    if ((gm <= 0) == a_inside) {
      a = mid;
    } else {
      b = mid;
    }
    best = std::abs(g(a)) < std::abs(g(b)) ? a : b;
  }
  return best;
}

}  // namespace detail

inline StabilityGrid region_scan(int R, const Window& window, std::size_t nx, std::size_t ny) {
  if (R < 1) throw DomainError("region_scan: order must be >= 1");
  if (nx < 2 || ny < 2) throw DomainError("region_scan: need at least 2 samples per axis");
  if (!(window.re_max > window.re_min) || !(window.im_max > window.im_min))
    throw DomainError("region_scan: degenerate window");
  StabilityGrid grid;
  grid.order = R;
  grid.window = window;
  grid.nx = nx;
  grid.ny = ny;
  grid.flags.resize(nx * ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) grid.flags[i * ny + j] = in_region(grid.point(i, j), R) ? 1 : 0;

  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      if (i + 1 < nx && grid.inside(i, j) != grid.inside(i + 1, j))
        grid.boundary.push_back(detail::refine_crossing(grid.point(i, j), grid.point(i + 1, j), R));
      if (j + 1 < ny && grid.inside(i, j) != grid.inside(i, j + 1))
        grid.boundary.push_back(detail::refine_crossing(grid.point(i, j), grid.point(i, j + 1), R));
    }
  return grid;
}

inline void write_raster_csv(std::ostream& os, const StabilityGrid& grid) {
  os << "re,im,inside\n";
  for (std::size_t i = 0; i < grid.nx; ++i)
    for (std::size_t j = 0; j < grid.ny; ++j)
      os << format_real(grid.re(i)) << ',' << format_real(grid.im(j)) << ',' << (grid.inside(i, j) ? 1 : 0) << '\n';
}

inline void write_boundary_csv(std::ostream& os, const StabilityGrid& grid) {
  os << "re,im\n";
  for (const auto& z : grid.boundary) os << format_real(z.real()) << ',' << format_real(z.imag()) << '\n';
}

/// max-norm distance between one approximate Taylor step on u' = A u and
/// Q(hA) v, relative to |v|_inf.
inline double verify_linear_equivalence(const Matrix<double>& a, const State<double>& v, double h, int R) {
  if (!a.square() || a.cols() != v.size()) throw ShapeError("verify_linear_equivalence: dimension mismatch");
  double vnorm = 0;
  for (double x : v) vnorm = std::max(vnorm, std::abs(x));
  if (vnorm == 0) throw DomainError("verify_linear_equivalence: v must be nonzero");
  const auto approx = step(linear_problem(a, v), v, h, R);
  const auto exact = exact_taylor_linear_step(a, v, h, R);
  double dev = 0;
  for (std::size_t c = 0; c < v.size(); ++c) dev = std::max(dev, std::abs(approx[c] - exact[c]));
  return dev / vnorm;
}

}  // namespace atm
