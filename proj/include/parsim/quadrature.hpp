#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "parsim/errors.hpp"

namespace parsim {

namespace detail {

template <typename F>
double simpson_panel(F& f, double a, double fa, double b, double fb, double* fm) {
  const double mid = 0.5 * (a + b);
  *fm = f(mid);
  return (b - a) / 6.0 * (fa + 4.0 * *fm + fb);
}

template <typename F>
double adaptive_simpson_step(F& f, double a, double fa, double b, double fb, double fm,
                             double whole, double tol, int depth, int min_depth) {
  const double mid = 0.5 * (a + b);
  double flm = 0.0;
  double frm = 0.0;
  const double left = simpson_panel(f, a, fa, mid, fm, &flm);
  const double right = simpson_panel(f, mid, fm, b, fb, &frm);
  const double delta = left + right - whole;
  if (depth >= min_depth && (std::abs(delta) <= 15.0 * tol || depth >= 60)) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_step(f, a, fa, mid, fm, flm, left, 0.5 * tol, depth + 1, min_depth) +
         adaptive_simpson_step(f, mid, fm, b, fb, frm, right, 0.5 * tol, depth + 1, min_depth);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b]. tol bounds the absolute
// Richardson error estimate; min_depth forces an initial uniform split so
// that peaks away from the midpoint cannot slip between the first nodes.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int min_depth = 8) {
  if (!(a <= b)) {
    throw DimensionMismatchError("adaptive_simpson needs a <= b");
  }
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  double fm = 0.0;
  const double whole = detail::simpson_panel(f, a, fa, b, fb, &fm);
  return detail::adaptive_simpson_step(f, a, fa, b, fb, fm, whole, tol, 0, min_depth);
}

// Integrates exp(log_f) over [a, b] and returns the log of the integral.
// A uniform scan locates the peak so the integrand can be shifted into
// representable range; the same scan yields a crude trapezoid estimate that
// converts rel_tol into the absolute tolerance adaptive_simpson expects.
template <typename F>
double log_integrate_exp(F&& log_f, double a, double b, double rel_tol, int scan_points = 512,
                         int min_depth = 8) {
  if (!(a < b)) {
    throw DimensionMismatchError("log_integrate_exp needs a < b");
  }
  std::vector<double> scan(static_cast<std::size_t>(scan_points) + 1);
  const double step = (b - a) / static_cast<double>(scan_points);
  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= scan_points; ++i) {
    scan[static_cast<std::size_t>(i)] = log_f(a + step * static_cast<double>(i));
    shift = std::max(shift, scan[static_cast<std::size_t>(i)]);
  }
  if (!std::isfinite(shift)) {
    return -std::numeric_limits<double>::infinity();
  }

  const auto shifted = [&](double log_value) {
    const double v = log_value - shift;
    return v < -745.0 ? 0.0 : std::exp(v);
  };
  double rough = 0.0;
  for (int i = 0; i < scan_points; ++i) {
    rough += 0.5 * step *
             (shifted(scan[static_cast<std::size_t>(i)]) +
              shifted(scan[static_cast<std::size_t>(i) + 1]));
  }
  const double tol = rel_tol * std::max(rough, 1e-12);

  const double integral =
      adaptive_simpson([&](double x) { return shifted(log_f(x)); }, a, b, tol, min_depth);
  return shift + std::log(integral);
}

}  // namespace parsim
