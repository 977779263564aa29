#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "kinkfit/error.hpp"

namespace kinkfit {

inline constexpr int kMaxSimpsonDepth = 60;

namespace detail {

template <typename F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  if (depth > kMaxSimpsonDepth) {
    throw Error(ErrorCode::MaxDepthExceeded,
                "adaptive Simpson exceeded " +
                    std::to_string(kMaxSimpsonDepth) + " levels");
  }
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] (b < a integrates backward)
/// to absolute tolerance tol, with interval halving and the 1/15 Richardson
/// correction. Throws Error(MaxDepthExceeded) past kMaxSimpsonDepth levels.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "quadrature tolerance must be > 0");
  }
  if (a == b) {
    return 0.0;
  }
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 1);
}

/// adaptive_simpson over `panels` equal sub-intervals of [a, b], each with
/// its length-proportional share of tol. Choose panels no wider than the
/// narrowest feature of f.
template <typename F>
double adaptive_simpson_panels(F&& f, double a, double b, double tol,
                               std::size_t panels) {
  if (panels <= 1) return adaptive_simpson(f, a, b, tol);
  const double share = tol / static_cast<double>(panels);
  double sum = 0.0;
  double lo = a;
  for (std::size_t i = 1; i <= panels; ++i) {
    const double hi = i == panels ? b
                                  : a + (b - a) * static_cast<double>(i) /
                                            static_cast<double>(panels);
    sum += adaptive_simpson(f, lo, hi, share);
    lo = hi;
  }
  return sum;
}

}  // namespace kinkfit
