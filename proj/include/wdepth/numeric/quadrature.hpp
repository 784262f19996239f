// Copyright 2026 The wdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WDEPTH_NUMERIC_QUADRATURE_HPP
#define WDEPTH_NUMERIC_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "wdepth/errors.hpp"

namespace wdepth::num {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
};

namespace detail {

template <typename F>
double adaptive_simpson(F& f, double a, double m, double b, double fa,
                        double fm, double fb, double whole, double tol,
                        int depth, int max_depth, QuadratureResult& out) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  out.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth >= max_depth) {
    if (std::abs(delta) > 15.0 * tol) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge on [" << a << ", " << b
          << "], local error " << std::abs(delta) / 15.0 << " vs tolerance "
          << tol << " at depth " << depth;
      throw NumericError(msg.str());
    }
    out.error_estimate += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-300) {
    out.error_estimate += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1,
                          max_depth, out) +
         adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol,
                          depth + 1, max_depth, out);
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b]. `breakpoints` seeds the
/// initial segmentation; integrand features (sharp peaks) must be covered by
/// a breakpoint near them or the first error estimate can miss them entirely.
/// Throws NumericError with interval diagnostics when the recursion depth
/// limit is hit before the tolerance is met.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol = 1e-9,
                           const std::vector<double>& breakpoints = {},
                           int max_depth = 48) {
  if (!(a < b)) throw DomainError("integrate: empty interval");
  std::vector<double> knots;
  knots.push_back(a);
  for (double x : breakpoints)
    if (x > a && x < b) knots.push_back(x);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  QuadratureResult out;
  const double seg_tol = abs_tol / static_cast<double>(knots.size() - 1);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i];
    const double hi = knots[i + 1];
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo);
    const double fmid = f(mid);
    const double fhi = f(hi);
    out.evaluations += 3;
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    out.value += detail::adaptive_simpson(f, lo, mid, hi, flo, fmid, fhi,
                                          whole, seg_tol, 0, max_depth, out);
  }
  return out;
}

}  // namespace wdepth::num

#endif  // WDEPTH_NUMERIC_QUADRATURE_HPP
