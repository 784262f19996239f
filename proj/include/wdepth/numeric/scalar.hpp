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

#ifndef WDEPTH_NUMERIC_SCALAR_HPP
#define WDEPTH_NUMERIC_SCALAR_HPP

#include <cmath>
#include <utility>

#include "wdepth/errors.hpp"

namespace wdepth::num {

/// Bisection root finder. Requires f(lo) and f(hi) to straddle zero (either
/// may be exactly zero). Shrinks the bracket until its width is below
/// `tol` + machine resolution at the current point, then returns the midpoint.
template <typename F>
double bisect_root(F&& f, double lo, double hi, double tol = 1e-14,
                   int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericError("bisect_root: endpoints do not bracket a root");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol || mid == lo || mid == hi) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section minimization on [lo, hi]; assumes the interval brackets a
/// local minimum. Returns (argmin, min). Adapted from the classic
/// section-search loop with ratio (sqrt(5)-1)/2.
template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi,
                                     double tol = 1e-12, int max_iter = 400) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

}  // namespace wdepth::num

#endif  // WDEPTH_NUMERIC_SCALAR_HPP
