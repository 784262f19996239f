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

#ifndef WDEPTH_WITNESS_HPP
#define WDEPTH_WITNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wdepth/errors.hpp"
#include "wdepth/numeric/scalar.hpp"

// Group-count separability witness for a heralded single-excitation state.
//
// An ensemble of N atoms split into M independent groups, each group truncated
// to at most two collective excitations, projects onto the global one- and
// two-excitation Dicke states with probabilities p1 and p2. For fixed p1 the
// product structure forces p2 above a bound b(p1, M); measuring p2 below that
// bound excludes M-group separability and certifies that at least N/M atoms
// share one genuinely entangled group.

namespace wdepth::witness {

inline constexpr double kNormTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Ansatz types

/// All groups identical: amplitudes (a, b, c) for 0, 1 and 2 collective
/// excitations, with a^2+b^2+c^2 = 1 and c = -sqrt(1-a^2-b^2) <= 0.
struct SymmetricAnsatz {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  std::int64_t m = 1;

  void validate() const {
    if (!(a > 0.0) || a > 1.0)
      throw ValidationError("SymmetricAnsatz: a must be in (0,1]");
    if (b < 0.0) throw ValidationError("SymmetricAnsatz: b must be >= 0");
    if (c > 0.0) throw ValidationError("SymmetricAnsatz: c must be <= 0");
    if (m < 1) throw ValidationError("SymmetricAnsatz: m must be >= 1");
    const double norm = a * a + b * b + c * c;
    if (std::abs(norm - 1.0) > kNormTolerance)
      throw ValidationError("SymmetricAnsatz: |a|^2+|b|^2+|c|^2 != 1");
  }
};

/// Builds a normalized symmetric ansatz from (a, b), deriving c.
inline SymmetricAnsatz make_symmetric_ansatz(double a, double b,
                                             std::int64_t m) {
  const double rem = 1.0 - a * a - b * b;
  if (rem < -kNormTolerance)
    throw ValidationError("make_symmetric_ansatz: a^2 + b^2 > 1");
  SymmetricAnsatz an{a, b, -std::sqrt(std::max(rem, 0.0)), m};
  an.validate();
  return an;
}

/// Per-group amplitudes; groups need not be identical.
struct GroupAmplitudes {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
};

struct GeneralAnsatz {
  std::vector<GroupAmplitudes> groups;
  double n_atoms = 0.0;

  void validate() const {
    if (groups.empty()) throw ValidationError("GeneralAnsatz: no groups");
    for (const auto& g : groups) {
      if (!(g.a > 0.0))
        throw DomainError("GeneralAnsatz: group amplitude a must be > 0");
      const double norm = g.a * g.a + g.b * g.b + g.c * g.c;
      if (std::abs(norm - 1.0) > kNormTolerance)
        throw ValidationError("GeneralAnsatz: group norm != 1");
    }
  }
};

// ---------------------------------------------------------------------------
// Measured quantities

/// Measured or derived (p1, p2) with one-sigma uncertainties.
struct ProjectionPair {
  double p1 = 0.0;
  double p2 = 0.0;
  double p1_err = 0.0;
  double p2_err = 0.0;

  void validate() const {
    if (p1 < 0.0 || p1 > 1.0)
      throw ValidationError("ProjectionPair: p1 outside [0,1]");
    if (p2 < 0.0 || p2 > 1.0)
      throw ValidationError("ProjectionPair: p2 outside [0,1]");
    if (p1_err < 0.0 || p2_err < 0.0)
      throw ValidationError("ProjectionPair: negative uncertainty");
  }
};

// ---------------------------------------------------------------------------
// Projection probabilities

/// p1 for identical groups: M a^(2M-2) b^2.
inline double p1_symmetric(const SymmetricAnsatz& an) {
  an.validate();
  const double m = static_cast<double>(an.m);
  return m * std::pow(an.a, 2.0 * m - 2.0) * an.b * an.b;
}

/// p2 for identical groups: a^(2M) ((M-1) b^2 / (sqrt(2) a^2) + c/a)^2.
inline double p2_symmetric(const SymmetricAnsatz& an) {
  an.validate();
  const double m = static_cast<double>(an.m);
  const double bracket =
      (m - 1.0) * an.b * an.b / (std::sqrt(2.0) * an.a * an.a) + an.c / an.a;
  return std::pow(an.a, 2.0 * m) * bracket * bracket;
}

/// p1 for arbitrary groups: (prod a_i^2 / M) (sum b_i/a_i)^2.
inline double p1_general(const GeneralAnsatz& an) {
  an.validate();
  const double m = static_cast<double>(an.groups.size());
  double prod = 1.0;
  double sum = 0.0;
  for (const auto& g : an.groups) {
    prod *= g.a * g.a;
    sum += g.b / g.a;
  }
  return prod / m * sum * sum;
}

/// p2 for arbitrary groups, including the finite-size factors (1 - 1/N) and
/// sqrt(1 - 1/D) with D = N/M.
inline double p2_general(const GeneralAnsatz& an) {
  an.validate();
  const double m = static_cast<double>(an.groups.size());
  if (!(an.n_atoms >= m))
    throw DomainError("p2_general: n_atoms must be >= group count");
  double prod = 1.0;
  double sum_x = 0.0;    // sum of b_i/a_i
  double sum_x2 = 0.0;   // sum of (b_i/a_i)^2
  double sum_c = 0.0;    // sum of c_i/a_i
  for (const auto& g : an.groups) {
    prod *= g.a * g.a;
    const double x = g.b / g.a;
    sum_x += x;
    sum_x2 += x * x;
    sum_c += g.c / g.a;
  }
  const double cross = 0.5 * (sum_x * sum_x - sum_x2);  // sum_{i<j} x_i x_j
  const double depth = an.n_atoms / m;
  const double bracket =
      std::sqrt(2.0) * cross + std::sqrt(1.0 - 1.0 / depth) * sum_c;
  return prod / (m * m * (1.0 - 1.0 / an.n_atoms)) * bracket * bracket;
}

// ---------------------------------------------------------------------------
// g2 <-> p2 conversions (heralded autocorrelation g2 = 2 p2 / p1^2)

inline double g2_to_p2(double g2, double p1) {
  if (g2 < 0.0) throw DomainError("g2_to_p2: g2 must be >= 0");
  if (!(p1 > 0.0) || p1 > 1.0)
    throw DomainError("g2_to_p2: p1 must be in (0,1]");
  return 0.5 * g2 * p1 * p1;
}

inline double p2_to_g2(double p2, double p1) {
  if (p2 < 0.0) throw DomainError("p2_to_g2: p2 must be >= 0");
  if (!(p1 > 0.0) || p1 > 1.0)
    throw DomainError("p2_to_g2: p1 must be in (0,1]");
  return 2.0 * p2 / (p1 * p1);
}

// ---------------------------------------------------------------------------
// Separability bound

/// Largest p1 an M-group product state can reach: ((M-1)/M)^(M-1).
/// Decreasing in M with limit 1/e; p1 above it makes the bound infeasible.
inline double max_symmetric_p1(std::int64_t m) {
  if (m < 1) throw DomainError("max_symmetric_p1: m must be >= 1");
  if (m == 1) return 1.0;
  const double md = static_cast<double>(m);
  return std::exp((md - 1.0) * std::log1p(-1.0 / md));
}

/// Result of the bound minimization. `infeasible` marks (p1, M) pairs no
/// M-group product state can reach at all; that outcome is distinct from a
/// numeric bound value.
struct BoundResult {
  bool feasible = true;
  double p2_bound = 0.0;
  double a_star = 0.0;

  static BoundResult infeasible_result() { return {false, 0.0, 0.0}; }
};

namespace detail {

// The bound minimization runs in s = -2M ln(a), i.e. a^(2M) = e^-s. Uniform
// s-grids coincide with log-spaced a-grids, and quantities like 1 - a^2 =
// -expm1(-s/M) stay well conditioned for group counts up to 1e7 where a
// itself is within 1e-7 of 1.
struct BoundProblem {
  double p1;
  double m;

  double a_of_s(double s) const { return std::exp(-s / (2.0 * m)); }

  // c^2 as a function of s: 1 - a^2 - (p1/M) a^(2-2M).
  double csq(double s) const {
    return -std::expm1(-s / m) - p1 / m * std::exp(s * (1.0 - 1.0 / m));
  }

  // Signed square root of the objective: h = kappa e^{s/2} - e^{s(1/(2M)-1/2)}
  // sqrt(c^2); the bound is min h^2 and hits zero exactly when h has a root.
  double h(double s) const {
    const double kappa = p1 * (m - 1.0) / (std::sqrt(2.0) * m);
    const double g = csq(s);
    return kappa * std::exp(0.5 * s) -
           std::exp(s * (0.5 / m - 0.5)) * std::sqrt(std::max(g, 0.0));
  }
};

}  // namespace detail

/// Minimal p2 of an M-group product state at fixed p1 (groups large, N -> inf)
/// together with the minimizing symmetric amplitude a*. Feasible amplitudes
/// satisfy b^2 = (p1/M) a^(2-2M) <= 1 - a^2; an empty feasible set yields an
/// infeasible result. The minimum is exactly zero whenever the objective's
/// signed root crosses zero inside the feasible interval.
///
/// Search strategy: the feasible interval endpoints are located by bisection,
/// then a 1000-point grid (uniform in s = -2M ln a, i.e. log-spaced in a)
/// seeds a golden-section refinement. Grid-first keeps the zero basin from
/// being stepped over.
inline BoundResult p2_bound(double p1, std::int64_t m) {
  if (!(p1 > 0.0) || !(p1 < 1.0))
    throw DomainError("p2_bound: p1 must be in (0,1)");
  if (m < 1) throw DomainError("p2_bound: m must be >= 1");

  const detail::BoundProblem prob{p1, static_cast<double>(m)};

  if (m == 1) {
    // Objective reduces to 1 - p1 - a^2 on a <= sqrt(1-p1); infimum 0 at the
    // feasibility edge.
    return {true, 0.0, std::sqrt(1.0 - p1)};
  }

  // Feasible interval in s. c^2(s) is concave with its maximum at
  // s_c = -ln(p1 (M-1)/M); negative maximum means no feasible amplitude.
  const double s_c = -std::log(p1 * (prob.m - 1.0) / prob.m);
  if (prob.csq(s_c) < 0.0) return BoundResult::infeasible_result();

  const auto csq = [&prob](double s) { return prob.csq(s); };
  const double s_lo = num::bisect_root(csq, 0.0, s_c, 1e-15 * std::max(1.0, s_c));
  double s_up = std::max(2.0 * s_c, s_c + 1.0);
  while (prob.csq(s_up) >= 0.0) s_up *= 2.0;
  const double s_hi = num::bisect_root(csq, s_c, s_up, 1e-15 * s_up);

  if (!(s_hi > s_lo)) {
    // Degenerate pinch: single feasible amplitude.
    const double h = prob.h(s_c);
    return {true, h * h, prob.a_of_s(s_c)};
  }

  // Grid scan of h, then golden refinement around the best cell.
  constexpr int kGridPoints = 1000;
  double best_s = s_lo;
  double best_h = prob.h(s_lo);
  for (int i = 1; i < kGridPoints; ++i) {
    const double s =
        s_lo + (s_hi - s_lo) * static_cast<double>(i) / (kGridPoints - 1);
    const double h = prob.h(s);
    if (h < best_h) {
      best_h = h;
      best_s = s;
    }
  }
  const double cell = (s_hi - s_lo) / (kGridPoints - 1);
  const double ref_lo = std::max(s_lo, best_s - cell);
  const double ref_hi = std::min(s_hi, best_s + cell);
  const double s_tol =
      std::min(1e-4, 1e-12 * std::max(1.0, 2.0 * prob.m));
  const auto h_of_s = [&prob](double s) { return prob.h(s); };
  auto [s_min, h_min] = num::golden_min(h_of_s, ref_lo, ref_hi, s_tol);
  if (best_h < h_min) {  // grid point beat the refinement (flat valley)
    s_min = best_s;
    h_min = best_h;
  }

  if (h_min <= 0.0) {
    // The bracket vanishes inside the feasible region: the bound is exactly
    // zero. Report the leftmost crossing; h(s_lo) > 0 for M >= 2.
    const double s_root = num::bisect_root(h_of_s, s_lo, s_min, 1e-15 * s_up);
    return {true, 0.0, prob.a_of_s(s_root)};
  }
  return {true, h_min * h_min, prob.a_of_s(s_min)};
}

/// Overload carrying the ensemble size for interface symmetry with the exact
/// finite-N projection formulas. The bound itself is the large-N expression;
/// the relative difference this hides is at most ~1/N.
inline BoundResult p2_bound(double p1, std::int64_t m, double n_atoms) {
  if (n_atoms < static_cast<double>(m))
    throw DomainError("p2_bound: n_atoms must be >= m");
  return p2_bound(p1, m);
}

// ---------------------------------------------------------------------------
// Bound curves

struct BoundCurvePoint {
  double p1 = 0.0;
  double p2_bound = 0.0;
  double a_star = 0.0;
};

/// Per-M tabulation of the bound over a p1 grid. Infeasible grid points are
/// omitted from `points` and listed in `infeasible_p1`.
struct BoundCurve {
  std::int64_t m = 1;
  std::vector<BoundCurvePoint> points;
  std::vector<double> infeasible_p1;
};

inline unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("WDEPTH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) hw = std::min<long>(hw, v);
  }
  return hw;
}

/// Evaluates p2_bound over a strictly increasing grid in (0,1). Grid points
/// are independent; they are evaluated in slots indexed by position, so the
/// result is identical for any thread count.
inline BoundCurve bound_curve(std::int64_t m, const std::vector<double>& p1_grid,
                              std::optional<double> n_atoms = std::nullopt) {
  if (p1_grid.empty()) throw ValidationError("bound_curve: empty grid");
  for (std::size_t i = 0; i < p1_grid.size(); ++i) {
    if (!(p1_grid[i] > 0.0) || !(p1_grid[i] < 1.0))
      throw ValidationError("bound_curve: grid values must lie in (0,1)");
    if (i > 0 && !(p1_grid[i] > p1_grid[i - 1]))
      throw ValidationError("bound_curve: grid must be strictly increasing");
  }
  if (n_atoms && *n_atoms < static_cast<double>(m))
    throw DomainError("bound_curve: n_atoms must be >= m");

  std::vector<BoundResult> slots(p1_grid.size());
  const unsigned workers =
      std::min<unsigned>(thread_budget(), p1_grid.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < p1_grid.size(); ++i)
      slots[i] = p2_bound(p1_grid[i], m);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t i = w; i < p1_grid.size(); i += workers)
          slots[i] = p2_bound(p1_grid[i], m);
      });
    }
    for (auto& t : pool) t.join();
  }

  BoundCurve curve;
  curve.m = m;
  for (std::size_t i = 0; i < p1_grid.size(); ++i) {
    if (slots[i].feasible)
      curve.points.push_back({p1_grid[i], slots[i].p2_bound, slots[i].a_star});
    else
      curve.infeasible_p1.push_back(p1_grid[i]);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Certification

struct CertificationResult {
  bool certified = false;
  std::int64_t m_min = 0;   // smallest excluded group count when certified
  double depth = 0.0;       // n_atoms / m_min
  double n_atoms = 0.0;
  double margin = 0.0;      // p2_bound(p1, m_min) - p2; +inf when the
                            // exclusion came from infeasibility of p1
};

namespace detail {

// Exclusion predicate: M-group separability is ruled out either because the
// measured p2 lies strictly below the bound, or because no M-group product
// state reaches the measured p1 at all. Monotone in M: the bound grows with
// M and the reachable p1 range shrinks.
inline bool excludes(double p1, double p2, std::int64_t m) {
  const BoundResult b = p2_bound(p1, m);
  if (!b.feasible) return true;
  return p2 < b.p2_bound;
}

}  // namespace detail

/// Smallest M in [1, m_max] whose separability the pair excludes, found by
/// exponential bracketing plus integer bisection over the monotone exclusion
/// predicate. Ties (p2 == bound) do not certify.
inline CertificationResult certify(const ProjectionPair& pair, double n_atoms,
                                   std::int64_t m_max = 10'000'000) {
  pair.validate();
  if (m_max < 1) throw ValidationError("certify: m_max must be >= 1");
  if (!(n_atoms > 0.0)) throw ValidationError("certify: n_atoms must be > 0");
  if (!(pair.p1 > 0.0) || !(pair.p1 < 1.0))
    throw DomainError("certify: p1 must be inside (0,1)");

  CertificationResult res;
  res.n_atoms = n_atoms;
  if (!detail::excludes(pair.p1, pair.p2, m_max)) return res;  // uncertified

  // Bracket the first excluded M: M = 1 never excludes (bound(1) = 0).
  std::int64_t lo = 1;  // known not excluded
  std::int64_t hi = 2;
  while (hi < m_max && !detail::excludes(pair.p1, pair.p2, hi)) {
    lo = hi;
    hi = std::min(m_max, hi * 2);
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (detail::excludes(pair.p1, pair.p2, mid))
      hi = mid;
    else
      lo = mid;
  }

  res.certified = true;
  res.m_min = hi;
  res.depth = n_atoms / static_cast<double>(hi);
  const BoundResult b = p2_bound(pair.p1, hi);
  res.margin = b.feasible ? b.p2_bound - pair.p2
                          : std::numeric_limits<double>::infinity();
  return res;
}

/// Worst case over the four (p1 +- sigma, p2 +- sigma) corners: the corner
/// with the weakest verdict wins (uncertified dominates, then the largest
/// m_min). Corners are clamped into valid probability ranges.
struct UncertainCertification {
  CertificationResult nominal;
  CertificationResult worst;
};

inline UncertainCertification certify_with_uncertainty(
    const ProjectionPair& pair, double n_atoms,
    std::int64_t m_max = 10'000'000) {
  UncertainCertification out;
  out.nominal = certify(pair, n_atoms, m_max);
  out.worst = out.nominal;
  const double eps = 1e-12;
  for (const double dp1 : {-pair.p1_err, pair.p1_err}) {
    for (const double dp2 : {-pair.p2_err, pair.p2_err}) {
      ProjectionPair corner = pair;
      corner.p1 = std::clamp(pair.p1 + dp1, eps, 1.0 - eps);
      corner.p2 = std::clamp(pair.p2 + dp2, 0.0, 1.0);
      const CertificationResult r = certify(corner, n_atoms, m_max);
      const bool weaker =
          (!r.certified && out.worst.certified) ||
          (r.certified == out.worst.certified && r.certified &&
           r.m_min > out.worst.m_min);
      if (weaker) out.worst = r;
    }
  }
  return out;
}

}  // namespace wdepth::witness

#endif  // WDEPTH_WITNESS_HPP
