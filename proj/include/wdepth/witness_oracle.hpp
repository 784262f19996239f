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

#ifndef WDEPTH_WITNESS_ORACLE_HPP
#define WDEPTH_WITNESS_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "wdepth/errors.hpp"
#include "wdepth/witness.hpp"

// Test-support brute-force minimizer over fully asymmetric group amplitudes.
// Independent of the closed-form bound: it drives the exact projection
// formulas p1_general / p2_general on a grid, so the two routes can be
// compared. Cost grows exponentially with the group count; supported only
// for M <= 5 and intended for test binaries.

namespace wdepth::witness::oracle {

struct OracleResult {
  bool feasible = false;
  double p2_min = std::numeric_limits<double>::infinity();
  std::vector<GroupAmplitudes> argmin;
};

struct OracleConfig {
  int a_points = 36;        // grid points per a_i dimension
  int b_points = 36;        // grid points per b_i dimension (i < M)
  double a_min = 0.02;      // a_i scan range, away from the open boundary
  double a_max = 0.9995;
  int refine_rounds = 2;    // local zoom rounds around the incumbent
  int refine_points = 9;    // points per dimension in a zoom round
  double n_atoms = 1e9;     // "large N" for the finite-size factors
};

namespace detail {

// Walks an M-group amplitude grid. b_1..b_{M-1} scan both signs; b_M is
// solved exactly from sum(b_i/a_i) = sqrt(M p1) / prod(a_i), which keeps the
// p1 constraint satisfied to round-off instead of within a grid tolerance.
// c_i = sigma_i sqrt(1 - a_i^2 - b_i^2) with every sign pattern enumerated.
class GridWalker {
 public:
  GridWalker(double p1, int m, const OracleConfig& cfg)
      : p1_(p1), m_(m), cfg_(cfg) {}

  OracleResult run() {
    OracleResult best;
    std::vector<double> a_lo(m_, cfg_.a_min), a_hi(m_, cfg_.a_max);
    std::vector<double> b_lo(m_ - 1, 0.0), b_hi(m_ - 1, 0.0);  // set per a_i
    scan(best, a_lo, a_hi, cfg_.a_points, cfg_.b_points, true, {});
    for (int round = 0; round < cfg_.refine_rounds && best.feasible; ++round) {
      OracleResult zoomed = best;
      zoom(zoomed, best.argmin, round);
      best = zoomed;
    }
    return best;
  }

  // Final spacing of the a-grid after all refine rounds; the agreement
  // tolerance quoted in tests derives from it.
  double final_a_step() const {
    double step = (cfg_.a_max - cfg_.a_min) / (cfg_.a_points - 1);
    for (int r = 0; r < cfg_.refine_rounds; ++r)
      step = 2.0 * step / (cfg_.refine_points - 1);
    return step;
  }

 private:
  void scan(OracleResult& best, const std::vector<double>& a_lo,
            const std::vector<double>& a_hi, int na, int nb, bool full_b,
            const std::vector<GroupAmplitudes>& b_center) {
    std::vector<double> a(m_), b(m_);
    scan_a(best, a_lo, a_hi, na, nb, full_b, b_center, a, b, 0);
  }

  void scan_a(OracleResult& best, const std::vector<double>& a_lo,
              const std::vector<double>& a_hi, int na, int nb, bool full_b,
              const std::vector<GroupAmplitudes>& b_center,
              std::vector<double>& a, std::vector<double>& b, int dim) {
    if (dim == m_) {
      scan_b(best, nb, full_b, b_center, a, b, 0);
      return;
    }
    for (int i = 0; i < na; ++i) {
      a[dim] = a_lo[dim] +
               (a_hi[dim] - a_lo[dim]) * static_cast<double>(i) /
                   std::max(1, na - 1);
      if (a[dim] <= 0.0 || a[dim] >= 1.0) continue;
      scan_a(best, a_lo, a_hi, na, nb, full_b, b_center, a, b, dim + 1);
    }
  }

  void scan_b(OracleResult& best, int nb, bool full_b,
              const std::vector<GroupAmplitudes>& b_center,
              std::vector<double>& a, std::vector<double>& b, int dim) {
    if (dim == m_ - 1) {
      close_and_score(best, a, b);
      return;
    }
    const double cap = std::sqrt(std::max(0.0, 1.0 - a[dim] * a[dim]));
    double lo = -cap, hi = cap;
    if (!full_b) {
      const double half = 2.0 * cap / (nb - 1);
      lo = std::max(-cap, b_center[dim].b - half);
      hi = std::min(cap, b_center[dim].b + half);
    }
    for (int i = 0; i < nb; ++i) {
      b[dim] = lo + (hi - lo) * static_cast<double>(i) / std::max(1, nb - 1);
      scan_b(best, nb, full_b, b_center, a, b, dim + 1);
    }
  }

  // Solve the last b from the p1 constraint, then enumerate c sign patterns.
  void close_and_score(OracleResult& best, const std::vector<double>& a,
                       std::vector<double>& b) {
    double prod_a = 1.0;
    for (int i = 0; i < m_; ++i) prod_a *= a[i];
    double partial = 0.0;
    for (int i = 0; i < m_ - 1; ++i) partial += b[i] / a[i];
    const double target = std::sqrt(static_cast<double>(m_) * p1_) / prod_a;
    const double b_last = a[m_ - 1] * (target - partial);
    const double room_last = 1.0 - a[m_ - 1] * a[m_ - 1];
    if (b_last * b_last > room_last) return;
    b[m_ - 1] = b_last;

    std::vector<double> cmag(m_);
    for (int i = 0; i < m_; ++i) {
      const double r = 1.0 - a[i] * a[i] - b[i] * b[i];
      if (r < -1e-12) return;
      cmag[i] = std::sqrt(std::max(0.0, r));
    }

    GeneralAnsatz an;
    an.n_atoms = cfg_.n_atoms;
    an.groups.resize(m_);
    for (int mask = 0; mask < (1 << m_); ++mask) {
      for (int i = 0; i < m_; ++i) {
        an.groups[i].a = a[i];
        an.groups[i].b = b[i];
        an.groups[i].c = (mask & (1 << i)) ? cmag[i] : -cmag[i];
      }
      const double p2 = p2_general(an);
      if (!best.feasible || p2 < best.p2_min) {
        best.feasible = true;
        best.p2_min = p2;
        best.argmin = an.groups;
      }
    }
  }

  void zoom(OracleResult& best, const std::vector<GroupAmplitudes>& center,
            int round) {
    double a_step = (cfg_.a_max - cfg_.a_min) / (cfg_.a_points - 1);
    for (int r = 0; r < round; ++r)
      a_step = 2.0 * a_step / (cfg_.refine_points - 1);
    std::vector<double> a_lo(m_), a_hi(m_);
    for (int i = 0; i < m_; ++i) {
      a_lo[i] = std::max(1e-4, center[i].a - a_step);
      a_hi[i] = std::min(1.0 - 1e-9, center[i].a + a_step);
    }
    scan(best, a_lo, a_hi, cfg_.refine_points, cfg_.refine_points, false,
         center);
  }

  double p1_;
  int m_;
  OracleConfig cfg_;
};

}  // namespace detail

/// Brute-force minimum of p2 over M-group product states with the p1
/// constraint satisfied exactly (last W1 amplitude solved for). Reports
/// infeasible when no grid point admits a valid closing amplitude.
inline OracleResult p2_bound_oracle(double p1, std::int64_t m,
                                    const OracleConfig& cfg = {}) {
  if (!(p1 > 0.0) || !(p1 < 1.0))
    throw DomainError("p2_bound_oracle: p1 must be in (0,1)");
  if (m < 1 || m > 5)
    throw DomainError("p2_bound_oracle: supported for 1 <= m <= 5 only");

  if (m == 1) {
    // Single group: b^2 = p1 fixed, p2 = c^2 (1-1/D)/(1-1/N); scan a.
    OracleResult best;
    const double b = std::sqrt(p1);
    for (int i = 0; i < cfg.a_points * 40; ++i) {
      const double a =
          cfg.a_min + (cfg.a_max - cfg.a_min) * static_cast<double>(i) /
                          (cfg.a_points * 40 - 1);
      const double r = 1.0 - a * a - p1;
      if (r < 0.0) continue;
      GeneralAnsatz an;
      an.n_atoms = cfg.n_atoms;
      an.groups = {{a, b, -std::sqrt(r)}};
      const double p2 = p2_general(an);
      if (!best.feasible || p2 < best.p2_min) {
        best.feasible = true;
        best.p2_min = p2;
        best.argmin = an.groups;
      }
    }
    return best;
  }

  detail::GridWalker walker(p1, static_cast<int>(m), cfg);
  return walker.run();
}

/// Documented agreement tolerance for |closed-form bound - oracle minimum|.
/// Near the zero floor and at feasibility edges the oracle minimum moves
/// linearly with its final grid step; C covers the worst observed slope.
inline double oracle_tolerance(const OracleConfig& cfg = {},
                               std::int64_t m = 3) {
  detail::GridWalker walker(0.5, static_cast<int>(m), cfg);
  return 4.0 * walker.final_a_step() + 1e-6;
}

}  // namespace wdepth::witness::oracle

#endif  // WDEPTH_WITNESS_ORACLE_HPP
