// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specseq/error.hpp"
#include "specseq/resolvent.hpp"
#include "specseq/stencil.hpp"

namespace specseq {

struct ManifoldOptions {
  double rho = 0.0;  // outer weight; 0 selects r(A) + 0.5
  double fp_tol = 1e-14;
  int max_iter = 10000;
  double series_tol = kSeriesTol;
  Index window = 0;  // orbit window [0, W]; 0 selects max(2 tail_cut, 64)
  int quad_points = 256;
};

/// Hyperbolic A split at the unit circle together with an admissible F.
struct ManifoldProblem {
  BoundedOperator a;
  StencilMap f;
  ResolventPlan plan;  // split mode at rho = 1
  double rho = 0.0;
  double m_one = 0.0;    // sup of |(z - A)^{-1}| on S_1
  double m_rho = 0.0;    // same on S_rho
  double lip_one = 0.0;  // declared Lipschitz bound of F on l_2
  double lip_rho = 0.0;  // same on l_{2,rho}
  Index window = 0;
  double fp_tol = 1e-14;
  int max_iter = 10000;

  const SpectralSplit& split() const { return *plan.split; }
};

/// Validates hyperbolicity, causality, F(0) = 0 and the two admissibility
/// inequalities Lip_1(F) M_1 < 1 and Lip_rho(F) M_rho < 1.
ManifoldProblem make_manifold_problem(const BoundedOperator& a, const StencilMap& f, ManifoldOptions opts = {});

/// chi_{>=0} (tau - A)^{-1} (F(u) + delta_{-1} xi) on l_2, kept on [0, W].
WindowedSequence lp_apply(const ManifoldProblem& prob, const Vector& xi, const WindowedSequence& u);

struct CharacterizationDefects {
  double stable = 0.0;    // max_n |P u_n - (PAP)^n xi - sum_{k<n} (PAP)^{n-1-k} P F(u)_k|
  double unstable = 0.0;  // max_n |Q u_n + sum_{k>=n} (QAQ)^{n-1-k} Q F(u)_k|
  Vector eta_series;      // -sum_{k>=0} (QAQ)^{-1-k} Q F(u)_k
};

/// Evaluates both fixed-point identities with full-space matrices: PAP and the
/// group inverse (QAQ + P)^{-1} Q in place of (QAQ)^{-1} on range(Q).
CharacterizationDefects characterization_defects(const ManifoldProblem& prob, const Vector& xi,
                                                 const WindowedSequence& u);

struct ManifoldPoint {
  Vector xi;
  Vector eta;
  WindowedSequence orbit;  // T(xi) on [0, W]
  double decay_rate_estimate = 0.0;
  int iterations = 0;
  double residual = 0.0;  // last fixed-point step in l_2
  double contraction_estimate = 0.0;
  double theoretical_factor = 0.0;  // M_1 * Lip_1(F)
  std::vector<double> ratios;
  CharacterizationDefects defects;
};

/// Iterates lp_apply from the linear profile V_P (A|_P)^n V_P^* xi. Stops at
/// fp_tol, or when the step stalls at the roundoff floor of the orbit.
ManifoldPoint lp_fixed_point(const ManifoldProblem& prob, const Vector& xi);

struct ManifoldResult {
  Vector eta;  // w^s(xi) = Q T(xi)_0
  ManifoldPoint point;
  double eta_series_defect = 0.0;  // |eta - eta_series|
  double orbit_agreement = 0.0;    // max_n |S(xi + eta)_n - T(xi)_n| for n <= agreement_horizon
  Index agreement_horizon = 0;     // first n with |T(xi)_n| <= 1e-6 |xi + eta| (or W)
};

ManifoldResult stable_manifold_point(const ManifoldProblem& prob, const Vector& xi);

struct SweepRow {
  Vector xi;
  std::optional<ManifoldResult> result;
  std::optional<ErrorCode> error_code;
  std::string error_message;
};

/// Worker count: `requested` if positive, else hardware concurrency, capped by
/// SPECSEQ_THREADS when set.
int sweep_thread_count(int requested = 0);

/// One row per grid point, in grid order; per-row failures are recorded.
std::vector<SweepRow> manifold_sweep(const ManifoldProblem& prob, const std::vector<Vector>& grid,
                                     int threads = 0);

/// For A with every eigenvalue modulus above 1: true iff x is ~0 or
/// |A^m x| >= |x| for every m in [horizon / 2, horizon].
bool spectrum_escape_check(const BoundedOperator& a, const Vector& x, Index horizon);

}  // namespace specseq
