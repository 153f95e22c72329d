// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

#include "specseq/sequence.hpp"

namespace specseq {

/// Target weighted size of the discarded series tail.
inline constexpr double kSeriesTol = 1e-12;

/// Hard cap on tail_cut; plans needing more are rejected.
inline constexpr Index kMaxTailCut = Index{1} << 18;

enum class ResolventMode { causal, split, frequency };

std::string_view to_string(ResolventMode mode);
ResolventMode parse_resolvent_mode(std::string_view name);

/// How to apply (tau - A)^{-1} on l_{2,rho}.
///
/// tail_cut is the number of extra indices kept past the forcing window on
/// each side where the Green's function is nonzero. It is the smallest K for
/// which both the geometric bound max(r_inside/rho, rho*r_outside_inv)^K and
/// the actual power norms of the rho-scaled blocks drop below series_tol.
struct ResolventPlan {
  BoundedOperator op;
  double rho = 1.0;
  ResolventMode mode = ResolventMode::causal;
  std::optional<SpectralSplit> split;
  Index tail_cut = 0;
  double series_tol = kSeriesTol;
};

ResolventPlan make_resolvent_plan(const BoundedOperator& a, double rho, ResolventMode mode,
                                  double series_tol = kSeriesTol, int quad_points = 256);

/// Split-mode plan reusing a precomputed Riesz split (at gamma = rho).
ResolventPlan make_split_plan(const BoundedOperator& a, SpectralSplit split,
                              double series_tol = kSeriesTol);

/// u_n = sum_{k <= n-1} A^{n-1-k} f_k on [lo(f), hi(f) + tail_cut], evaluated
/// by the first-order recurrence u_{n+1} = A u_n + f_n.
WindowedSequence apply_resolvent_causal(const ResolventPlan& plan, const WindowedSequence& f);

/// (tau - PAP)^{-1} P f + (tau - QAQ)^{-1} Q f. The stable part runs forward
/// in range(P) coordinates; the unstable part runs backward through the
/// inverse of A on range(Q).
WindowedSequence apply_resolvent_split(const ResolventPlan& plan, const WindowedSequence& f);

/// Z^{-1}[ z -> (zI - A)^{-1} Z(f)(z) ] on S_rho. n_samples = 0 picks the
/// smallest admissible power of two.
WindowedSequence apply_resolvent_frequency(const ResolventPlan& plan, const WindowedSequence& f,
                                           Index n_samples = 0);

WindowedSequence apply_resolvent(const ResolventPlan& plan, const WindowedSequence& f);

/// |tau u - A u - f| in l_{2,rho}.
double equation_residual(const BoundedOperator& a, const WindowedSequence& u,
                         const WindowedSequence& f, double rho);

struct CausalityVerdict {
  bool is_causal = false;
  WindowedSequence witness;  // (tau - A)^{-1} delta_{-1} x on l_{2,rho}
};

/// Applies the split-mode resolvent to delta_{-1} x and reports whether the
/// result is supported in Z_{>=0}.
CausalityVerdict causality_probe(const BoundedOperator& a, double rho, const Vector& x);

}  // namespace specseq
