// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "specseq/error.hpp"
#include "specseq/stencil.hpp"

namespace specseq {

struct SolveOptions {
  double fp_tol = 1e-10;
  int max_iter = 10000;
};

struct SolveReport {
  WindowedSequence solution;
  int iterations = 0;
  double final_residual = 0.0;        // last |u_{k+1} - u_k| in the solve norm
  double contraction_estimate = 0.0;  // largest measured step ratio (0 if none measurable)
  double theoretical_factor = 0.0;    // declared Lipschitz bound / rho
  bool converged = false;
  std::vector<double> ratios;         // |D_{k+1}| / |D_k| above the roundoff floor
};

/// Raised when a fixed-point iteration exhausts max_iter; carries the report.
class NoConvergence : public Error {
 public:
  NoConvergence(std::string message, SolveReport report)
      : Error(ErrorCode::no_convergence, std::move(message)), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// Records step norms of a fixed-point iteration and the measurable ratios.
class ContractionMonitor {
 public:
  /// Feeds |u_{k+1} - u_k| with the current iterate size; returns the step.
  void record(double step, double scale);
  const std::vector<double>& ratios() const { return ratios_; }
  double worst_ratio() const;
  /// Noise level below which steps are pure roundoff.
  static double floor(double scale);

 private:
  double prev_ = -1.0;
  std::vector<double> ratios_;
};

/// Banach iteration u <- tau^{-1} F(u), restricted to `window`, from u = 0.
/// Requires F.lipschitz_bound(rho) < rho.
SolveReport solve_contraction(const StencilMap& f, Weight w, Interval window, SolveOptions opts = {});

enum class IvpMethod { recursion, variation_of_constants, impulse };

std::string_view to_string(IvpMethod m);
IvpMethod parse_ivp_method(std::string_view name);

struct IvpOptions {
  double rho = 0.0;  // impulse method weight; 0 selects 1.5 r(A) + 0.5
  double fp_tol = 1e-12;
  int max_iter = 10000;
};

double default_ivp_rho(const BoundedOperator& a);

/// Solution of u_{n+1} = A u_n + F(u)_n, u_0 = x on [0, horizon].
///
/// recursion steps forward directly. variation_of_constants evaluates
/// u_n = A^n x + sum_{k<n} A^{n-1-k} F(u)_k with explicit powers, filling F(u)
/// forward. impulse iterates u <- (tau - A)^{-1}(F(u) + delta_{-1} x) with the
/// causal resolvent on l_{2,rho}; its result carries window [-1, horizon].
WindowedSequence solve_ivp(const BoundedOperator& a, const StencilMap& f, const Vector& x, Index horizon,
                           IvpMethod method, IvpOptions opts = {});

/// Impulse-method variant that also returns the iteration report.
SolveReport solve_ivp_impulse(const BoundedOperator& a, const StencilMap& f, const Vector& x, Index horizon,
                              IvpOptions opts = {});

enum class StabilityVerdict { exponentially_stable, not_stable };

std::string_view to_string(StabilityVerdict v);

struct StabilityOptions {
  Index horizon = 400;  // lengthened automatically so the decay test can resolve r / rho*
  int probes = 8;
  std::uint64_t seed = 0;
  double tail_tol = 1e-6;
};

struct ProbeEvidence {
  bool decays = false;    // weighted tail over [H/2, H] is at most tail_tol of the total
  bool bounded = false;   // sup over [H/2, H] of |u_n| rho^{-n} at most the sup over [0, H/2)
  double tail_fraction = 0.0;
};

struct StabilityReport {
  StabilityVerdict verdict = StabilityVerdict::not_stable;
  double r = 0.0;
  double rho_star = 0.0;     // (1 + r) / 2
  double probe_rho = 0.0;    // weight used by the probes: rho_star if stable, 1 otherwise
  Index horizon = 0;
  std::vector<ProbeEvidence> probes;
  bool consistent = false;   // every probe's (decays && bounded) equals the verdict
};

/// r(A) < 1 decides the verdict; random impulse probes u_n = A^n x confirm it
/// through l_{2,rho} membership and |u_n| <= M rho^n evidence.
StabilityReport stability_classify(const BoundedOperator& a, StabilityOptions opts = {});

/// Lower bound on the Lipschitz constant of F on l_{p,rho} from random pairs
/// supported on [-8, 8].
double lipschitz_probe(const StencilMap& f, Weight w, int trials, std::uint64_t seed = 0);

}  // namespace specseq
