// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "specseq/sequence.hpp"

namespace specseq {

/// f sampled on S_rho: column j of samples holds f(rho * exp(2 pi i j / N)).
struct CircleFunction {
  double rho = 1.0;
  Matrix samples;  // d x N

  Index dim() const { return samples.rows(); }
  Index size() const { return samples.cols(); }
  Complex node(Index j) const;
};

/// Smallest power of two >= 4 * width (and >= 16).
Index default_sample_count(Index width);

bool is_power_of_two(Index n);

/// samples_j = sum_k u_k z_j^{-k}, evaluated with one length-N FFT per
/// component of the rho^{-k}-scaled, index-rotated coefficient array.
/// Requires N a power of two with N >= 2 * width(u).
CircleFunction ztransform(const WindowedSequence& u, double rho, Index n_samples);

/// Coefficients on `window` recovered by inverse FFT and rho^k rescaling.
/// Requires window width <= N.
WindowedSequence inverse_ztransform(const CircleFunction& f, Interval window);

/// (1/N) sum_j <f_j, g_j>, the discretized L2(S_rho) inner product.
Complex circle_inner_product(const CircleFunction& f, const CircleFunction& g);

struct ParsevalPair {
  double lhs = 0.0;  // discrete |Z u|^2 on the circle
  double rhs = 0.0;  // |u|^2 in l_{2,rho}
};

ParsevalPair parseval_check(const WindowedSequence& u, double rho, Index n_samples);

/// |Z(tau u) - m Z(u)| / |m Z(u)| over the samples (0 for u = 0), where
/// (m f)(z) = z f(z).
double multiplication_equiv_check(const WindowedSequence& u, double rho, Index n_samples);

struct HardyEvidence {
  std::vector<double> profile;  // |u|^2_{l_{2,mu}} via the circle integral at each mu
  double sup_norm = 0.0;
  bool is_bounded_evidence = true;  // profile nonincreasing in mu
};

/// Finite-grid evidence for spt u within Z_{>=0}: the circle integrals over
/// S_mu stay bounded (nonincreasing) as mu grows past rho. This is evidence
/// only; no finite grid decides the question.
HardyEvidence positive_support_hardy_check(const WindowedSequence& u, double rho,
                                           const std::vector<double>& mu_grid,
                                           Index n_samples = 0);

}  // namespace specseq
