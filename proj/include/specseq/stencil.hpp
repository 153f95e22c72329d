// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "specseq/sequence.hpp"

namespace specseq {

struct ZeroKernel {};

/// w -> B w.
struct LinearKernel {
  Matrix b;
};

/// w -> eps * C * s(w), with s(w)_i = w_i / sqrt(1 + |w_i|^2) acting per
/// component. s is odd and 1-Lipschitz on C.
struct SaturationKernel {
  double eps = 0.0;
  Matrix coupling;
};

/// Per component w_i -> p(clip_R(w_i)) with p(z) = sum_j coeffs[j] z^j and
/// clip_R the radial projection onto the closed disk of radius R.
/// coeffs[0] must vanish.
struct ClippedPolynomialKernel {
  std::vector<Complex> coeffs;
  double clip_radius = 1.0;
};

using Kernel = std::variant<ZeroKernel, LinearKernel, SaturationKernel, ClippedPolynomialKernel>;

std::string_view kernel_name(const Kernel& k);
Vector evaluate_kernel(const Kernel& k, const Vector& w);

/// Global Lipschitz constant of the kernel on C^d.
double kernel_lipschitz(const Kernel& k);

/// Kernel evaluated at u_{n + offset}.
struct StencilTerm {
  Index offset = 0;
  Kernel kernel;
};

/// F(u)_n = sum_t g_t(u_{n + offset_t}) + forcing_n.
///
/// Every kernel vanishes at 0, so without forcing F(0) = 0. A term at offset o
/// with kernel constant L is Lipschitz with constant L * rho^o on l_{p,rho},
/// which gives lipschitz_bound.
class StencilMap {
 public:
  StencilMap(Index dim, std::vector<StencilTerm> terms,
             std::optional<WindowedSequence> forcing = std::nullopt);

  static StencilMap zero(Index dim);
  static StencilMap linear(Matrix b, Index offset = 0);
  /// coupling defaults to the all-ones matrix.
  static StencilMap saturation(Index dim, double eps, std::optional<Matrix> coupling = std::nullopt);
  static StencilMap clipped_polynomial(Index dim, std::vector<Complex> coeffs, double clip_radius,
                                       Index offset = 0);
  /// F(u)_n = u_n + h f(u_{n+1}); f_name is one of neg_identity,
  /// neg_saturation, zero.
  static StencilMap implicit_euler(Index dim, double h, std::string_view f_name);

  StencilMap with_forcing(WindowedSequence forcing) const;

  Index dim() const { return dim_; }
  Index memory() const;
  Index lookahead() const;
  bool causal() const { return lookahead() == 0; }
  bool vanishes_at_zero() const;
  double lipschitz_bound(double rho) const;

  const std::vector<StencilTerm>& terms() const { return terms_; }
  const std::optional<WindowedSequence>& forcing() const { return forcing_; }

  Vector evaluate_at(const WindowedSequence& u, Index n) const;

  /// Exact output window: [lo - lookahead, hi + memory] joined with the
  /// forcing window.
  WindowedSequence apply(const WindowedSequence& u) const;

 private:
  Index dim_;
  std::vector<StencilTerm> terms_;
  std::optional<WindowedSequence> forcing_;
};

}  // namespace specseq
