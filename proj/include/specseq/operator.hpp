// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

namespace specseq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Eigenvalue moduli closer than this to a contour radius count as "on" it.
inline constexpr double kGapTol = 1e-6;

/// Relative distance (scaled by max(1, |A|)) below which a resolvent point is
/// treated as hitting the spectrum.
inline constexpr double kEigTol = 1e-10;

/// Largest singular value.
double operator_norm(const Matrix& m);

/// Dense d x d complex matrix standing for a bounded operator on C^d.
///
/// Eigenvalues are computed on first request and shared between copies; the
/// cache is filled under std::call_once so concurrent readers are safe.
class BoundedOperator {
 public:
  explicit BoundedOperator(Matrix entries);

  static BoundedOperator diagonal(std::initializer_list<Complex> diag);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  const Vector& eigenvalues() const;
  double norm() const;

 private:
  struct SpectralCache {
    std::once_flag once;
    Vector eigenvalues;
    double norm = 0.0;
  };

  Matrix entries_;
  std::shared_ptr<SpectralCache> cache_;
};

/// Riesz projection pair for the circle of radius gamma.
///
/// Besides P and Q the split carries orthonormal bases of both ranges and the
/// compressions of A onto them, so (PAP)^n and (QAQ)^{-n} can be applied in
/// coordinates without round-off leaking across the splitting.
struct SpectralSplit {
  double gamma = 1.0;
  Matrix proj_stable;    // P, spectrum inside the circle
  Matrix proj_unstable;  // Q = I - P
  double r_inside = 0.0;       // max |lambda| over |lambda| < gamma (0 if none)
  double r_outside_inv = 0.0;  // max 1/|lambda| over |lambda| > gamma (0 if none)
  int quad_points = 0;         // trapezoid nodes actually used

  Eigen::Index rank_stable = 0;
  Matrix stable_basis;     // d x k, orthonormal columns spanning range(P)
  Matrix unstable_basis;   // d x (d-k), spanning range(Q)
  Matrix stable_coords;    // k x d, V_P^* P
  Matrix unstable_coords;  // (d-k) x d, V_Q^* Q
  Matrix stable_block;     // k x k, A restricted to range(P)
  Matrix unstable_block;   // (d-k) x (d-k), A restricted to range(Q)

  Eigen::Index dim() const { return proj_stable.rows(); }
  Eigen::Index rank_unstable() const { return dim() - rank_stable; }
};

double spectral_radius(const BoundedOperator& a);

/// Smallest distance between |lambda| and rho over the spectrum.
double modulus_gap(const BoundedOperator& a, double rho);

/// Throws spectrum_on_circle unless every eigenvalue modulus is at least
/// kGapTol away from rho.
void require_circle_gap(const BoundedOperator& a, double rho);

/// (zI - A)^{-1}.
Matrix resolvent_at(const BoundedOperator& a, Complex z);

/// Max over `samples` equispaced points of S_rho of |(zI - A)^{-1}|_2.
double circle_sup_resolvent(const BoundedOperator& a, double rho, int samples = 1024);

/// Trapezoid-rule Riesz projection onto the spectral part inside S_gamma.
/// The node count doubles from quad_points until P is idempotent to working
/// accuracy; at least two doublings are tried, and never more than
/// max(4096, 4 * quad_points) nodes.
SpectralSplit riesz_split(const BoundedOperator& a, double gamma, int quad_points = 256);

/// True iff no eigenvalue lies on the unit circle. Throws indeterminate when
/// some modulus is within kGapTol of 1.
bool is_hyperbolic(const BoundedOperator& a);

}  // namespace specseq
