// SPDX-License-Identifier: Apache-2.0
#include "specseq/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "specseq/error.hpp"

namespace specseq {

namespace {

constexpr double kRieszTol = 1e-11;
constexpr int kRieszCap = 4096;

// Orthonormal basis for the range of a projection of known rank.
Matrix range_basis(const Matrix& proj, Eigen::Index rank) {
  if (rank == 0) return Matrix(proj.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(proj, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(rank);
}

Matrix trapezoid_projection(const Matrix& a, double gamma, int nodes) {
  const auto d = a.rows();
  Matrix sum = Matrix::Zero(d, d);
  const Matrix id = Matrix::Identity(d, d);
  for (int j = 0; j < nodes; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / nodes;
    const Complex z = std::polar(gamma, theta);
    // dz = i z dtheta cancels the 1/(2 pi i) prefactor up to 1/nodes.
    sum += z * (z * id - a).partialPivLu().solve(id);
  }
  return sum / static_cast<double>(nodes);
}

}  // namespace

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

BoundedOperator::BoundedOperator(Matrix entries)
    : entries_(std::move(entries)), cache_(std::make_shared<SpectralCache>()) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    std::ostringstream msg;
    msg << "operator matrix must be square and non-empty, got " << entries_.rows() << "x"
        << entries_.cols();
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorCode::non_finite, "operator matrix has NaN or Inf entries");
  }
}

BoundedOperator BoundedOperator::diagonal(std::initializer_list<Complex> diag) {
  Vector v(static_cast<Eigen::Index>(diag.size()));
  Eigen::Index i = 0;
  for (const auto& c : diag) v(i++) = c;
  return BoundedOperator(v.asDiagonal().toDenseMatrix());
}

const Vector& BoundedOperator::eigenvalues() const {
  std::call_once(cache_->once, [this] {
    Eigen::ComplexEigenSolver<Matrix> solver(entries_, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::eigen_solver_failed, "complex Schur iteration did not converge");
    }
    cache_->eigenvalues = solver.eigenvalues();
    cache_->norm = operator_norm(entries_);
  });
  return cache_->eigenvalues;
}

double BoundedOperator::norm() const {
  eigenvalues();
  return cache_->norm;
}

double spectral_radius(const BoundedOperator& a) {
  return a.eigenvalues().cwiseAbs().maxCoeff();
}

double modulus_gap(const BoundedOperator& a, double rho) {
  return (a.eigenvalues().cwiseAbs().array() - rho).abs().minCoeff();
}

void require_circle_gap(const BoundedOperator& a, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::invalid_argument, "circle radius must be positive and finite");
  }
  const double gap = modulus_gap(a, rho);
  if (gap <= kGapTol) {
    std::ostringstream msg;
    msg << "eigenvalue modulus within " << gap << " of circle radius " << rho;
    throw Error(ErrorCode::spectrum_on_circle, msg.str());
  }
}

Matrix resolvent_at(const BoundedOperator& a, Complex z) {
  const double dist = (a.eigenvalues().array() - z).abs().minCoeff();
  if (dist <= kEigTol * std::max(1.0, a.norm())) {
    std::ostringstream msg;
    msg << "resolvent point " << z << " lies within " << dist << " of the spectrum";
    throw Error(ErrorCode::spectrum_hit, msg.str());
  }
  const auto d = a.dim();
  const Matrix id = Matrix::Identity(d, d);
  return (z * id - a.matrix()).fullPivLu().solve(id);
}

double circle_sup_resolvent(const BoundedOperator& a, double rho, int samples) {
  if (samples < 16) throw Error(ErrorCode::invalid_argument, "circle_sup_resolvent needs >= 16 samples");
  require_circle_gap(a, rho);
  const auto d = a.dim();
  const Matrix id = Matrix::Identity(d, d);
  double best = 0.0;
  for (int j = 0; j < samples; ++j) {
    const Complex z = std::polar(rho, 2.0 * std::numbers::pi * j / samples);
    Eigen::JacobiSVD<Matrix> svd(z * id - a.matrix());
    const double smin = svd.singularValues()(d - 1);
    best = std::max(best, 1.0 / smin);
  }
  return best;
}

SpectralSplit riesz_split(const BoundedOperator& a, double gamma, int quad_points) {
  if (quad_points < 8) throw Error(ErrorCode::invalid_argument, "riesz_split needs >= 8 quadrature points");
  require_circle_gap(a, gamma);

  const auto d = a.dim();
  const auto& eig = a.eigenvalues();
  SpectralSplit split;
  split.gamma = gamma;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double m = std::abs(eig(i));
    if (m < gamma) {
      ++split.rank_stable;
      split.r_inside = std::max(split.r_inside, m);
    } else {
      split.r_outside_inv = std::max(split.r_outside_inv, 1.0 / m);
    }
  }

  const int cap = std::max(kRieszCap, 4 * quad_points);
  int nodes = quad_points;
  int doublings = 0;
  Matrix p;
  for (;;) {
    p = trapezoid_projection(a.matrix(), gamma, nodes);
    const double scale = std::max(1.0, operator_norm(p));
    const double defect = operator_norm(p * p - p);
    if (defect <= kRieszTol * scale * scale) break;
    if (2 * nodes > cap && doublings >= 2) {
      std::ostringstream msg;
      msg << "Riesz quadrature not converged with " << nodes << " nodes (|P^2-P| = " << defect << ")";
      throw Error(ErrorCode::quadrature_not_converged, msg.str());
    }
    nodes *= 2;
    ++doublings;
  }

  split.quad_points = nodes;
  split.proj_stable = p;
  split.proj_unstable = Matrix::Identity(d, d) - p;
  split.stable_basis = range_basis(split.proj_stable, split.rank_stable);
  split.unstable_basis = range_basis(split.proj_unstable, d - split.rank_stable);
  split.stable_coords = split.stable_basis.adjoint() * split.proj_stable;
  split.unstable_coords = split.unstable_basis.adjoint() * split.proj_unstable;
  split.stable_block = split.stable_basis.adjoint() * a.matrix() * split.stable_basis;
  split.unstable_block = split.unstable_basis.adjoint() * a.matrix() * split.unstable_basis;
  return split;
}

bool is_hyperbolic(const BoundedOperator& a) {
  const double gap = modulus_gap(a, 1.0);
  if (gap <= kGapTol) {
    std::ostringstream msg;
    msg << "eigenvalue modulus within " << gap << " of the unit circle";
    throw Error(ErrorCode::indeterminate, msg.str());
  }
  return true;
}

}  // namespace specseq
