// SPDX-License-Identifier: Apache-2.0
#include "specseq/ztransform.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "specseq/error.hpp"

namespace specseq {

namespace {

Index wrap(Index k, Index n) { return ((k % n) + n) % n; }

void require_samples(Index n_samples, Index width) {
  if (!is_power_of_two(n_samples)) {
    throw Error(ErrorCode::invalid_argument, "sample count must be a power of two");
  }
  if (n_samples < 2 * width) {
    std::ostringstream msg;
    msg << "aliasing: " << n_samples << " samples cannot carry a window of width " << width
        << " (need >= " << 2 * width << ")";
    throw Error(ErrorCode::aliasing, msg.str());
  }
}

double checked_pow(double rho, Index k) {
  const double w = std::pow(rho, static_cast<double>(k));
  if (!std::isfinite(w) || w == 0.0) {
    throw Error(ErrorCode::overflow, "rho^k out of floating-point range for this window");
  }
  return w;
}

}  // namespace

Complex CircleFunction::node(Index j) const {
  return std::polar(rho, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size()));
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

Index default_sample_count(Index width) {
  Index n = 16;
  while (n < 4 * width) n *= 2;
  return n;
}

CircleFunction ztransform(const WindowedSequence& u, double rho, Index n_samples) {
  if (!(rho > 0.0)) throw Error(ErrorCode::invalid_argument, "rho must be positive");
  require_samples(n_samples, u.width());

  CircleFunction f;
  f.rho = rho;
  f.samples.resize(u.dim(), n_samples);

  Eigen::FFT<double> fft;
  std::vector<Complex> coeff(static_cast<std::size_t>(n_samples));
  std::vector<Complex> spectrum;
  for (Index i = 0; i < u.dim(); ++i) {
    std::fill(coeff.begin(), coeff.end(), Complex(0.0));
    for (Index k = u.lo(); k <= u.hi(); ++k) {
      coeff[static_cast<std::size_t>(wrap(k, n_samples))] = u.col(k)(i) / checked_pow(rho, k);
    }
    fft.fwd(spectrum, coeff);
    for (Index j = 0; j < n_samples; ++j) f.samples(i, j) = spectrum[static_cast<std::size_t>(j)];
  }
  return f;
}

WindowedSequence inverse_ztransform(const CircleFunction& f, Interval window) {
  const Index n = f.size();
  if (window.hi < window.lo) throw Error(ErrorCode::invalid_argument, "empty window");
  if (window.width() > n) {
    std::ostringstream msg;
    msg << "window of width " << window.width() << " exceeds " << n << " circle samples";
    throw Error(ErrorCode::window_too_wide, msg.str());
  }

  WindowedSequence u = WindowedSequence::zeros(f.dim(), window);
  Eigen::FFT<double> fft;  // inv() includes the 1/N factor
  std::vector<Complex> row(static_cast<std::size_t>(n));
  std::vector<Complex> coeff;
  for (Index i = 0; i < f.dim(); ++i) {
    for (Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = f.samples(i, j);
    fft.inv(coeff, row);
    for (Index k = window.lo; k <= window.hi; ++k) {
      u.col(k)(i) = coeff[static_cast<std::size_t>(wrap(k, n))] * checked_pow(f.rho, k);
    }
  }
  return u;
}

Complex circle_inner_product(const CircleFunction& f, const CircleFunction& g) {
  if (f.samples.rows() != g.samples.rows() || f.samples.cols() != g.samples.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "circle functions sampled differently");
  }
  return f.samples.conjugate().cwiseProduct(g.samples).sum() / static_cast<double>(f.size());
}

ParsevalPair parseval_check(const WindowedSequence& u, double rho, Index n_samples) {
  const CircleFunction f = ztransform(u, rho, n_samples);
  ParsevalPair out;
  out.lhs = f.samples.squaredNorm() / static_cast<double>(n_samples);
  const double r = weighted_norm(u, {rho, Exponent::two});
  out.rhs = r * r;
  return out;
}

double multiplication_equiv_check(const WindowedSequence& u, double rho, Index n_samples) {
  const CircleFunction zu = ztransform(u, rho, n_samples);
  const CircleFunction zshift = ztransform(shift(u, 1), rho, n_samples);
  Matrix mz = zu.samples;
  for (Index j = 0; j < n_samples; ++j) mz.col(j) *= zu.node(j);
  const double scale = mz.norm();
  if (scale == 0.0) return (zshift.samples - mz).norm();
  return (zshift.samples - mz).norm() / scale;
}

HardyEvidence positive_support_hardy_check(const WindowedSequence& u, double rho,
                                           const std::vector<double>& mu_grid, Index n_samples) {
  if (n_samples == 0) n_samples = default_sample_count(u.width());
  HardyEvidence out;
  double prev_mu = rho;
  for (double mu : mu_grid) {
    if (!(mu > prev_mu)) {
      throw Error(ErrorCode::invalid_argument, "mu grid must be ascending and above rho");
    }
    prev_mu = mu;
    const CircleFunction f = ztransform(u, mu, n_samples);
    const double integral = f.samples.squaredNorm() / static_cast<double>(n_samples);
    if (!out.profile.empty() && integral > out.profile.back() * (1.0 + 1e-12)) {
      out.is_bounded_evidence = false;
    }
    out.profile.push_back(integral);
    out.sup_norm = std::max(out.sup_norm, integral);
  }
  return out;
}

}  // namespace specseq
