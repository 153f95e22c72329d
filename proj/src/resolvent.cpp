// SPDX-License-Identifier: Apache-2.0
#include "specseq/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "specseq/error.hpp"
#include "specseq/ztransform.hpp"

namespace specseq {

namespace {

Index geometric_cut(double q, double tol) {
  if (q <= 0.0) return 1;
  const double k = std::ceil(std::log(tol) / std::log(q));
  if (!(k < static_cast<double>(kMaxTailCut))) {
    std::ostringstream msg;
    msg << "series ratio " << q << " needs more than " << kMaxTailCut << " tail terms";
    throw Error(ErrorCode::tail_too_long, msg.str());
  }
  return std::max<Index>(1, static_cast<Index>(k));
}

// First m with |b^m|_F <= tol. Frobenius bounds the spectral norm from above.
Index power_cut(const Matrix& b, double tol) {
  if (b.size() == 0) return 0;
  Matrix pw = b;
  Index m = 1;
  while (pw.norm() > tol) {
    pw = pw * b;
    if (++m > kMaxTailCut) throw Error(ErrorCode::tail_too_long, "power norms decay too slowly");
  }
  return m;
}

Matrix unstable_inverse(const SpectralSplit& split) {
  const auto k = split.rank_unstable();
  if (k == 0) return Matrix(0, 0);
  Eigen::FullPivLU<Matrix> lu(split.unstable_block);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::internal_inconsistency,
                "A restricted to range(Q) is singular despite the spectral gap");
  }
  return lu.inverse();
}

Index split_tail_cut(const SpectralSplit& split, double rho, double tol) {
  const double q = std::max(split.r_inside / rho, rho * split.r_outside_inv);
  Index k = geometric_cut(q, tol);
  k = std::max(k, power_cut(split.stable_block / rho, tol));
  if (split.rank_unstable() > 0) k = std::max(k, power_cut(rho * unstable_inverse(split), tol));
  return k;
}

void require_mode(const ResolventPlan& plan, ResolventMode mode) {
  if (plan.mode != mode) {
    std::ostringstream msg;
    msg << "plan is in " << to_string(plan.mode) << " mode, " << to_string(mode) << " required";
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
}

void require_dim(const ResolventPlan& plan, const WindowedSequence& f) {
  if (f.dim() != plan.op.dim()) throw Error(ErrorCode::dimension_mismatch, "forcing and operator dimensions differ");
}

// Output window of the split/frequency resolvent for forcing on `w`.
Interval split_window(const SpectralSplit& split, Interval w, Index tail) {
  return {w.lo - (split.rank_unstable() > 0 ? tail : 0), w.hi + (split.rank_stable > 0 ? tail : 0)};
}

}  // namespace

std::string_view to_string(ResolventMode mode) {
  switch (mode) {
    case ResolventMode::causal: return "causal";
    case ResolventMode::split: return "split";
    case ResolventMode::frequency: return "frequency";
  }
  return "unknown";
}

ResolventMode parse_resolvent_mode(std::string_view name) {
  if (name == "causal") return ResolventMode::causal;
  if (name == "split") return ResolventMode::split;
  if (name == "frequency") return ResolventMode::frequency;
  throw Error(ErrorCode::invalid_argument, "unknown resolvent mode '" + std::string(name) + "'");
}

ResolventPlan make_resolvent_plan(const BoundedOperator& a, double rho, ResolventMode mode,
                                  double series_tol, int quad_points) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(ErrorCode::invalid_argument, "rho must be positive");
  if (!(series_tol > 0.0 && series_tol < 1.0)) throw Error(ErrorCode::invalid_argument, "series_tol must lie in (0, 1)");

  if (mode == ResolventMode::causal) {
    const double r = spectral_radius(a);
    if (!(rho > r + kGapTol)) {
      std::ostringstream msg;
      msg << "causal resolvent needs rho > r(A): rho = " << rho << ", r(A) = " << r;
      throw Error(ErrorCode::not_causal_regime, msg.str());
    }
    ResolventPlan plan{a, rho, mode, std::nullopt, 0, series_tol};
    plan.tail_cut = std::max(geometric_cut(r / rho, series_tol), power_cut(a.matrix() / rho, series_tol));
    return plan;
  }

  auto plan = make_split_plan(a, riesz_split(a, rho, quad_points), series_tol);
  plan.mode = mode;
  return plan;
}

ResolventPlan make_split_plan(const BoundedOperator& a, SpectralSplit split, double series_tol) {
  if (split.dim() != a.dim()) throw Error(ErrorCode::dimension_mismatch, "split and operator dimensions differ");
  require_circle_gap(a, split.gamma);
  ResolventPlan plan{a, split.gamma, ResolventMode::split, std::nullopt, 0, series_tol};
  plan.tail_cut = split_tail_cut(split, split.gamma, series_tol);
  plan.split = std::move(split);
  return plan;
}

WindowedSequence apply_resolvent_causal(const ResolventPlan& plan, const WindowedSequence& f) {
  require_mode(plan, ResolventMode::causal);
  require_dim(plan, f);
  const Interval w{f.lo(), f.hi() + plan.tail_cut};
  WindowedSequence u = WindowedSequence::zeros(f.dim(), w);
  const Matrix& a = plan.op.matrix();
  for (Index n = w.lo; n < w.hi; ++n) {
    u.col(n + 1) = a * u.col(n);
    if (n <= f.hi()) u.col(n + 1) += f.col(n);
  }
  return u;
}

WindowedSequence apply_resolvent_split(const ResolventPlan& plan, const WindowedSequence& f) {
  if (plan.mode != ResolventMode::split && plan.mode != ResolventMode::frequency) {
    throw Error(ErrorCode::invalid_argument, "plan has no spectral split");
  }
  if (!plan.split) throw Error(ErrorCode::split_missing, "split-mode plan without a spectral split");
  require_dim(plan, f);
  const SpectralSplit& split = *plan.split;
  const Interval w = split_window(split, f.window(), plan.tail_cut);
  WindowedSequence u = WindowedSequence::zeros(f.dim(), w);

  if (split.rank_stable > 0) {
    const Matrix& m = split.stable_block;
    Vector s = Vector::Zero(split.rank_stable);
    for (Index n = f.lo(); n < w.hi; ++n) {
      Vector next = m * s;
      if (n <= f.hi()) next += split.stable_coords * f.col(n);
      s = std::move(next);
      u.col(n + 1) += split.stable_basis * s;
    }
  }

  if (split.rank_unstable() > 0) {
    const Matrix minv = unstable_inverse(split);
    Vector t = Vector::Zero(split.rank_unstable());
    for (Index n = f.hi(); n >= w.lo; --n) {
      Vector rhs = t;
      if (n >= f.lo()) rhs -= split.unstable_coords * f.col(n);
      t = minv * rhs;
      u.col(n) += split.unstable_basis * t;
    }
  }
  return u;
}

WindowedSequence apply_resolvent_frequency(const ResolventPlan& plan, const WindowedSequence& f,
                                           Index n_samples) {
  require_mode(plan, ResolventMode::frequency);
  require_dim(plan, f);
  const SpectralSplit& split = *plan.split;
  const Interval w = split_window(split, f.window(), plan.tail_cut);
  const Index needed = std::max(4 * f.width() + 2 * plan.tail_cut, 2 * w.width());
  if (n_samples == 0) {
    n_samples = 16;
    while (n_samples < needed) n_samples *= 2;
  } else if (n_samples < needed) {
    std::ostringstream msg;
    msg << "frequency resolvent needs >= " << needed << " samples, got " << n_samples;
    throw Error(ErrorCode::invalid_argument, msg.str());
  }

  CircleFunction g = ztransform(f, plan.rho, n_samples);
  const auto d = plan.op.dim();
  const Matrix id = Matrix::Identity(d, d);
  for (Index j = 0; j < n_samples; ++j) {
    const Complex z = g.node(j);
    g.samples.col(j) = (z * id - plan.op.matrix()).partialPivLu().solve(g.samples.col(j));
  }
  return inverse_ztransform(g, w);
}

WindowedSequence apply_resolvent(const ResolventPlan& plan, const WindowedSequence& f) {
  switch (plan.mode) {
    case ResolventMode::causal: return apply_resolvent_causal(plan, f);
    case ResolventMode::split: return apply_resolvent_split(plan, f);
    case ResolventMode::frequency: return apply_resolvent_frequency(plan, f);
  }
  throw Error(ErrorCode::invalid_argument, "unknown resolvent mode");
}

double equation_residual(const BoundedOperator& a, const WindowedSequence& u,
                         const WindowedSequence& f, double rho) {
  const WindowedSequence r = shift(u, 1) - apply_pointwise(a.matrix(), u) - f;
  return weighted_norm(r, {rho, Exponent::two});
}

CausalityVerdict causality_probe(const BoundedOperator& a, double rho, const Vector& x) {
  if (x.size() != a.dim()) throw Error(ErrorCode::dimension_mismatch, "probe vector and operator dimensions differ");
  const ResolventPlan plan = make_resolvent_plan(a, rho, ResolventMode::split);
  CausalityVerdict out;
  out.witness = apply_resolvent_split(plan, WindowedSequence::impulse(-1, x));
  out.is_causal = support_subset_geq(out.witness, 0);
  return out;
}

}  // namespace specseq
