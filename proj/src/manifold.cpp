// SPDX-License-Identifier: Apache-2.0
#include "specseq/manifold.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "specseq/solver.hpp"

namespace specseq {

namespace {

constexpr double kRangeTol = 1e-8;
constexpr double kOrbitDecay = 1e-6;

double stall_floor(double scale) {
  return 256.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
}

WindowedSequence linear_profile(const ManifoldProblem& prob, const Vector& xi) {
  const SpectralSplit& s = prob.split();
  WindowedSequence u = WindowedSequence::zeros(prob.a.dim(), {0, prob.window});
  if (s.rank_stable == 0) return u;
  Vector c = s.stable_coords * xi;
  for (Index n = 0; n <= prob.window; ++n) {
    u.col(n) = s.stable_basis * c;
    c = s.stable_block * c;
  }
  return u;
}

}  // namespace

ManifoldProblem make_manifold_problem(const BoundedOperator& a, const StencilMap& f, ManifoldOptions opts) {
  if (f.dim() != a.dim()) throw Error(ErrorCode::dimension_mismatch, "operator and stencil dimensions differ");
  if (!is_hyperbolic(a)) throw Error(ErrorCode::not_hyperbolic, "A has spectrum on the unit circle");
  if (!f.causal()) throw Error(ErrorCode::causality_required, "stable manifold needs a causal F");
  if (!f.vanishes_at_zero()) throw Error(ErrorCode::invalid_argument, "stable manifold needs F(0) = 0");
  if (!(opts.fp_tol > 0.0) || opts.max_iter < 1) throw Error(ErrorCode::invalid_argument, "bad solver tolerances");

  const double r = spectral_radius(a);
  if (r < 1.0) {
    throw Error(ErrorCode::trivial_manifold,
                "r(A) < 1: every orbit decays, the stable manifold is the whole space and Q = 0");
  }

  SpectralSplit split = riesz_split(a, 1.0, opts.quad_points);
  ManifoldProblem prob{a, f, make_split_plan(a, std::move(split), opts.series_tol)};
  prob.rho = opts.rho > 0.0 ? opts.rho : r + 0.5;
  if (!(prob.rho > r + kGapTol)) {
    std::ostringstream msg;
    msg << "outer weight rho = " << prob.rho << " must exceed r(A) = " << r;
    throw Error(ErrorCode::not_causal_regime, msg.str());
  }
  prob.m_one = circle_sup_resolvent(a, 1.0);
  prob.m_rho = circle_sup_resolvent(a, prob.rho);
  prob.lip_one = f.lipschitz_bound(1.0);
  prob.lip_rho = f.lipschitz_bound(prob.rho);
  if (!(prob.lip_one * prob.m_one < 1.0) || !(prob.lip_rho * prob.m_rho < 1.0)) {
    std::ostringstream msg;
    msg << "F is not admissible: Lip_1 * M_1 = " << prob.lip_one * prob.m_one
        << ", Lip_rho * M_rho = " << prob.lip_rho * prob.m_rho << " (both must be < 1)";
    throw Error(ErrorCode::not_admissible, msg.str());
  }
  prob.window = opts.window > 0 ? opts.window : std::max<Index>(2 * prob.plan.tail_cut, 64);
  prob.fp_tol = opts.fp_tol;
  prob.max_iter = opts.max_iter;
  return prob;
}

WindowedSequence lp_apply(const ManifoldProblem& prob, const Vector& xi, const WindowedSequence& u) {
  if (xi.size() != prob.a.dim()) throw Error(ErrorCode::dimension_mismatch, "xi has the wrong dimension");
  const double off = (prob.split().proj_unstable * xi).norm();
  if (off > kRangeTol * std::max(1.0, xi.norm())) {
    std::ostringstream msg;
    msg << "xi is not in range(P): |Q xi| = " << off;
    throw Error(ErrorCode::range_violation, msg.str());
  }
  const WindowedSequence g = prob.f.apply(u) + WindowedSequence::impulse(-1, xi);
  return restrict_to(apply_resolvent_split(prob.plan, g), {0, prob.window});
}

CharacterizationDefects characterization_defects(const ManifoldProblem& prob, const Vector& xi,
                                                 const WindowedSequence& u) {
  const SpectralSplit& s = prob.split();
  const Matrix& p = s.proj_stable;
  const Matrix& q = s.proj_unstable;
  const Matrix pap = p * prob.a.matrix() * p;
  const Matrix ginv = (q * prob.a.matrix() * q + p).fullPivLu().solve(q);
  const WindowedSequence fu = prob.f.apply(cut_below(u, 0));

  CharacterizationDefects out;
  Vector acc = xi;
  for (Index n = 0; n <= u.hi(); ++n) {
    out.stable = std::max(out.stable, (p * u.at(n) - acc).norm());
    acc = pap * acc + p * fu.at(n);
  }
  Vector tail = Vector::Zero(u.dim());
  for (Index n = std::max(fu.hi(), u.hi()); n >= 0; --n) {
    tail = ginv * (tail - q * fu.at(n));
    if (n <= u.hi()) out.unstable = std::max(out.unstable, (q * u.at(n) - tail).norm());
  }
  out.eta_series = tail;
  return out;
}

ManifoldPoint lp_fixed_point(const ManifoldProblem& prob, const Vector& xi) {
  ManifoldPoint pt;
  pt.xi = xi;
  pt.theoretical_factor = prob.m_one * prob.lip_one;
  const Weight w{1.0, Exponent::two};
  WindowedSequence u = linear_profile(prob, xi);
  ContractionMonitor mon;
  double prev = std::numeric_limits<double>::infinity();
  bool done = false;
  for (int k = 1; k <= prob.max_iter && !done; ++k) {
    WindowedSequence next = lp_apply(prob, xi, u);
    const double step = weighted_norm(next - u, w);
    u = std::move(next);
    const double scale = weighted_norm(u, w);
    mon.record(step, scale);
    pt.iterations = k;
    pt.residual = step;
    done = step <= prob.fp_tol || (step <= stall_floor(scale) && step >= 0.5 * prev);
    prev = step;
  }
  pt.ratios = mon.ratios();
  pt.contraction_estimate = mon.worst_ratio();
  if (!done) {
    std::ostringstream msg;
    msg << "Lyapunov-Perron iteration stalled at step " << pt.residual << " after " << pt.iterations
        << " iterations";
    SolveReport rep;
    rep.solution = u;
    rep.iterations = pt.iterations;
    rep.final_residual = pt.residual;
    rep.contraction_estimate = pt.contraction_estimate;
    rep.theoretical_factor = pt.theoretical_factor;
    rep.ratios = pt.ratios;
    throw NoConvergence(msg.str(), std::move(rep));
  }
  pt.defects = characterization_defects(prob, xi, u);
  pt.eta = prob.split().proj_unstable * u.col(0);
  pt.orbit = std::move(u);
  return pt;
}

ManifoldResult stable_manifold_point(const ManifoldProblem& prob, const Vector& xi) {
  ManifoldResult res;
  res.point = lp_fixed_point(prob, xi);
  res.eta = res.point.eta;
  res.eta_series_defect = (res.eta - res.point.defects.eta_series).norm();

  const WindowedSequence& t = res.point.orbit;
  const Vector x = xi + res.eta;
  const double x_norm = x.norm();
  Index stop = prob.window;
  for (Index n = 0; n <= prob.window; ++n) {
    if (t.col(n).norm() <= kOrbitDecay * x_norm) {
      stop = n;
      break;
    }
  }
  res.agreement_horizon = stop;
  const WindowedSequence s = solve_ivp(prob.a, prob.f, x, stop, IvpMethod::recursion);
  for (Index n = 0; n <= stop; ++n) res.orbit_agreement = std::max(res.orbit_agreement, (s.col(n) - t.col(n)).norm());

  const double t0 = t.col(0).norm();
  const double tn = t.col(stop).norm();
  if (stop > 0 && t0 > 0.0 && tn > 0.0) {
    res.point.decay_rate_estimate = std::pow(tn / t0, 1.0 / static_cast<double>(stop));
  }
  return res;
}

int sweep_thread_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPECSEQ_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<long>(n, cap);
  }
  return std::max(1, n);
}

std::vector<SweepRow> manifold_sweep(const ManifoldProblem& prob, const std::vector<Vector>& grid, int threads) {
  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      SweepRow& row = rows[i];
      row.xi = grid[i];
      try {
        row.result = stable_manifold_point(prob, grid[i]);
      } catch (const Error& e) {
        row.error_code = e.code();
        row.error_message = e.what();
      }
    }
  };
  const auto n = static_cast<std::size_t>(sweep_thread_count(threads));
  std::vector<std::jthread> pool;
  for (std::size_t k = 1; k < std::min(n, grid.size()); ++k) pool.emplace_back(worker);
  worker();
  return rows;
}

bool spectrum_escape_check(const BoundedOperator& a, const Vector& x, Index horizon) {
  if (x.size() != a.dim()) throw Error(ErrorCode::dimension_mismatch, "x has the wrong dimension");
  if (horizon < 2) throw Error(ErrorCode::invalid_argument, "horizon must be >= 2");
  const Vector& ev = a.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) {
    if (!(std::abs(ev(i)) > 1.0 + kGapTol)) {
      throw Error(ErrorCode::invalid_argument, "escape check needs every eigenvalue modulus above 1");
    }
  }
  const double x_norm = x.norm();
  if (x_norm <= kSuppTol) return true;

  // Track log|A^m x| with periodic renormalization.
  Vector w = x / x_norm;
  double logscale = 0.0;
  for (Index m = 1; m <= horizon; ++m) {
    w = a.matrix() * w;
    const double nrm = w.norm();
    if (nrm == 0.0) return false;
    if (m >= horizon / 2 && logscale + std::log(nrm) < 0.0) return false;
    logscale += std::log(nrm);
    w /= nrm;
  }
  return true;
}

}  // namespace specseq
