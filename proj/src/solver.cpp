// SPDX-License-Identifier: Apache-2.0
#include "specseq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "specseq/resolvent.hpp"

namespace specseq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Vector random_vector(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Vector x(d);
  for (Index i = 0; i < d; ++i) x(i) = Complex(n01(rng), n01(rng));
  return x;
}

WindowedSequence random_sequence(Index d, Interval w, double scale, std::mt19937_64& rng) {
  WindowedSequence u = WindowedSequence::zeros(d, w);
  for (Index n = w.lo; n <= w.hi; ++n) u.col(n) = scale * random_vector(d, rng);
  return u;
}

void require_ivp_inputs(const BoundedOperator& a, const StencilMap& f, const Vector& x, Index horizon) {
  if (f.dim() != a.dim() || x.size() != a.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "operator, stencil and initial value dimensions differ");
  }
  if (horizon < 0) throw Error(ErrorCode::invalid_argument, "horizon must be nonnegative");
  if (!f.causal()) {
    std::ostringstream msg;
    msg << "initial value problems need a causal F; stencil looks ahead by " << f.lookahead();
    throw Error(ErrorCode::causality_required, msg.str());
  }
  if (f.forcing() && !support_subset_geq(*f.forcing(), 0)) {
    throw Error(ErrorCode::invalid_argument, "forcing of an initial value problem must vanish on negative indices");
  }
}

// log-sum-exp of 2 * l over a range, skipping -inf.
double log_sum_sq(const std::vector<double>& l, std::size_t from, std::size_t to) {
  double top = kNegInf;
  for (std::size_t i = from; i < to; ++i) top = std::max(top, l[i]);
  if (top == kNegInf) return kNegInf;
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) {
    if (l[i] != kNegInf) s += std::exp(2.0 * (l[i] - top));
  }
  return 2.0 * top + std::log(s);
}

// log(|A^n x| rho^{-n}) for n = 0..h, renormalizing to stay in range.
std::vector<double> log_profile(const Matrix& a, const Vector& x, double rho, Index h) {
  std::vector<double> l(static_cast<std::size_t>(h + 1), kNegInf);
  Vector w = x;
  double logscale = 0.0;
  for (Index n = 0; n <= h; ++n) {
    if (n > 0) w = (a * w) / rho;
    const double nrm = w.norm();
    if (nrm == 0.0) break;
    l[static_cast<std::size_t>(n)] = logscale + std::log(nrm);
    if (nrm > 1e150 || nrm < 1e-150) {
      logscale += std::log(nrm);
      w /= nrm;
    }
  }
  return l;
}

}  // namespace

double ContractionMonitor::floor(double scale) {
  return 1e4 * std::numeric_limits<double>::epsilon() * std::max(scale, std::numeric_limits<double>::min());
}

void ContractionMonitor::record(double step, double scale) {
  const double fl = floor(scale);
  if (prev_ > fl && step > fl) ratios_.push_back(step / prev_);
  prev_ = step;
}

double ContractionMonitor::worst_ratio() const {
  return ratios_.empty() ? 0.0 : *std::max_element(ratios_.begin(), ratios_.end());
}

SolveReport solve_contraction(const StencilMap& f, Weight w, Interval window, SolveOptions opts) {
  if (window.hi < window.lo) throw Error(ErrorCode::invalid_argument, "empty solve window");
  if (!(opts.fp_tol > 0.0) || opts.max_iter < 1) throw Error(ErrorCode::invalid_argument, "bad solver tolerances");
  const double lip = f.lipschitz_bound(w.rho);
  if (!(lip < w.rho)) {
    std::ostringstream msg;
    msg << "Lipschitz bound " << lip << " is not below rho = " << w.rho;
    throw Error(ErrorCode::not_contractive, msg.str());
  }

  SolveReport rep;
  rep.theoretical_factor = lip / w.rho;
  WindowedSequence u = WindowedSequence::zeros(f.dim(), window);
  ContractionMonitor mon;
  for (int k = 1; k <= opts.max_iter; ++k) {
    WindowedSequence next = restrict_to(shift(f.apply(u), -1), window);
    const double step = weighted_norm(next - u, w);
    u = std::move(next);
    mon.record(step, weighted_norm(u, w));
    rep.iterations = k;
    rep.final_residual = step;
    if (step <= opts.fp_tol) {
      rep.converged = true;
      break;
    }
  }
  rep.solution = std::move(u);
  rep.ratios = mon.ratios();
  rep.contraction_estimate = mon.worst_ratio();
  if (!rep.converged) {
    std::ostringstream msg;
    msg << "no convergence after " << rep.iterations << " iterations (step " << rep.final_residual << ")";
    throw NoConvergence(msg.str(), std::move(rep));
  }
  return rep;
}

std::string_view to_string(IvpMethod m) {
  switch (m) {
    case IvpMethod::recursion: return "recursion";
    case IvpMethod::variation_of_constants: return "voc";
    case IvpMethod::impulse: return "impulse";
  }
  return "unknown";
}

IvpMethod parse_ivp_method(std::string_view name) {
  if (name == "recursion") return IvpMethod::recursion;
  if (name == "voc" || name == "variation_of_constants") return IvpMethod::variation_of_constants;
  if (name == "impulse") return IvpMethod::impulse;
  throw Error(ErrorCode::invalid_argument, "unknown IVP method '" + std::string(name) + "'");
}

double default_ivp_rho(const BoundedOperator& a) { return 1.5 * spectral_radius(a) + 0.5; }

SolveReport solve_ivp_impulse(const BoundedOperator& a, const StencilMap& f, const Vector& x, Index horizon,
                              IvpOptions opts) {
  require_ivp_inputs(a, f, x, horizon);
  const double rho = opts.rho > 0.0 ? opts.rho : default_ivp_rho(a);
  const ResolventPlan plan = make_resolvent_plan(a, rho, ResolventMode::causal);
  const double m_rho = circle_sup_resolvent(a, rho);
  const double lip = f.lipschitz_bound(rho);
  if (!(lip * m_rho < 1.0)) {
    std::ostringstream msg;
    msg << "impulse iteration is not a contraction: Lip(F) * M_rho = " << lip << " * " << m_rho << " >= 1";
    throw Error(ErrorCode::impulse_contraction_failure, msg.str());
  }

  const Interval window{-1, horizon};
  const Weight w{rho, Exponent::two};
  const WindowedSequence kick = WindowedSequence::impulse(-1, x);
  WindowedSequence u = WindowedSequence::zeros(a.dim(), window);
  SolveReport rep;
  rep.theoretical_factor = lip * m_rho;
  ContractionMonitor mon;
  for (int k = 1; k <= opts.max_iter; ++k) {
    const WindowedSequence g = restrict_to(f.apply(u) + kick, window);
    WindowedSequence next = restrict_to(apply_resolvent_causal(plan, g), window);
    const double step = weighted_norm(next - u, w);
    const double rel = max_relative_deviation(next, u);
    u = std::move(next);
    mon.record(step, weighted_norm(u, w));
    rep.iterations = k;
    rep.final_residual = step;
    if (step <= opts.fp_tol && rel <= opts.fp_tol) {
      rep.converged = true;
      break;
    }
  }
  rep.solution = std::move(u);
  rep.ratios = mon.ratios();
  rep.contraction_estimate = mon.worst_ratio();
  if (!rep.converged) {
    throw NoConvergence("impulse iteration did not converge", std::move(rep));
  }
  return rep;
}

WindowedSequence solve_ivp(const BoundedOperator& a, const StencilMap& f, const Vector& x, Index horizon,
                           IvpMethod method, IvpOptions opts) {
  require_ivp_inputs(a, f, x, horizon);
  const Matrix& am = a.matrix();
  const Index d = a.dim();

  switch (method) {
    case IvpMethod::recursion: {
      WindowedSequence u = WindowedSequence::zeros(d, {0, horizon});
      u.col(0) = x;
      for (Index n = 0; n < horizon; ++n) u.col(n + 1) = am * u.col(n) + f.evaluate_at(u, n);
      return u;
    }
    case IvpMethod::variation_of_constants: {
      std::vector<Matrix> pw{Matrix::Identity(d, d)};
      for (Index j = 1; j <= horizon; ++j) pw.push_back(pw.back() * am);
      WindowedSequence u = WindowedSequence::zeros(d, {0, horizon});
      Matrix g = Matrix::Zero(d, horizon + 1);
      u.col(0) = x;
      for (Index n = 1; n <= horizon; ++n) {
        g.col(n - 1) = f.evaluate_at(u, n - 1);
        Vector v = pw[static_cast<std::size_t>(n)] * x;
        for (Index k = 0; k < n; ++k) v += pw[static_cast<std::size_t>(n - 1 - k)] * g.col(k);
        u.col(n) = v;
      }
      return u;
    }
    case IvpMethod::impulse:
      return solve_ivp_impulse(a, f, x, horizon, opts).solution;
  }
  throw Error(ErrorCode::invalid_argument, "unknown IVP method");
}

std::string_view to_string(StabilityVerdict v) {
  return v == StabilityVerdict::exponentially_stable ? "exponentially_stable" : "not_stable";
}

StabilityReport stability_classify(const BoundedOperator& a, StabilityOptions opts) {
  if (opts.probes < 1 || opts.horizon < 2) throw Error(ErrorCode::invalid_argument, "need probes >= 1 and horizon >= 2");
  if (!(opts.tail_tol > 0.0 && opts.tail_tol < 1.0)) throw Error(ErrorCode::invalid_argument, "tail_tol must lie in (0, 1)");
  StabilityReport rep;
  rep.r = spectral_radius(a);
  if (std::abs(rep.r - 1.0) <= kGapTol) {
    std::ostringstream msg;
    msg << "spectral radius " << rep.r << " is within " << kGapTol << " of 1";
    throw Error(ErrorCode::indeterminate, msg.str());
  }
  const bool stable = rep.r < 1.0;
  rep.verdict = stable ? StabilityVerdict::exponentially_stable : StabilityVerdict::not_stable;
  rep.rho_star = 0.5 * (1.0 + rep.r);
  rep.probe_rho = stable ? rep.rho_star : 1.0;

  rep.horizon = opts.horizon;
  if (stable && rep.r > 0.0) {
    const double need = 4.0 * std::ceil(std::log(opts.tail_tol) / std::log(rep.r / rep.rho_star));
    rep.horizon = std::max<Index>(rep.horizon, static_cast<Index>(std::min(need, 65536.0)));
  }

  std::mt19937_64 rng(opts.seed);
  const auto h = static_cast<std::size_t>(rep.horizon);
  const std::size_t half = h / 2;
  rep.consistent = true;
  for (int p = 0; p < opts.probes; ++p) {
    const std::vector<double> l = log_profile(a.matrix(), random_vector(a.dim(), rng), rep.probe_rho, rep.horizon);
    ProbeEvidence ev;
    const double total = log_sum_sq(l, 0, h + 1);
    const double tail = log_sum_sq(l, half, h + 1);
    ev.tail_fraction = tail == kNegInf ? 0.0 : std::exp(0.5 * (tail - total));
    ev.decays = ev.tail_fraction <= opts.tail_tol;
    const double head_sup = *std::max_element(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(half));
    const double tail_sup = *std::max_element(l.begin() + static_cast<std::ptrdiff_t>(half), l.end());
    ev.bounded = tail_sup <= head_sup;
    rep.consistent = rep.consistent && ((ev.decays && ev.bounded) == stable);
    rep.probes.push_back(ev);
  }
  return rep;
}

double lipschitz_probe(const StencilMap& f, Weight w, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::invalid_argument, "trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(-3.0, 1.0);
  const Interval window{-8, 8};
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    const WindowedSequence u = random_sequence(f.dim(), window, std::pow(10.0, expo(rng)), rng);
    const WindowedSequence v = u + random_sequence(f.dim(), window, std::pow(10.0, expo(rng)), rng);
    const double den = weighted_norm(u - v, w);
    if (den == 0.0) continue;
    best = std::max(best, weighted_norm(f.apply(u) - f.apply(v), w) / den);
  }
  return best;
}

}  // namespace specseq
