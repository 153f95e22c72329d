// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracles.hpp"
#include "specseq/error.hpp"
#include "specseq/resolvent.hpp"

using namespace specseq;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::usage;
}

Vector scalar(Complex x) { return Vector::Constant(1, x); }

// Random matrix with no eigenvalue modulus within `gap` of rho.
Matrix gapped_matrix(Index d, double rho, double gap, oracle::Rng& rng) {
  for (;;) {
    const Matrix a = oracle::rand_mat_radius(d, oracle::rand_u(rng, 0.3, 2.5) * rho, rng);
    const Vector ev = oracle::eigenvalues(a);
    if ((ev.cwiseAbs().array() - rho).abs().minCoeff() >= gap) return a;
  }
}

}  // namespace

TEST_CASE("scalar causal resolvent") {
  const BoundedOperator a(Matrix::Constant(1, 1, 0.5));
  const ResolventPlan plan = make_resolvent_plan(a, 1.0, ResolventMode::causal);
  const WindowedSequence u = apply_resolvent(plan, WindowedSequence::impulse(-1, scalar(1.0)));
  CHECK(u.at(-1) == scalar(0.0));
  for (Index n = 0; n < 20; ++n) CHECK(std::abs(u.at(n)(0) - std::pow(0.5, n)) <= 1e-15);
  CHECK(code_of([&] { make_resolvent_plan(a, 0.4, ResolventMode::causal); }) == ErrorCode::not_causal_regime);
  CHECK(code_of([&] { make_resolvent_plan(a, 0.5, ResolventMode::causal); }) == ErrorCode::not_causal_regime);
}

TEST_CASE("scalar anticausal branch") {
  const BoundedOperator a(Matrix::Constant(1, 1, 2.0));
  const ResolventPlan plan = make_resolvent_plan(a, 1.0, ResolventMode::split);
  const WindowedSequence u = apply_resolvent(plan, WindowedSequence::impulse(-1, scalar(3.0)));
  for (Index n = -30; n <= -1; ++n) CHECK(std::abs(u.at(n)(0) + 3.0 * std::pow(2.0, n)) <= 1e-14);
  for (Index n = 0; n <= 5; ++n) CHECK(u.at(n).norm() == 0.0);
  CHECK(equation_residual(a, u, WindowedSequence::impulse(-1, scalar(3.0)), 1.0) <= 1e-11);
}

TEST_CASE("causality probe examples") {
  const Vector x = scalar(1.0);
  CHECK(!causality_probe(BoundedOperator(Matrix::Constant(1, 1, 2.0)), 1.0, x).is_causal);
  CHECK(causality_probe(BoundedOperator(Matrix::Constant(1, 1, 2.0)), 3.0, x).is_causal);
  CHECK(causality_probe(BoundedOperator(Matrix::Constant(1, 1, 0.5)), 1.0, x).is_causal);

  Vector e(2);
  e << 1.0, 1.0;
  const CausalityVerdict v = causality_probe(BoundedOperator::diagonal({0.5, 2.0}), 1.0, e);
  CHECK(!v.is_causal);
  CHECK(std::abs(v.witness.at(-1)(1) + 0.5) <= 1e-14);
  CHECK(v.witness.at(-1)(0) == 0.0);
}

TEST_CASE("causal resolvent matches the literal convolution sum") {
  oracle::Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const Index d = oracle::rand_i(rng, 1, 5);
    const Matrix a = oracle::rand_mat_radius(d, oracle::rand_u(rng, 0.2, 1.5), rng);
    const double rho = oracle::spectral_radius(a) + oracle::rand_u(rng, 0.3, 1.0);
    const WindowedSequence f = oracle::rand_seq(d, -3, oracle::rand_i(rng, -3, 6), rng);
    const ResolventPlan plan = make_resolvent_plan(BoundedOperator(a), rho, ResolventMode::causal);
    const WindowedSequence u = apply_resolvent(plan, f);
    CHECK(u.window() == Interval{f.lo(), f.hi() + plan.tail_cut});
    const WindowedSequence ref = oracle::causal_sum(a, f, u.lo(), std::min(u.hi(), f.hi() + 20));
    CHECK(max_relative_deviation(restrict_to(u, ref.window()), ref) <= 1e-10);
  }
}

TEST_CASE("split resolvent matches the literal dichotomy sums") {
  oracle::Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const Index d = oracle::rand_i(rng, 2, 5);
    const double rho = oracle::rand_u(rng, 0.5, 2.0);
    const Matrix a = gapped_matrix(d, rho, 0.25 * rho, rng);
    const Matrix p = oracle::eig_projector(a, rho);
    const Matrix q = Matrix::Identity(d, d) - p;
    const Matrix g = oracle::range_inverse(a, q);
    const WindowedSequence f = oracle::rand_seq(d, -2, 3, rng);
    const ResolventPlan plan = make_resolvent_plan(BoundedOperator(a), rho, ResolventMode::split);
    const WindowedSequence u = apply_resolvent(plan, f);
    const WindowedSequence ref = oracle::split_sum(a, p, q, g, f, f.lo() - 12, f.hi() + 12);
    CHECK(max_relative_deviation(restrict_to(u, ref.window()), ref) <= 1e-8);
  }
}

TEST_CASE("split pieces solve the restricted equations") {
  oracle::Rng rng(43);
  for (int t = 0; t < 10; ++t) {
    const Index d = oracle::rand_i(rng, 2, 5);
    const Matrix a = gapped_matrix(d, 1.0, 0.2, rng);
    const Matrix p = oracle::eig_projector(a, 1.0);
    const Matrix q = Matrix::Identity(d, d) - p;
    const WindowedSequence f = oracle::rand_seq(d, 0, 4, rng);
    const ResolventPlan plan = make_resolvent_plan(BoundedOperator(a), 1.0, ResolventMode::split);
    const WindowedSequence u = apply_resolvent(plan, f);
    const WindowedSequence pu = apply_pointwise(p, u);
    const WindowedSequence qu = apply_pointwise(q, u);
    CHECK(oracle::residual_sup(p * a * p, pu, apply_pointwise(p, f)) <= 1e-8);
    CHECK(oracle::residual_sup(q * a * q, qu, apply_pointwise(q, f)) <= 1e-8);
  }
}

TEST_CASE("all three modes agree where they overlap") {
  oracle::Rng rng(44);
  for (int t = 0; t < 15; ++t) {
    const Index d = oracle::rand_i(rng, 1, 6);
    const Matrix a = oracle::rand_mat_radius(d, oracle::rand_u(rng, 0.2, 1.2), rng);
    const double rho = oracle::spectral_radius(a) + oracle::rand_u(rng, 0.2, 0.8);
    const BoundedOperator op(a);
    const WindowedSequence f = oracle::rand_seq(d, -4, 8, rng);
    const WindowedSequence uc = apply_resolvent(make_resolvent_plan(op, rho, ResolventMode::causal), f);
    const WindowedSequence us = apply_resolvent(make_resolvent_plan(op, rho, ResolventMode::split), f);
    const WindowedSequence uf = apply_resolvent(make_resolvent_plan(op, rho, ResolventMode::frequency), f);
    CHECK(max_relative_deviation(uc, us) <= 1e-8);
    // FFT roundoff is uniform on the circle, so it is small in the weighted norm
    CHECK(weighted_norm(us - uf, {rho, Exponent::two}) <= 1e-10 * weighted_norm(us, {rho, Exponent::two}));
  }
  oracle::Rng rng2(45);
  for (int t = 0; t < 15; ++t) {
    const Index d = oracle::rand_i(rng2, 2, 6);
    const Matrix a = gapped_matrix(d, 1.0, 0.15, rng2);
    const BoundedOperator op(a);
    const WindowedSequence f = oracle::rand_seq(d, -4, 8, rng2);
    const WindowedSequence us = apply_resolvent(make_resolvent_plan(op, 1.0, ResolventMode::split), f);
    const WindowedSequence uf = apply_resolvent(make_resolvent_plan(op, 1.0, ResolventMode::frequency), f);
    CHECK(max_relative_deviation(us, uf) <= 1e-8);
  }
}

TEST_CASE("equation residual stays at the series tolerance") {
  oracle::Rng rng(46);
  for (int t = 0; t < 20; ++t) {
    const Index d = oracle::rand_i(rng, 1, 6);
    const double rho = oracle::rand_u(rng, 0.5, 2.0);
    const Matrix a = gapped_matrix(d, rho, 0.1 * rho, rng);
    const BoundedOperator op(a);
    const WindowedSequence f = oracle::rand_seq(d, -5, 5, rng);
    const double fn = weighted_norm(f, {rho, Exponent::two});
    for (ResolventMode mode : {ResolventMode::split, ResolventMode::frequency}) {
      const ResolventPlan plan = make_resolvent_plan(op, rho, mode);
      const WindowedSequence u = apply_resolvent(plan, f);
      CHECK(equation_residual(op, u, f, rho) <= 1e-8 * std::max(1.0, fn));
    }
  }
}

TEST_CASE("operator norm bound on the weighted space") {
  oracle::Rng rng(47);
  for (int t = 0; t < 15; ++t) {
    const Index d = oracle::rand_i(rng, 1, 4);
    const Matrix a = gapped_matrix(d, 1.0, 0.2, rng);
    const BoundedOperator op(a);
    // dense sampling of the circle; the sampled sup is a lower bound for the true sup
    double m = 0.0;
    for (int j = 0; j < 8192; ++j) {
      const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * j / 8192.0);
      m = std::max(m, oracle::norm2((z * Matrix::Identity(d, d) - a).inverse()));
    }
    const ResolventPlan plan = make_resolvent_plan(op, 1.0, ResolventMode::split);
    const WindowedSequence f = oracle::rand_seq(d, -6, 6, rng);
    const WindowedSequence u = apply_resolvent(plan, f);
    CHECK(weighted_norm(u, {1.0, Exponent::two}) <= m * weighted_norm(f, {1.0, Exponent::two}) * (1 + 1e-3));
  }
}

TEST_CASE("causality dichotomy on random operators") {
  oracle::Rng rng(48);
  int causal = 0;
  for (int t = 0; t < 30; ++t) {
    const Index d = oracle::rand_i(rng, 1, 5);
    const Matrix a = oracle::rand_mat_radius(d, oracle::rand_u(rng, 0.3, 3.0), rng);
    const Vector ev = oracle::eigenvalues(a);
    double rho = oracle::rand_u(rng, 0.2, 3.5);
    if ((ev.cwiseAbs().array() - rho).abs().minCoeff() < 0.1) continue;
    const bool expect = rho > oracle::spectral_radius(a);
    Vector x = oracle::rand_vec(d, rng);
    // probe along a generic direction; an unstable component always leaks to negative indices
    CHECK(causality_probe(BoundedOperator(a), rho, x).is_causal == expect);
    causal += expect ? 1 : 0;
  }
  CHECK(causal > 0);
}

TEST_CASE("plan and mode errors") {
  const BoundedOperator op = BoundedOperator::diagonal({0.5, 2.0});
  CHECK(code_of([&] { make_resolvent_plan(op, 1.0, ResolventMode::causal); }) == ErrorCode::not_causal_regime);
  CHECK(code_of([&] { make_resolvent_plan(op, -1.0, ResolventMode::split); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { make_resolvent_plan(op, 2.0, ResolventMode::split); }) == ErrorCode::spectrum_on_circle);
  const ResolventPlan plan = make_resolvent_plan(op, 1.0, ResolventMode::split);
  CHECK(code_of([&] { apply_resolvent(plan, WindowedSequence(3)); }) == ErrorCode::dimension_mismatch);
  CHECK(code_of([&] { apply_resolvent_frequency(plan, WindowedSequence(2)); }) == ErrorCode::invalid_argument);
  const ResolventPlan fp = make_resolvent_plan(op, 1.0, ResolventMode::frequency);
  CHECK(code_of([&] { apply_resolvent_frequency(fp, WindowedSequence(2), 16); }) == ErrorCode::invalid_argument);
  CHECK(parse_resolvent_mode("frequency") == ResolventMode::frequency);
  CHECK(code_of([] { parse_resolvent_mode("fourier"); }) == ErrorCode::invalid_argument);
}
