// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracles.hpp"
#include "specseq/error.hpp"
#include "specseq/sequence.hpp"

using namespace specseq;

namespace {

Vector v2(Complex a, Complex b) {
  Vector v(2);
  v << a, b;
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

constexpr Exponent kAll[] = {Exponent::one, Exponent::two, Exponent::inf};
int as_int(Exponent p) { return p == Exponent::one ? 1 : p == Exponent::two ? 2 : 0; }

}  // namespace

TEST_CASE("windowed sequence basics") {
  const WindowedSequence z;
  CHECK(z.is_zero());
  CHECK(z.window() == Interval{0, 0});
  const WindowedSequence d = WindowedSequence::impulse(3, v2(1, 2));
  CHECK(d.at(3) == v2(1, 2));
  CHECK(d.at(4).isZero());
  CHECK(d.at(-100).isZero());

  Matrix bad = Matrix::Ones(2, 3);
  bad(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(WindowedSequence(0, bad), Error);
}

TEST_CASE("weighted norm examples") {
  const Vector x = v2(3, Complex(0, 4));
  for (double rho : {0.5, 1.0, 2.0}) {
    for (Exponent p : kAll) {
      for (Index k : {-3, 0, 4}) {
        CHECK(rel(weighted_norm(WindowedSequence::impulse(k, x), {rho, p}), 5.0 * std::pow(rho, -k)) <= 1e-14);
      }
      CHECK(weighted_norm(WindowedSequence(2), {rho, p}) == 0.0);
    }
  }
}

TEST_CASE("weighted norm matches direct summation") {
  oracle::Rng rng(21);
  for (int t = 0; t < 30; ++t) {
    const WindowedSequence u = oracle::rand_seq(oracle::rand_i(rng, 1, 4), -5, 5, rng);
    for (Exponent p : kAll) {
      CHECK(rel(weighted_norm(u, {1.3, p}), oracle::wnorm(u, 1.3, as_int(p))) <= 1e-12);
    }
  }
}

TEST_CASE("weighted norm reports overflow") {
  const WindowedSequence u = WindowedSequence::impulse(-400, v2(1, 0));
  CHECK_THROWS_WITH_AS(weighted_norm(u, {1e3, Exponent::two}), doctest::Contains("overflow"), Error);
  CHECK(std::isfinite(weighted_norm(WindowedSequence::impulse(-40, v2(1, 0)), {1e3, Exponent::two})));
}

TEST_CASE("shift examples and exact norm scaling") {
  const Vector x = v2(1, -1);
  CHECK(same_sequence(shift(WindowedSequence::impulse(0, x), 1), WindowedSequence::impulse(-1, x)));

  oracle::Rng rng(22);
  for (int t = 0; t < 50; ++t) {
    const WindowedSequence u = oracle::rand_seq(2, oracle::rand_i(rng, -6, 0), oracle::rand_i(rng, 0, 6), rng);
    const Index n = oracle::rand_i(rng, -5, 5);
    CHECK(same_sequence(shift(shift(u, n), -n), u));
    for (double rho : {0.5, 1.0, 2.0}) {
      for (Exponent p : kAll) {
        CHECK(rel(weighted_norm(shift(u, n), {rho, p}), std::pow(rho, n) * weighted_norm(u, {rho, p})) <= 1e-12);
      }
    }
  }
}

TEST_CASE("inner product") {
  const Vector e1 = v2(1, 0);
  const Vector e2 = v2(0, 1);
  CHECK(std::abs(inner_product(WindowedSequence::impulse(0, e1), WindowedSequence::impulse(0, e2), 1.0)) == 0.0);
  const Vector x = v2(Complex(1, 2), 3);
  CHECK(std::abs(inner_product(WindowedSequence::impulse(2, x), WindowedSequence::impulse(2, x), 1.5) -
                 14.0 * std::pow(1.5, -4)) <= 1e-14);

  oracle::Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const WindowedSequence u = oracle::rand_seq(3, -4, 3, rng);
    const WindowedSequence v = oracle::rand_seq(3, -2, 6, rng);
    const Complex ip = inner_product(u, v, 0.8);
    CHECK(std::abs(ip - oracle::inner(u, v, 0.8)) <= 1e-12 * std::abs(ip));
    CHECK(std::abs(inner_product(u, u, 0.8) - std::pow(weighted_norm(u, {0.8, Exponent::two}), 2)) <=
          1e-12 * std::abs(inner_product(u, u, 0.8)));
    CHECK(std::abs(inner_product(Complex(0, 1) * u, v, 0.8) - Complex(0, -1) * ip) <= 1e-12 * std::abs(ip));
  }
  CHECK_THROWS_AS(inner_product(WindowedSequence(2), WindowedSequence(3), 1.0), Error);
}

TEST_CASE("support with tolerance") {
  const auto s = support(WindowedSequence::impulse(-1, v2(1, 0)));
  REQUIRE(s);
  CHECK(*s == Interval{-1, -1});
  CHECK(!support(WindowedSequence(2)));

  Matrix m = Matrix::Zero(1, 5);
  m(0, 0) = 1e-15;
  m(0, 3) = 1.0;
  const WindowedSequence u(-3, m);
  CHECK(*support(u) == Interval{0, 0});
  CHECK(support_subset_geq(u, 0));
  CHECK(!support_subset_geq(u, 0, 0.0));
}

TEST_CASE("one-sided embedding is isometric") {
  const Vector x0 = v2(2, 1);
  CHECK(same_sequence(embed_one_sided(0, Matrix(x0)), WindowedSequence::impulse(0, x0)));
  CHECK(embed_one_sided(4, Matrix(2, 0)).is_zero());

  oracle::Rng rng(24);
  for (int t = 0; t < 20; ++t) {
    const Index a = oracle::rand_i(rng, -3, 3);
    const Matrix cols = oracle::rand_seq(2, 0, oracle::rand_i(rng, 0, 9), rng).values();
    for (Exponent p : kAll) {
      const Weight w{oracle::rand_u(rng, 0.5, 2.0), p};
      CHECK(rel(weighted_norm(embed_one_sided(a, cols), w), one_sided_norm(a, cols, w)) <= 1e-12);
    }
  }
}

TEST_CASE("scale of one-sided weighted spaces") {
  oracle::Rng rng(25);
  for (int t = 0; t < 30; ++t) {
    const Index a = oracle::rand_i(rng, 0, 4);
    const WindowedSequence u = oracle::rand_seq(2, a, a + oracle::rand_i(rng, 0, 20), rng);
    const double rho = oracle::rand_u(rng, 0.5, 2.0);
    const double eps = oracle::rand_u(rng, 0.05, 1.0);
    const double ninf = weighted_norm(u, {rho, Exponent::inf});
    const double n2 = weighted_norm(u, {rho, Exponent::two});
    const double n1 = weighted_norm(u, {rho, Exponent::one});
    CHECK(ninf <= n2 * (1 + 1e-14));
    CHECK(n2 <= n1 * (1 + 1e-14));
    const double c = std::pow(rho / (rho + eps), static_cast<double>(a)) * (rho + eps) / eps;
    CHECK(weighted_norm(u, {rho + eps, Exponent::one}) <= c * ninf * (1 + 1e-14));
  }
}

TEST_CASE("canonical form") {
  Matrix m = Matrix::Zero(1, 6);
  m(0, 2) = 1.0;
  m(0, 3) = 2.0;
  const WindowedSequence u(-2, m);
  const WindowedSequence c = u.canonical();
  CHECK(c.window() == Interval{0, 1});
  CHECK(same_sequence(c, u));
  CHECK(c.canonical().window() == c.window());
  CHECK(c.canonical().values() == c.values());
  const WindowedSequence z = WindowedSequence::zeros(2, {-4, 7}).canonical();
  CHECK(z.window() == Interval{0, 0});
  CHECK(z.is_zero());
}

TEST_CASE("restriction, cut-off and arithmetic keep exact windows") {
  oracle::Rng rng(26);
  const WindowedSequence u = oracle::rand_seq(2, -3, 4, rng);
  const WindowedSequence r = restrict_to(u, {-1, 10});
  CHECK(r.window() == Interval{-1, 10});
  CHECK(r.at(-2).isZero());
  CHECK(r.at(4) == u.at(4));
  const WindowedSequence c = cut_below(u, 0);
  CHECK(support_subset_geq(c, 0, 0.0));
  CHECK(c.at(2) == u.at(2));
  const WindowedSequence s = u + shift(u, 5);
  CHECK(s.window() == Interval{-8, 4});
  CHECK(max_abs_deviation(s - shift(u, 5), u) <= 1e-15);
}
