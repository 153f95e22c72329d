// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "specseq/operator.hpp"

namespace specseq {

using Index = Eigen::Index;

/// Absolute threshold under which an entry does not count towards the support.
inline constexpr double kSuppTol = 1e-12;

/// Closed integer interval [lo, hi].
struct Interval {
  Index lo = 0;
  Index hi = 0;

  Index width() const { return hi - lo + 1; }
  bool contains(Index n) const { return lo <= n && n <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finitely supported two-sided sequence Z -> C^d. Column n - lo of values()
/// holds u_n; every index outside [lo, hi] is zero.
///
/// Windows are kept exactly as produced. canonical() trims exactly-zero edge
/// columns; the zero sequence canonicalizes to a single zero column at 0.
class WindowedSequence {
 public:
  explicit WindowedSequence(Index dim = 1);
  WindowedSequence(Index lo, Matrix values);

  static WindowedSequence zero(Index dim) { return WindowedSequence(dim); }
  static WindowedSequence impulse(Index k, const Vector& x);
  static WindowedSequence zeros(Index dim, Interval window);

  Index dim() const { return values_.rows(); }
  Index lo() const { return lo_; }
  Index hi() const { return lo_ + values_.cols() - 1; }
  Index width() const { return values_.cols(); }
  Interval window() const { return {lo(), hi()}; }

  const Matrix& values() const { return values_; }
  Matrix& values() { return values_; }

  /// u_n, zero outside the window.
  Vector at(Index n) const;
  auto col(Index n) { return values_.col(n - lo_); }
  auto col(Index n) const { return values_.col(n - lo_); }

  bool is_zero() const { return values_.isZero(0.0); }
  WindowedSequence canonical() const;

 private:
  Index lo_ = 0;
  Matrix values_;
};

enum class Exponent { one, two, inf };

struct Weight {
  double rho = 1.0;
  Exponent p = Exponent::two;
};

/// (sum_k |u_k|^p rho^{-pk})^{1/p}, or sup_k |u_k| rho^{-k} for p = inf.
/// Evaluated with log-scaled weights; throws overflow if the value itself is
/// not representable.
double weighted_norm(const WindowedSequence& u, Weight w);

/// (tau^n u)_k = u_{k+n}.
WindowedSequence shift(const WindowedSequence& u, Index n);

/// sum_k <u_k, v_k> rho^{-2k}, conjugate-linear in u.
Complex inner_product(const WindowedSequence& u, const WindowedSequence& v, double rho);

/// Minimal window holding every entry with |u_k| > tol; nullopt when empty.
std::optional<Interval> support(const WindowedSequence& u, double tol = kSuppTol);

/// spt u within Z_{>= a} up to tol.
bool support_subset_geq(const WindowedSequence& u, Index a, double tol = kSuppTol);

/// Zero extension of the one-sided sequence whose entry k >= a is column k - a.
WindowedSequence embed_one_sided(Index a, const Matrix& columns);

/// Weighted norm of a one-sided sequence, summed over k >= a only.
double one_sided_norm(Index a, const Matrix& columns, Weight w);

/// Restriction to `window` (entries outside become zero); the result has
/// exactly that window.
WindowedSequence restrict_to(const WindowedSequence& u, Interval window);

/// Multiply by chi_{Z >= a}.
WindowedSequence cut_below(const WindowedSequence& u, Index a);

/// Pointwise action of a d' x d matrix.
WindowedSequence apply_pointwise(const Matrix& m, const WindowedSequence& u);

WindowedSequence operator+(const WindowedSequence& u, const WindowedSequence& v);
WindowedSequence operator-(const WindowedSequence& u, const WindowedSequence& v);
WindowedSequence operator*(Complex s, const WindowedSequence& u);

/// sup_k |u_k - v_k|.
double max_abs_deviation(const WindowedSequence& u, const WindowedSequence& v);

/// sup_k |u_k - v_k| / max(floor, |u_k|); tolerant of exponential growth.
double max_relative_deviation(const WindowedSequence& u, const WindowedSequence& v,
                              double floor = 1.0);

/// Equality as functions on Z (windows may differ).
bool same_sequence(const WindowedSequence& u, const WindowedSequence& v, double tol = 0.0);

}  // namespace specseq
