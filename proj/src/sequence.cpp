// SPDX-License-Identifier: Apache-2.0
#include "specseq/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "specseq/error.hpp"

namespace specseq {

namespace {

void require_same_dim(const WindowedSequence& u, const WindowedSequence& v) {
  if (u.dim() != v.dim()) {
    std::ostringstream msg;
    msg << "sequence dimensions differ: " << u.dim() << " vs " << v.dim();
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
}

Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

WindowedSequence widen(const WindowedSequence& u, Interval window) {
  WindowedSequence out = WindowedSequence::zeros(u.dim(), window);
  out.values().middleCols(u.lo() - window.lo, u.width()) = u.values();
  return out;
}

}  // namespace

WindowedSequence::WindowedSequence(Index dim) : lo_(0), values_(Matrix::Zero(dim, 1)) {
  if (dim < 1) throw Error(ErrorCode::invalid_argument, "sequence dimension must be positive");
}

WindowedSequence::WindowedSequence(Index lo, Matrix values) : lo_(lo), values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw Error(ErrorCode::invalid_argument, "sequence needs a positive dimension and a non-empty window");
  }
  if (!values_.allFinite()) throw Error(ErrorCode::non_finite, "sequence has NaN or Inf entries");
}

WindowedSequence WindowedSequence::impulse(Index k, const Vector& x) {
  return WindowedSequence(k, Matrix(x));
}

WindowedSequence WindowedSequence::zeros(Index dim, Interval window) {
  if (window.hi < window.lo) throw Error(ErrorCode::invalid_argument, "empty window");
  return WindowedSequence(window.lo, Matrix::Zero(dim, window.width()));
}

Vector WindowedSequence::at(Index n) const {
  if (n < lo() || n > hi()) return Vector::Zero(dim());
  return values_.col(n - lo_);
}

WindowedSequence WindowedSequence::canonical() const {
  Index first = 0;
  Index last = width() - 1;
  while (first <= last && values_.col(first).isZero(0.0)) ++first;
  if (first > last) return WindowedSequence(dim());
  while (values_.col(last).isZero(0.0)) --last;
  return WindowedSequence(lo_ + first, values_.middleCols(first, last - first + 1));
}

double weighted_norm(const WindowedSequence& u, Weight w) {
  if (!(w.rho > 0.0) || !std::isfinite(w.rho)) {
    throw Error(ErrorCode::invalid_argument, "weight rho must be positive and finite");
  }
  const double log_rho = std::log(w.rho);
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(u.width()));
  for (Index n = u.lo(); n <= u.hi(); ++n) {
    const double mag = u.col(n).norm();
    if (mag > 0.0) logs.push_back(std::log(mag) - static_cast<double>(n) * log_rho);
  }
  if (logs.empty()) return 0.0;
  const double top = *std::max_element(logs.begin(), logs.end());
  double result = 0.0;
  switch (w.p) {
    case Exponent::inf:
      result = std::exp(top);
      break;
    case Exponent::one: {
      double s = 0.0;
      for (double l : logs) s += std::exp(l - top);
      result = std::exp(top) * s;
      break;
    }
    case Exponent::two: {
      double s = 0.0;
      for (double l : logs) s += std::exp(2.0 * (l - top));
      result = std::exp(top) * std::sqrt(s);
      break;
    }
  }
  if (!std::isfinite(result)) {
    std::ostringstream msg;
    msg << "weighted norm overflows (log magnitude " << top << ")";
    throw Error(ErrorCode::overflow, msg.str());
  }
  return result;
}

WindowedSequence shift(const WindowedSequence& u, Index n) {
  return WindowedSequence(u.lo() - n, u.values());
}

Complex inner_product(const WindowedSequence& u, const WindowedSequence& v, double rho) {
  require_same_dim(u, v);
  const Index lo = std::max(u.lo(), v.lo());
  const Index hi = std::min(u.hi(), v.hi());
  Complex acc = 0.0;
  for (Index n = lo; n <= hi; ++n) {
    acc += u.col(n).dot(v.col(n)) * std::pow(rho, -2.0 * static_cast<double>(n));
  }
  return acc;
}

std::optional<Interval> support(const WindowedSequence& u, double tol) {
  std::optional<Interval> out;
  for (Index n = u.lo(); n <= u.hi(); ++n) {
    if (u.col(n).norm() > tol) {
      if (!out) out = Interval{n, n};
      out->hi = n;
    }
  }
  return out;
}

bool support_subset_geq(const WindowedSequence& u, Index a, double tol) {
  const auto s = support(u, tol);
  return !s || s->lo >= a;
}

WindowedSequence embed_one_sided(Index a, const Matrix& columns) {
  if (columns.cols() == 0) return WindowedSequence(columns.rows());
  return WindowedSequence(a, columns);
}

double one_sided_norm(Index a, const Matrix& columns, Weight w) {
  double acc = 0.0;
  for (Index j = 0; j < columns.cols(); ++j) {
    const double term = columns.col(j).norm() * std::pow(w.rho, -static_cast<double>(a + j));
    switch (w.p) {
      case Exponent::inf: acc = std::max(acc, term); break;
      case Exponent::one: acc += term; break;
      case Exponent::two: acc += term * term; break;
    }
  }
  return w.p == Exponent::two ? std::sqrt(acc) : acc;
}

WindowedSequence restrict_to(const WindowedSequence& u, Interval window) {
  WindowedSequence out = WindowedSequence::zeros(u.dim(), window);
  const Index lo = std::max(u.lo(), window.lo);
  const Index hi = std::min(u.hi(), window.hi);
  if (lo <= hi) out.values().middleCols(lo - window.lo, hi - lo + 1) = u.values().middleCols(lo - u.lo(), hi - lo + 1);
  return out;
}

WindowedSequence cut_below(const WindowedSequence& u, Index a) {
  if (u.lo() >= a) return u;
  if (u.hi() < a) return WindowedSequence::zeros(u.dim(), {a, a});
  return restrict_to(u, {a, u.hi()});
}

WindowedSequence apply_pointwise(const Matrix& m, const WindowedSequence& u) {
  if (m.cols() != u.dim()) throw Error(ErrorCode::dimension_mismatch, "matrix/sequence dimension mismatch");
  return WindowedSequence(u.lo(), m * u.values());
}

WindowedSequence operator+(const WindowedSequence& u, const WindowedSequence& v) {
  require_same_dim(u, v);
  const Interval w = hull(u.window(), v.window());
  WindowedSequence out = widen(u, w);
  out.values().middleCols(v.lo() - w.lo, v.width()) += v.values();
  return out;
}

WindowedSequence operator-(const WindowedSequence& u, const WindowedSequence& v) {
  return u + Complex(-1.0) * v;
}

WindowedSequence operator*(Complex s, const WindowedSequence& u) {
  return WindowedSequence(u.lo(), s * u.values());
}

double max_abs_deviation(const WindowedSequence& u, const WindowedSequence& v) {
  const WindowedSequence d = u - v;
  return d.values().colwise().norm().maxCoeff();
}

double max_relative_deviation(const WindowedSequence& u, const WindowedSequence& v, double floor) {
  require_same_dim(u, v);
  const Interval w = hull(u.window(), v.window());
  double worst = 0.0;
  for (Index n = w.lo; n <= w.hi; ++n) {
    const Vector a = u.at(n);
    const Vector b = v.at(n);
    worst = std::max(worst, (a - b).norm() / std::max(floor, a.norm()));
  }
  return worst;
}

bool same_sequence(const WindowedSequence& u, const WindowedSequence& v, double tol) {
  if (u.dim() != v.dim()) return false;
  return max_abs_deviation(u, v) <= tol;
}

}  // namespace specseq
