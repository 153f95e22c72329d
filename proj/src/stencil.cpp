// SPDX-License-Identifier: Apache-2.0
#include "specseq/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "specseq/error.hpp"

namespace specseq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Complex saturate(Complex z) { return z / std::sqrt(1.0 + std::norm(z)); }

Complex clip(Complex z, double r) {
  const double m = std::abs(z);
  return m <= r ? z : z * (r / m);
}

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

void require_square(const Matrix& m, Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream msg;
    msg << what << " must be " << dim << "x" << dim << ", got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
  if (!m.allFinite()) throw Error(ErrorCode::non_finite, std::string(what) + " has NaN or Inf entries");
}

void validate(const Kernel& k, Index dim) {
  std::visit(overloaded{
                 [](const ZeroKernel&) {},
                 [dim](const LinearKernel& l) { require_square(l.b, dim, "linear kernel matrix"); },
                 [dim](const SaturationKernel& s) {
                   if (!std::isfinite(s.eps) || s.eps < 0.0) {
                     throw Error(ErrorCode::invalid_argument, "saturation eps must be finite and >= 0");
                   }
                   require_square(s.coupling, dim, "saturation coupling");
                 },
                 [](const ClippedPolynomialKernel& p) {
                   if (!(p.clip_radius > 0.0) || !std::isfinite(p.clip_radius)) {
                     throw Error(ErrorCode::invalid_argument, "clip radius must be positive and finite");
                   }
                   if (!p.coeffs.empty() && p.coeffs.front() != Complex(0.0)) {
                     throw Error(ErrorCode::invalid_argument, "polynomial kernel needs coeffs[0] = 0");
                   }
                   for (const Complex& c : p.coeffs) {
                     if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                       throw Error(ErrorCode::non_finite, "polynomial coefficient is not finite");
                     }
                   }
                 },
             },
             k);
}

}  // namespace

std::string_view kernel_name(const Kernel& k) {
  return std::visit(overloaded{
                        [](const ZeroKernel&) -> std::string_view { return "zero"; },
                        [](const LinearKernel&) -> std::string_view { return "linear"; },
                        [](const SaturationKernel&) -> std::string_view { return "saturation"; },
                        [](const ClippedPolynomialKernel&) -> std::string_view { return "polynomial_clipped"; },
                    },
                    k);
}

Vector evaluate_kernel(const Kernel& k, const Vector& w) {
  return std::visit(overloaded{
                        [&](const ZeroKernel&) -> Vector { return Vector::Zero(w.size()); },
                        [&](const LinearKernel& l) -> Vector { return l.b * w; },
                        [&](const SaturationKernel& s) -> Vector {
                          return s.eps * (s.coupling * w.unaryExpr(&saturate));
                        },
                        [&](const ClippedPolynomialKernel& p) -> Vector {
                          return w.unaryExpr([&](Complex z) { return horner(p.coeffs, clip(z, p.clip_radius)); });
                        },
                    },
                    k);
}

double kernel_lipschitz(const Kernel& k) {
  return std::visit(overloaded{
                        [](const ZeroKernel&) { return 0.0; },
                        [](const LinearKernel& l) { return operator_norm(l.b); },
                        [](const SaturationKernel& s) { return s.eps * operator_norm(s.coupling); },
                        [](const ClippedPolynomialKernel& p) {
                          double acc = 0.0;
                          for (std::size_t j = 1; j < p.coeffs.size(); ++j) {
                            acc += static_cast<double>(j) * std::abs(p.coeffs[j]) *
                                   std::pow(p.clip_radius, static_cast<double>(j - 1));
                          }
                          return acc;
                        },
                    },
                    k);
}

StencilMap::StencilMap(Index dim, std::vector<StencilTerm> terms, std::optional<WindowedSequence> forcing)
    : dim_(dim), terms_(std::move(terms)), forcing_(std::move(forcing)) {
  if (dim_ < 1) throw Error(ErrorCode::invalid_argument, "stencil dimension must be positive");
  for (const auto& t : terms_) validate(t.kernel, dim_);
  if (forcing_ && forcing_->dim() != dim_) {
    throw Error(ErrorCode::dimension_mismatch, "forcing and stencil dimensions differ");
  }
}

StencilMap StencilMap::zero(Index dim) { return StencilMap(dim, {}); }

StencilMap StencilMap::linear(Matrix b, Index offset) {
  const Index d = b.rows();
  return StencilMap(d, {{offset, LinearKernel{std::move(b)}}});
}

StencilMap StencilMap::saturation(Index dim, double eps, std::optional<Matrix> coupling) {
  Matrix c = coupling ? *coupling : Matrix::Ones(dim, dim);
  return StencilMap(dim, {{0, SaturationKernel{eps, std::move(c)}}});
}

StencilMap StencilMap::clipped_polynomial(Index dim, std::vector<Complex> coeffs, double clip_radius,
                                          Index offset) {
  return StencilMap(dim, {{offset, ClippedPolynomialKernel{std::move(coeffs), clip_radius}}});
}

StencilMap StencilMap::implicit_euler(Index dim, double h, std::string_view f_name) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::invalid_argument, "step h must be positive");
  const Matrix id = Matrix::Identity(dim, dim);
  std::vector<StencilTerm> terms{{0, LinearKernel{id}}};
  if (f_name == "neg_identity") {
    terms.push_back({1, LinearKernel{-h * id}});
  } else if (f_name == "neg_saturation") {
    terms.push_back({1, SaturationKernel{h, -id}});
  } else if (f_name != "zero") {
    throw Error(ErrorCode::invalid_argument, "unknown implicit Euler right-hand side '" + std::string(f_name) + "'");
  }
  return StencilMap(dim, std::move(terms));
}

StencilMap StencilMap::with_forcing(WindowedSequence forcing) const {
  return StencilMap(dim_, terms_, std::move(forcing));
}

Index StencilMap::memory() const {
  Index m = 0;
  for (const auto& t : terms_) m = std::max(m, -t.offset);
  return m;
}

Index StencilMap::lookahead() const {
  Index r = 0;
  for (const auto& t : terms_) r = std::max(r, t.offset);
  return r;
}

bool StencilMap::vanishes_at_zero() const { return !forcing_ || forcing_->is_zero(); }

double StencilMap::lipschitz_bound(double rho) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += kernel_lipschitz(t.kernel) * std::pow(rho, static_cast<double>(t.offset));
  return acc;
}

Vector StencilMap::evaluate_at(const WindowedSequence& u, Index n) const {
  if (u.dim() != dim_) throw Error(ErrorCode::dimension_mismatch, "sequence and stencil dimensions differ");
  Vector out = forcing_ ? forcing_->at(n) : Vector::Zero(dim_);
  for (const auto& t : terms_) {
    const Index k = n + t.offset;
    if (k >= u.lo() && k <= u.hi()) out += evaluate_kernel(t.kernel, u.col(k));
  }
  return out;
}

WindowedSequence StencilMap::apply(const WindowedSequence& u) const {
  if (u.dim() != dim_) throw Error(ErrorCode::dimension_mismatch, "sequence and stencil dimensions differ");
  WindowedSequence out = WindowedSequence::zeros(dim_, {u.lo() - lookahead(), u.hi() + memory()});
  for (const auto& t : terms_) {
    if (const auto* lin = std::get_if<LinearKernel>(&t.kernel)) {
      out.values().middleCols(u.lo() - t.offset - out.lo(), u.width()) += lin->b * u.values();
      continue;
    }
    if (std::holds_alternative<ZeroKernel>(t.kernel)) continue;
    for (Index k = u.lo(); k <= u.hi(); ++k) out.col(k - t.offset) += evaluate_kernel(t.kernel, u.col(k));
  }
  if (forcing_) return out + *forcing_;
  return out;
}

}  // namespace specseq
