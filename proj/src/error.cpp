// SPDX-License-Identifier: Apache-2.0
#include "specseq/error.hpp"

namespace specseq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "usage";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::eigen_solver_failed: return "eigen_solver_failed";
    case ErrorCode::spectrum_hit: return "spectrum_hit";
    case ErrorCode::spectrum_on_circle: return "spectrum_on_circle";
    case ErrorCode::quadrature_not_converged: return "quadrature_not_converged";
    case ErrorCode::indeterminate: return "indeterminate";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::aliasing: return "aliasing";
    case ErrorCode::window_too_wide: return "window_too_wide";
    case ErrorCode::not_causal_regime: return "not_causal_regime";
    case ErrorCode::split_missing: return "split_missing";
    case ErrorCode::internal_inconsistency: return "internal_inconsistency";
    case ErrorCode::tail_too_long: return "tail_too_long";
    case ErrorCode::not_contractive: return "not_contractive";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::causality_required: return "causality_required";
    case ErrorCode::impulse_contraction_failure: return "impulse_contraction_failure";
    case ErrorCode::not_hyperbolic: return "not_hyperbolic";
    case ErrorCode::range_violation: return "range_violation";
    case ErrorCode::not_admissible: return "not_admissible";
    case ErrorCode::trivial_manifold: return "trivial_manifold";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace specseq
