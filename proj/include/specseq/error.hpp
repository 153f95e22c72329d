// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specseq {

/// Machine-readable failure categories. The numeric values double as CLI
/// exit statuses, so they must stay distinct and stable.
enum class ErrorCode : int {
  usage = 2,
  invalid_argument = 3,
  non_finite = 4,
  dimension_mismatch = 5,
  eigen_solver_failed = 6,
  spectrum_hit = 7,
  spectrum_on_circle = 8,
  quadrature_not_converged = 9,
  indeterminate = 10,
  overflow = 11,
  aliasing = 12,
  window_too_wide = 13,
  not_causal_regime = 14,
  split_missing = 15,
  internal_inconsistency = 16,
  tail_too_long = 17,
  not_contractive = 18,
  no_convergence = 19,
  causality_required = 20,
  impulse_contraction_failure = 21,
  not_hyperbolic = 22,
  range_violation = 23,
  not_admissible = 24,
  trivial_manifold = 25,
  parse_error = 26,
  io_error = 27,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace specseq
