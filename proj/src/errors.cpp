#include "pseudomode/errors.hpp"

namespace pm {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_name: return "unknown-name";
    case ErrorCode::parameter_out_of_range: return "parameter-out-of-range";
    case ErrorCode::order_exceeds_max: return "order-exceeds-M";
    case ErrorCode::point_outside_domain: return "point-outside-domain";
    case ErrorCode::k_out_of_range: return "k-out-of-range";
    case ErrorCode::branch_cut: return "branch-cut-violation";
    case ErrorCode::quadrature_nonconvergence: return "quadrature-nonconvergence";
    case ErrorCode::no_crossing: return "no-crossing";
    case ErrorCode::non_monotone_tail: return "non-monotone-tail";
    case ErrorCode::empty_window: return "empty-window";
    case ErrorCode::exponent_outside_window: return "exponent-outside-window";
    case ErrorCode::invalid_regime_params: return "invalid-regime-params";
    case ErrorCode::unsupported_order: return "unsupported-order";
    case ErrorCode::insufficient_points: return "insufficient-points";
    case ErrorCode::resolution_insufficient: return "resolution-insufficient";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::iteration_nonconvergence: return "iteration-nonconvergence";
    case ErrorCode::config_invalid: return "config-invalid";
    case ErrorCode::unknown_suite: return "unknown-suite";
  }
  return "unknown-error";
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_name:
    case ErrorCode::parameter_out_of_range:
    case ErrorCode::config_invalid:
    case ErrorCode::unknown_suite:
    case ErrorCode::exponent_outside_window:
    case ErrorCode::invalid_regime_params:
      return true;
    default:
      return false;
  }
}

}  // namespace pm
