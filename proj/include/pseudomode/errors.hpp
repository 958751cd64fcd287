#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace pm {

using cplx = std::complex<double>;

enum class ErrorCode {
  unknown_name,
  parameter_out_of_range,
  order_exceeds_max,
  point_outside_domain,
  k_out_of_range,
  branch_cut,
  quadrature_nonconvergence,
  no_crossing,
  non_monotone_tail,
  empty_window,
  exponent_outside_window,
  invalid_regime_params,
  unsupported_order,
  insufficient_points,
  resolution_insufficient,
  dimension_mismatch,
  iteration_nonconvergence,
  config_invalid,
  unknown_suite,
};

const char* error_code_name(ErrorCode code);

// Configuration-type errors map to CLI exit status 2, everything else to 3.
bool is_config_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pm
