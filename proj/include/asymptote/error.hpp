#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asym {

enum class ErrorCode {
  unsupported_order,
  irregular_curve,
  quadrature_failure,
  inflection_point,
  no_darboux_framing,
  not_asymptotic,
  inconsistent_framing,
  degenerate_patch,
  spherical_singularity,
  non_generic_direction,
  epsilon_resolution_failure,
  resolution_failure,
  sampling_failure,
  ill_conditioned_linking,
  inconsistency,
  invalid_framing,
  theorem_violation,
  no_self_linking,
  inapplicable_direction,
  imaginary_component,
  not_immersed,
  closure_infeasible,
  closure_failure,
  invalid_spec,
  io_failure,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::unsupported_order: return "unsupported-order";
    case ErrorCode::irregular_curve: return "irregular-curve";
    case ErrorCode::quadrature_failure: return "quadrature-failure";
    case ErrorCode::inflection_point: return "inflection-point";
    case ErrorCode::no_darboux_framing: return "no-darboux-framing";
    case ErrorCode::not_asymptotic: return "not-asymptotic";
    case ErrorCode::inconsistent_framing: return "inconsistent-framing";
    case ErrorCode::degenerate_patch: return "degenerate-patch";
    case ErrorCode::spherical_singularity: return "spherical-singularity";
    case ErrorCode::non_generic_direction: return "non-generic-direction";
    case ErrorCode::epsilon_resolution_failure: return "epsilon-resolution-failure";
    case ErrorCode::resolution_failure: return "resolution-failure";
    case ErrorCode::sampling_failure: return "sampling-failure";
    case ErrorCode::ill_conditioned_linking: return "ill-conditioned-linking";
    case ErrorCode::inconsistency: return "inconsistency-error";
    case ErrorCode::invalid_framing: return "invalid-framing";
    case ErrorCode::theorem_violation: return "theorem-violation";
    case ErrorCode::no_self_linking: return "no-self-linking";
    case ErrorCode::inapplicable_direction: return "inapplicable-direction";
    case ErrorCode::imaginary_component: return "imaginary-component";
    case ErrorCode::not_immersed: return "not-immersed";
    case ErrorCode::closure_infeasible: return "closure-infeasible";
    case ErrorCode::closure_failure: return "closure-failure";
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::io_failure: return "io-failure";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch on the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace asym
