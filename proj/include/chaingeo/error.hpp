#ifndef CHAINGEO_ERROR_HPP
#define CHAINGEO_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace chaingeo {

enum class error_code {
  // field
  non_prime_characteristic,
  reducible_modulus,
  unsupported_order,
  division_by_zero,
  // algebra
  non_associative,
  no_unity,
  bad_spec,
  scalars_not_central,
  not_a_unit,
  not_local,
  // projective line / chains
  orbit_count_mismatch,
  not_mutually_distant,
  solve_failed,
  chain_count_mismatch,
  lambda_mismatch,
  design_violation,
  // blocking
  bad_parameters,
  polynomial_mismatch,
  unknown_point,
  not_applicable,
  counterexample_found,
  not_blocking_downstairs,
  // quadric
  wrong_ring,
  not_coplanar,
  tangent_plane,
  model_violation,
  // io
  bad_file,
};

constexpr std::string_view to_string(error_code c) {
  switch (c) {
    case error_code::non_prime_characteristic: return "NonPrimeCharacteristic";
    case error_code::reducible_modulus: return "ReducibleModulus";
    case error_code::unsupported_order: return "UnsupportedOrder";
    case error_code::division_by_zero: return "DivisionByZero";
    case error_code::non_associative: return "NonAssociative";
    case error_code::no_unity: return "NoUnity";
    case error_code::bad_spec: return "BadSpec";
    case error_code::scalars_not_central: return "ScalarsNotCentral";
    case error_code::not_a_unit: return "NotAUnit";
    case error_code::not_local: return "NotLocal";
    case error_code::orbit_count_mismatch: return "OrbitCountMismatch";
    case error_code::not_mutually_distant: return "NotMutuallyDistant";
    case error_code::solve_failed: return "SolveFailed";
    case error_code::chain_count_mismatch: return "ChainCountMismatch";
    case error_code::lambda_mismatch: return "LambdaMismatch";
    case error_code::design_violation: return "DesignViolation";
    case error_code::bad_parameters: return "BadParameters";
    case error_code::polynomial_mismatch: return "PolynomialMismatch";
    case error_code::unknown_point: return "UnknownPoint";
    case error_code::not_applicable: return "NotApplicable";
    case error_code::counterexample_found: return "CounterexampleFound";
    case error_code::not_blocking_downstairs: return "NotBlockingDownstairs";
    case error_code::wrong_ring: return "WrongRing";
    case error_code::not_coplanar: return "NotCoplanar";
    case error_code::tangent_plane: return "TangentPlane";
    case error_code::model_violation: return "ModelViolation";
    case error_code::bad_file: return "BadFile";
  }
  return "Unknown";
}

/// True for codes that signal a contradiction between a computed structure
/// and a proven statement about it (as opposed to bad input).
constexpr bool is_violation(error_code c) {
  switch (c) {
    case error_code::orbit_count_mismatch:
    case error_code::solve_failed:
    case error_code::chain_count_mismatch:
    case error_code::lambda_mismatch:
    case error_code::design_violation:
    case error_code::polynomial_mismatch:
    case error_code::counterexample_found:
    case error_code::not_coplanar:
    case error_code::tangent_plane:
    case error_code::model_violation:
      return true;
    default:
      return false;
  }
}

class error : public std::runtime_error {
 public:
  error(error_code code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  error_code code() const noexcept { return code_; }

 private:
  error_code code_;
};

}  // namespace chaingeo

#endif  // CHAINGEO_ERROR_HPP
