#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ehrhart {

enum class Errc {
  not_full_rank,
  zero_vector,
  not_a_basis,
  dimension_mismatch,
  window_mismatch,
  zero_tau_coefficient,
  degenerate_simplex,
  bad_codimension,
  not_solid,
  lambda_not_generic,
  exhausted_genericity,
  bad_args,
  inconsistent_degree,
  insufficient_samples,
  inconsistent_samples,
  dimension_not_2,
  not_integral_vertex,
  not_regular,
  parse_error,
  validation_error,
  internal_assertion,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::not_full_rank: return "NotFullRank";
    case Errc::zero_vector: return "ZeroVector";
    case Errc::not_a_basis: return "NotABasis";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::window_mismatch: return "WindowMismatch";
    case Errc::zero_tau_coefficient: return "ZeroTauCoefficient";
    case Errc::degenerate_simplex: return "DegenerateSimplex";
    case Errc::bad_codimension: return "BadCodimension";
    case Errc::not_solid: return "NotSolid";
    case Errc::lambda_not_generic: return "LambdaNotGeneric";
    case Errc::exhausted_genericity: return "ExhaustedGenericity";
    case Errc::bad_args: return "BadArgs";
    case Errc::inconsistent_degree: return "InconsistentDegree";
    case Errc::insufficient_samples: return "InsufficientSamples";
    case Errc::inconsistent_samples: return "InconsistentSamples";
    case Errc::dimension_not_2: return "DimensionNot2";
    case Errc::not_integral_vertex: return "NotIntegralVertex";
    case Errc::not_regular: return "NotRegular";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::internal_assertion: return "AssertionFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

/// Internal consistency check. Failing means a bug, never bad input.
inline void ensure(bool cond, const std::string& what) {
  if (!cond) fail(Errc::internal_assertion, what);
}

}  // namespace ehrhart
