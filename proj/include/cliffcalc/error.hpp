#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cliffcalc {

enum class ErrorCode {
  dimension_mismatch,
  not_in_slice,
  bad_spec,
  spectral_point,
  same_sphere,
  even_dimension,
  odd_dimension,
  h_parity_mismatch,
  divergent_region,
  spectrum_not_enclosed,
  spectrum_on_contour,
  not_vector_operator,
  point_outside_contour,
  out_of_range,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as this exception; callers branch on code().
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::not_in_slice: return "NotInSlice";
    case ErrorCode::bad_spec: return "BadSpec";
    case ErrorCode::spectral_point: return "SpectralPoint";
    case ErrorCode::same_sphere: return "SameSphere";
    case ErrorCode::even_dimension: return "EvenDimension";
    case ErrorCode::odd_dimension: return "OddDimension";
    case ErrorCode::h_parity_mismatch: return "HParityMismatch";
    case ErrorCode::divergent_region: return "DivergentRegion";
    case ErrorCode::spectrum_not_enclosed: return "SpectrumNotEnclosed";
    case ErrorCode::spectrum_on_contour: return "SpectrumOnContour";
    case ErrorCode::not_vector_operator: return "NotVectorOperator";
    case ErrorCode::point_outside_contour: return "PointOutsideContour";
    case ErrorCode::out_of_range: return "OutOfRange";
  }
  return "Unknown";
}

}  // namespace cliffcalc
