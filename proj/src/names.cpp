#include "trisym/error.hpp"
#include "trisym/quadrature_rule.hpp"
#include "trisym/scalar.hpp"

#include <string>

namespace trisym {

std::string_view to_string(Precision p) {
  return p == Precision::Double ? "double" : "extended";
}

Precision parse_precision(std::string_view name) {
  if (name == "double") return Precision::Double;
  if (name == "extended" || name == "quad") return Precision::Extended;
  throw Error(ErrorCode::InvalidArgument, "unknown precision '" + std::string(name) + "'");
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateOrbit: return "DegenerateOrbit";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::StructureLost: return "StructureLost";
    case ErrorCode::WarpTooLarge: return "WarpTooLarge";
    case ErrorCode::TriangulationFailure: return "TriangulationFailure";
    case ErrorCode::InsufficientLevels: return "InsufficientLevels";
    case ErrorCode::ZeroError: return "ZeroError";
    case ErrorCode::ReferenceFailure: return "ReferenceFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Error";
}

std::string_view to_string(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::Type0: return "Type0";
    case OrbitKind::Type1: return "Type1";
    case OrbitKind::Type2: return "Type2";
  }
  return "?";
}

OrbitKind parse_orbit_kind(std::string_view name) {
  if (name == "Type0") return OrbitKind::Type0;
  if (name == "Type1") return OrbitKind::Type1;
  if (name == "Type2") return OrbitKind::Type2;
  throw Error(ErrorCode::ParseError, "unknown orbit kind '" + std::string(name) + "'");
}

}  // namespace trisym
