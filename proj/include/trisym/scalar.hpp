#pragma once

// Precision contract shared by every module.
//
// Two modes exist: IEEE double and an extended mode backed by IEEE binary128
// (113-bit significand, about 34 significant decimal digits). All numerical
// code is templated on the real type; the mode is picked once per study.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace trisym {

using Extended = boost::multiprecision::float128;

enum class Precision { Double, Extended };

std::string_view to_string(Precision p);
Precision parse_precision(std::string_view name);

template <class Real>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr Precision precision = Precision::Double;
  static constexpr int digits10 = std::numeric_limits<double>::digits10;
  static constexpr std::string_view name = "double";
  static double epsilon() { return std::numeric_limits<double>::epsilon(); }
};

template <>
struct ScalarTraits<Extended> {
  static constexpr Precision precision = Precision::Extended;
  static constexpr int digits10 = std::numeric_limits<Extended>::digits10;
  static constexpr std::string_view name = "extended";
  static Extended epsilon() { return std::numeric_limits<Extended>::epsilon(); }
};

template <class Real>
inline Real epsilon() {
  return ScalarTraits<Real>::epsilon();
}

template <class Real>
inline const Real& pi() {
  static const Real value = boost::math::constants::pi<Real>();
  return value;
}

// Extended -> double rounds to nearest; double -> Extended is exact.
template <class To, class From>
inline To convert(const From& x) {
  return static_cast<To>(x);
}

template <class Real>
Real from_string(std::string_view text);

template <>
inline double from_string<double>(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

template <>
inline Extended from_string<Extended>(std::string_view text) {
  try {
    return Extended(std::string(text));
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
}

// Shortest decimal string that parses back to the same value.
inline std::string to_string(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline std::string to_string(const Extended& x) {
  return x.str(std::numeric_limits<Extended>::max_digits10, std::ios_base::fmtflags(0));
}

}  // namespace trisym
