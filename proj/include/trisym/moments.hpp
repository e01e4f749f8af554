#pragma once

#include <cstdint>

namespace trisym {

/// Exact integral of x^p y^q over the reference triangle, numerator/denominator
/// in lowest terms.
struct RationalMoment {
  int p = 0;
  int q = 0;
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  template <class Real>
  Real value() const {
    return Real(numerator) / Real(denominator);
  }

  /// The same moment divided by the reference area 1/2, i.e. the target of a
  /// rule whose weights sum to one.
  template <class Real>
  Real normalized_value() const {
    if (denominator % 2 == 0) {
      return Real(numerator) / Real(denominator / 2);
    }
    return Real(2 * numerator) / Real(denominator);
  }
};

inline constexpr int kMaxMomentOrder = 40;

/// p! q! / (p+q+2)!. Throws OutOfRange for p+q > 40 or negative exponents.
RationalMoment monomial_moment(int p, int q);

/// Number of monomials x^p y^q with p+q <= d.
constexpr int monomial_count(int d) { return (d + 1) * (d + 2) / 2; }

}  // namespace trisym
