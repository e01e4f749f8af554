#pragma once

#include "trisym/error.hpp"
#include "trisym/oracle.hpp"
#include "trisym/scalar.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>

namespace trisym {

template <class Real>
struct Integrand {
  std::function<Real(const Real&, const Real&)> eval;
  std::optional<Real> exact_integral;  // over the unit square
  std::string description;
};

/// Default agreement required between a registered closed form and the
/// adaptive oracle, relative to |I|.
template <class Real>
Real registration_tolerance() {
  return ScalarTraits<Real>::precision == Precision::Extended ? Real(1e-25) : Real(1e-12);
}

/// Unit-square integral by the adaptive Gauss-Legendre oracle.
template <class Real>
Real oracle_unit_square(const Integrand<Real>& f, const Real& rel_tol) {
  using std::abs;
  // Rough magnitude first so that the tolerance is relative.
  const Real scale = adaptive_rectangle<Real>(f.eval, Real(0), Real(1), Real(0), Real(1), Real(1e-3));
  const Real tol = rel_tol * (abs(scale) > 0 ? abs(scale) : Real(1)) / Real(10);
  return adaptive_rectangle<Real>(f.eval, Real(0), Real(1), Real(0), Real(1), tol);
}

/// Checks a closed-form exact_integral against the oracle; throws
/// ReferenceFailure when they disagree by more than tol * |I|.
template <class Real>
Integrand<Real> register_integrand(Integrand<Real> f, const Real& tol = registration_tolerance<Real>()) {
  using std::abs;
  if (f.exact_integral) {
    const Real oracle = oracle_unit_square(f, tol);
    const Real exact = *f.exact_integral;
    if (!(abs(oracle - exact) <= tol * abs(exact))) {
      throw Error(ErrorCode::ReferenceFailure, "closed-form integral of '" + f.description +
                                                   "' disagrees with the oracle: " + to_string(exact) +
                                                   " vs " + to_string(oracle));
    }
  }
  return f;
}

template <class Real>
Real paper_integrand_value(const Real& x, const Real& y) {
  using std::exp;
  using std::sin;
  return exp(x + Real(2) * y) * (Real(1) + sin(Real(3) * x + Real(4) * y) + sin(Real(6) * x + Real(5) * y));
}

/// Closed form of the integral of paper_integrand_value over [0,1]^2.
template <class Real>
Real paper_integrand_exact() {
  using std::cos;
  using std::exp;
  using std::sin;
  const Real e = exp(Real(1));
  const auto bracket = [](int a, int b) {
    return Real(-10730) + Real(1073) * cos(Real(a)) + Real(340) * cos(Real(b)) + Real(1073) * sin(Real(a)) +
           Real(560) * sin(Real(b));
  };
  return (Real(9317) + e * bracket(3, 6) + e * e * bracket(4, 5) - e * e * e * bracket(7, 11)) / Real(21460);
}

/// f(x, y) = exp(x + 2y) (1 + sin(3x + 4y) + sin(6x + 5y)) with its exact
/// unit-square integral; the closed form is checked against the oracle on
/// first use.
template <class Real>
const Integrand<Real>& paper_integrand() {
  static const Integrand<Real> f = register_integrand<Real>(
      {[](const Real& x, const Real& y) { return paper_integrand_value(x, y); }, paper_integrand_exact<Real>(),
       "exp(x+2y)(1+sin(3x+4y)+sin(6x+5y))"});
  return f;
}

}  // namespace trisym
