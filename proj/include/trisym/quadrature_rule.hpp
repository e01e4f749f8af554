#pragma once

// Symmetric triangle rules stored as orbits of the triangle's symmetry group.
//
// Weights are per point and normalized so that they sum to one over the
// expanded rule; integrate_on_triangle multiplies by the physical area.

#include "trisym/compensated_sum.hpp"
#include "trisym/error.hpp"
#include "trisym/geometry.hpp"
#include "trisym/moments.hpp"
#include "trisym/scalar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace trisym {

enum class OrbitKind { Type0, Type1, Type2 };

std::string_view to_string(OrbitKind kind);
OrbitKind parse_orbit_kind(std::string_view name);

/// Number of barycentric parameters and points carried by an orbit kind.
constexpr int parameter_count(OrbitKind kind) {
  return kind == OrbitKind::Type0 ? 0 : (kind == OrbitKind::Type1 ? 1 : 2);
}
constexpr int orbit_size(OrbitKind kind) {
  return kind == OrbitKind::Type0 ? 1 : (kind == OrbitKind::Type1 ? 3 : 6);
}

template <class Real>
struct Orbit {
  OrbitKind kind = OrbitKind::Type0;
  std::array<Real, 2> params{};  // lambda1 for Type1; lambda1, lambda2 for Type2
  Real weight = 0;

  static Orbit centroid(Real w) { return {OrbitKind::Type0, {Real(0), Real(0)}, w}; }
  static Orbit median(Real lambda1, Real w) { return {OrbitKind::Type1, {lambda1, Real(0)}, w}; }
  static Orbit general(Real lambda1, Real lambda2, Real w) {
    return {OrbitKind::Type2, {lambda1, lambda2}, w};
  }
};

template <class Real>
struct WeightedPoint {
  BarycentricPoint<Real> point;
  Real weight;
};

template <class Real>
struct QuadratureRule {
  int degree = 0;
  std::vector<Orbit<Real>> orbits;

  int count(OrbitKind kind) const {
    return static_cast<int>(
        std::count_if(orbits.begin(), orbits.end(), [kind](const auto& o) { return o.kind == kind; }));
  }
  int n0() const { return count(OrbitKind::Type0); }
  int n1() const { return count(OrbitKind::Type1); }
  int n2() const { return count(OrbitKind::Type2); }
  int point_count() const { return n0() + 3 * n1() + 6 * n2(); }
};

template <class To, class From>
QuadratureRule<To> convert_rule(const QuadratureRule<From>& rule) {
  QuadratureRule<To> out;
  out.degree = rule.degree;
  for (const auto& o : rule.orbits) {
    out.orbits.push_back({o.kind, {convert<To>(o.params[0]), convert<To>(o.params[1])},
                          convert<To>(o.weight)});
  }
  return out;
}

namespace detail {

template <class Real>
bool bary_greater(const BarycentricPoint<Real>& a, const BarycentricPoint<Real>& b) {
  if (a.lambda1 != b.lambda1) return a.lambda1 > b.lambda1;
  if (a.lambda2 != b.lambda2) return a.lambda2 > b.lambda2;
  return a.lambda3 > b.lambda3;
}

}  // namespace detail

/// Points of one orbit, sorted lexicographically descending by
/// (lambda1, lambda2, lambda3). Throws DegenerateOrbit when the permutations
/// are not distinct, i.e. two components agree to within rounding (8 eps).
template <class Real>
std::vector<WeightedPoint<Real>> expand_orbit(const Orbit<Real>& o) {
  using std::abs;
  const Real tie = Real(8) * epsilon<Real>();
  const auto same = [&tie](const Real& x, const Real& y) { return abs(x - y) <= tie; };
  std::vector<WeightedPoint<Real>> out;
  switch (o.kind) {
    case OrbitKind::Type0: {
      const Real third = Real(1) / Real(3);
      out.push_back({{third, third, third}, o.weight});
      return out;
    }
    case OrbitKind::Type1: {
      const Real a = o.params[0];
      const Real b = (Real(1) - a) / Real(2);
      if (same(a, b)) {
        throw Error(ErrorCode::DegenerateOrbit, "type-1 orbit with lambda1 = 1/3");
      }
      out.push_back({{a, b, b}, o.weight});
      out.push_back({{b, a, b}, o.weight});
      out.push_back({{b, b, a}, o.weight});
      break;
    }
    case OrbitKind::Type2: {
      const std::array<Real, 3> c{o.params[0], o.params[1], Real(1) - o.params[0] - o.params[1]};
      if (same(c[0], c[1]) || same(c[1], c[2]) || same(c[0], c[2])) {
        throw Error(ErrorCode::DegenerateOrbit, "type-2 orbit with repeated barycentric component");
      }
      constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
      for (const auto& p : perms) {
        out.push_back({{c[p[0]], c[p[1]], c[p[2]]}, o.weight});
      }
      break;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return detail::bary_greater(a.point, b.point); });
  return out;
}

/// Concatenated orbit expansions, length n0 + 3 n1 + 6 n2.
template <class Real>
std::vector<WeightedPoint<Real>> rule_points(const QuadratureRule<Real>& rule) {
  std::vector<WeightedPoint<Real>> out;
  out.reserve(static_cast<std::size_t>(rule.point_count()));
  for (const auto& o : rule.orbits) {
    auto pts = expand_orbit(o);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

/// A * sum_i w_i f(x_i) with a compensated, fixed-order sum. `f` is called as
/// f(x, y). Throws DegenerateTriangle when the signed area is not positive.
template <class Real, class F>
Real integrate_on_triangle(std::span<const WeightedPoint<Real>> points, const Triangle<Real>& tri, F&& f) {
  const Real area = signed_area(tri);
  if (!(area > 0)) {
    throw Error(ErrorCode::DegenerateTriangle, "non-positive triangle area");
  }
  CompensatedSum<Real> sum;
  for (const auto& wp : points) {
    const Point2<Real> x = bary_to_cart(tri, wp.point);
    sum.add(wp.weight * f(x.x, x.y));
  }
  return area * sum.value();
}

template <class Real, class F>
Real integrate_on_triangle(const QuadratureRule<Real>& rule, const Triangle<Real>& tri, F&& f) {
  const auto pts = rule_points(rule);
  return integrate_on_triangle<Real>(std::span<const WeightedPoint<Real>>(pts), tri, std::forward<F>(f));
}

template <class Real>
struct DegreeReport {
  int achieved_degree = -1;
  std::vector<Real> max_residual_by_degree;  // index m = total degree
};

template <class Real>
Real integer_power(const Real& base, int n) {
  Real result = 1;
  for (int i = 0; i < n; ++i) result *= base;
  return result;
}

/// Relative error of the rule on every monomial of the reference triangle,
/// maximised per total degree. Stops two degrees past the first failure.
template <class Real>
DegreeReport<Real> verify_degree(const QuadratureRule<Real>& rule, const Real& tol) {
  using std::abs;
  using std::max;
  DegreeReport<Real> report;
  const auto pts = rule_points(rule);
  const auto ref = reference_triangle<Real>();
  int first_fail = -1;
  for (int m = 0; m <= kMaxMomentOrder; ++m) {
    if (first_fail >= 0 && m > first_fail + 2) break;
    Real worst = 0;
    for (int p = m; p >= 0; --p) {
      const int q = m - p;
      const Real quad = integrate_on_triangle<Real>(
          std::span<const WeightedPoint<Real>>(pts), ref,
          [p, q](const Real& x, const Real& y) { return integer_power(x, p) * integer_power(y, q); });
      const Real exact = monomial_moment(p, q).template value<Real>();
      worst = max(worst, Real(abs(quad - exact) / abs(exact)));
    }
    report.max_residual_by_degree.push_back(worst);
    if (first_fail < 0) {
      if (worst < tol) {
        report.achieved_degree = m;
      } else {
        first_fail = m;
      }
    }
  }
  return report;
}

/// True when every expanded point has non-negative barycentric components.
template <class Real>
bool all_points_inside(const QuadratureRule<Real>& rule) {
  for (const auto& wp : rule_points(rule)) {
    if (wp.point.lambda1 < 0 || wp.point.lambda2 < 0 || wp.point.lambda3 < 0) return false;
  }
  return true;
}

template <class Real>
Real weight_sum(const QuadratureRule<Real>& rule) {
  CompensatedSum<Real> sum;
  for (const auto& wp : rule_points(rule)) sum.add(wp.weight);
  return sum.value();
}

}  // namespace trisym
