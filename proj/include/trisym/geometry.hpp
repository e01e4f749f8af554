#pragma once

// Points, barycentric coordinates and triangles on which every other module
// is built. All types are plain immutable values.

#include "trisym/scalar.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace trisym {

template <class Real>
struct Point2 {
  Real x = 0;
  Real y = 0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Barycentric coordinates with all three components stored explicitly, so
/// permuting them never recomputes one from the other two.
template <class Real>
struct BarycentricPoint {
  Real lambda1 = 0;
  Real lambda2 = 0;
  Real lambda3 = 0;

  const Real& operator[](int i) const { return i == 0 ? lambda1 : (i == 1 ? lambda2 : lambda3); }

  friend bool operator==(const BarycentricPoint&, const BarycentricPoint&) = default;
};

template <class Real>
bool is_normalized(const BarycentricPoint<Real>& b) {
  using std::abs;
  return abs(b.lambda1 + b.lambda2 + b.lambda3 - Real(1)) <= Real(8) * epsilon<Real>();
}

template <class Real>
struct Triangle {
  Point2<Real> v1;
  Point2<Real> v2;
  Point2<Real> v3;

  const Point2<Real>& vertex(int i) const { return i == 0 ? v1 : (i == 1 ? v2 : v3); }
};

/// The unit right triangle ((0,0), (1,0), (0,1)).
template <class Real>
Triangle<Real> reference_triangle() {
  return {{Real(0), Real(0)}, {Real(1), Real(0)}, {Real(0), Real(1)}};
}

template <class To, class From>
Point2<To> convert_point(const Point2<From>& p) {
  return {convert<To>(p.x), convert<To>(p.y)};
}

template <class To, class From>
Triangle<To> convert_triangle(const Triangle<From>& t) {
  return {convert_point<To>(t.v1), convert_point<To>(t.v2), convert_point<To>(t.v3)};
}

template <class Real>
Point2<Real> bary_to_cart(const Triangle<Real>& tri, const BarycentricPoint<Real>& b) {
  return {b.lambda1 * tri.v1.x + b.lambda2 * tri.v2.x + b.lambda3 * tri.v3.x,
          b.lambda1 * tri.v1.y + b.lambda2 * tri.v2.y + b.lambda3 * tri.v3.y};
}

/// Half the cross product of the edge vectors; positive for CCW, zero for a
/// degenerate triangle.
template <class Real>
Real signed_area(const Triangle<Real>& tri) {
  const Real ax = tri.v2.x - tri.v1.x;
  const Real ay = tri.v2.y - tri.v1.y;
  const Real bx = tri.v3.x - tri.v1.x;
  const Real by = tri.v3.y - tri.v1.y;
  return (ax * by - ay * bx) / Real(2);
}

template <class Real>
Real distance(const Point2<Real>& a, const Point2<Real>& b) {
  using std::sqrt;
  const Real dx = b.x - a.x;
  const Real dy = b.y - a.y;
  return sqrt(dx * dx + dy * dy);
}

/// Longest edge length.
template <class Real>
Real diameter(const Triangle<Real>& tri) {
  using std::max;
  return max(max(distance(tri.v1, tri.v2), distance(tri.v2, tri.v3)), distance(tri.v3, tri.v1));
}

}  // namespace trisym
