#pragma once

// Reference integrals that do not use any symmetric triangle rule: adaptive
// tensor-product Gauss-Legendre on rectangles, and the same on triangles via
// the collapsed (Duffy) map. Each panel compares an n-point and a 2n-point
// product rule and is quadrisected until the two agree.

#include "trisym/compensated_sum.hpp"
#include "trisym/error.hpp"
#include "trisym/geometry.hpp"
#include "trisym/scalar.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

namespace trisym {

template <class Real>
struct GaussLegendre {
  std::vector<Real> nodes;    // on [0, 1]
  std::vector<Real> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule on [0, 1], nodes from Newton's method on P_n
/// in the working precision.
template <class Real>
GaussLegendre<Real> gauss_legendre(int n) {
  using std::abs;
  using std::cos;
  GaussLegendre<Real> rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const Real tol = Real(4) * epsilon<Real>();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real z = Real(std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = (Real(2 * k - 1) * z * p1 - Real(k - 1) * p0) / Real(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = Real(n) * (z * p1 - p0) / (z * z - Real(1));
      const Real dz = p1 / dp;
      z -= dz;
      if (abs(dz) <= tol) {
        // One more evaluation at the converged node for the weight.
        p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const Real p2 = (Real(2 * k - 1) * z * p1 - Real(k - 1) * p0) / Real(k);
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1;
        dp = Real(n) * (z * p1 - p0) / (z * z - Real(1));
        break;
      }
    }
    const Real w = Real(1) / ((Real(1) - z * z) * dp * dp);  // half of the [-1, 1] weight
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = (Real(1) - z) / Real(2);
    rule.nodes[hi] = (Real(1) + z) / Real(2);
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

template <class Real>
const GaussLegendre<Real>& cached_gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendre<Real>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre<Real>(n)).first;
  return it->second;
}

struct OracleOptions {
  int order = 16;      // low order; the high order is 2 * order
  int max_depth = 12;  // quadrisection levels
};

namespace detail {

template <class Real, class F>
Real rectangle_product(const F& f, const Real& x0, const Real& x1, const Real& y0, const Real& y1,
                       const GaussLegendre<Real>& gl) {
  CompensatedSum<Real> sum;
  const Real dx = x1 - x0, dy = y1 - y0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const Real x = x0 + dx * gl.nodes[i];
    CompensatedSum<Real> row;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) row.add(gl.weights[j] * f(x, y0 + dy * gl.nodes[j]));
    sum.add(gl.weights[i] * row.value());
  }
  return dx * dy * sum.value();
}

// Collapsed map of the unit square onto `tri`: vertex 1 at u = 0, the edge
// v2-v3 at u = 1, area element 2 A u du dv.
template <class Real, class F>
Real triangle_product(const F& f, const Triangle<Real>& tri, const GaussLegendre<Real>& gl) {
  using std::abs;
  const Real area2 = abs(Real(2) * signed_area(tri));
  CompensatedSum<Real> sum;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const Real u = gl.nodes[i];
    CompensatedSum<Real> row;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const Real v = gl.nodes[j];
      const Real l1 = Real(1) - u;
      const Real l2 = u * (Real(1) - v);
      const Real l3 = u * v;
      const Real x = l1 * tri.v1.x + l2 * tri.v2.x + l3 * tri.v3.x;
      const Real y = l1 * tri.v1.y + l2 * tri.v2.y + l3 * tri.v3.y;
      row.add(gl.weights[j] * f(x, y));
    }
    sum.add(gl.weights[i] * u * row.value());
  }
  return area2 * sum.value();
}

}  // namespace detail

/// Adaptive integral over [x0,x1] x [y0,y1] to absolute tolerance `tol`.
/// Throws ReferenceFailure when max_depth is exhausted.
template <class Real, class F>
Real adaptive_rectangle(const F& f, const Real& x0, const Real& x1, const Real& y0, const Real& y1,
                        const Real& tol, const OracleOptions& opt = {}) {
  using std::abs;
  const auto& lo = cached_gauss_legendre<Real>(opt.order);
  const auto& hi = cached_gauss_legendre<Real>(2 * opt.order);
  CompensatedSum<Real> total;
  const Real full = (x1 - x0) * (y1 - y0);
  // Explicit stack, depth-first in a fixed order.
  struct Panel {
    Real x0, x1, y0, y1;
    int depth;
  };
  std::vector<Panel> stack{{x0, x1, y0, y1, 0}};
  while (!stack.empty()) {
    const Panel pnl = stack.back();
    stack.pop_back();
    const Real a = detail::rectangle_product(f, pnl.x0, pnl.x1, pnl.y0, pnl.y1, lo);
    const Real b = detail::rectangle_product(f, pnl.x0, pnl.x1, pnl.y0, pnl.y1, hi);
    const Real share = tol * (pnl.x1 - pnl.x0) * (pnl.y1 - pnl.y0) / full;
    if (abs(b - a) <= share) {
      total.add(b);
      continue;
    }
    if (pnl.depth >= opt.max_depth) {
      throw Error(ErrorCode::ReferenceFailure, "adaptive cubature did not reach tolerance");
    }
    const Real xm = (pnl.x0 + pnl.x1) / Real(2), ym = (pnl.y0 + pnl.y1) / Real(2);
    stack.push_back({xm, pnl.x1, ym, pnl.y1, pnl.depth + 1});
    stack.push_back({pnl.x0, xm, ym, pnl.y1, pnl.depth + 1});
    stack.push_back({xm, pnl.x1, pnl.y0, ym, pnl.depth + 1});
    stack.push_back({pnl.x0, xm, pnl.y0, ym, pnl.depth + 1});
  }
  return total.value();
}

/// Adaptive integral over a triangle to absolute tolerance `tol`; panels are
/// split at edge midpoints.
template <class Real, class F>
Real adaptive_triangle(const F& f, const Triangle<Real>& tri, const Real& tol, const OracleOptions& opt = {}) {
  using std::abs;
  const auto& lo = cached_gauss_legendre<Real>(opt.order);
  const auto& hi = cached_gauss_legendre<Real>(2 * opt.order);
  const Real full = abs(signed_area(tri));
  CompensatedSum<Real> total;
  std::vector<std::pair<Triangle<Real>, int>> stack{{tri, 0}};
  while (!stack.empty()) {
    const auto [t, depth] = stack.back();
    stack.pop_back();
    const Real a = detail::triangle_product(f, t, lo);
    const Real b = detail::triangle_product(f, t, hi);
    const Real share = tol * abs(signed_area(t)) / full;
    if (abs(b - a) <= share) {
      total.add(b);
      continue;
    }
    if (depth >= opt.max_depth) {
      throw Error(ErrorCode::ReferenceFailure, "adaptive cubature did not reach tolerance");
    }
    const auto mid = [](const Point2<Real>& p, const Point2<Real>& q) {
      return Point2<Real>{(p.x + q.x) / Real(2), (p.y + q.y) / Real(2)};
    };
    const Point2<Real> m12 = mid(t.v1, t.v2), m23 = mid(t.v2, t.v3), m31 = mid(t.v3, t.v1);
    stack.push_back({{m12, m23, m31}, depth + 1});
    stack.push_back({{m31, m23, t.v3}, depth + 1});
    stack.push_back({{m12, t.v2, m23}, depth + 1});
    stack.push_back({{t.v1, m12, m31}, depth + 1});
  }
  return total.value();
}

}  // namespace trisym
