#pragma once

#include "trisym/quadrature_rule.hpp"

#include <string_view>
#include <vector>

namespace trisym {

inline constexpr int kMinCatalogDegree = 1;
inline constexpr int kMaxCatalogDegree = 11;

/// One orbit of a catalog rule, as decimal strings so that each precision
/// mode parses the digits directly.
struct CatalogOrbit {
  OrbitKind kind;
  std::string_view lambda1;
  std::string_view lambda2;
  std::string_view weight;
};

/// Raw catalog data for degree d (1..11). Throws UnsupportedDegree.
std::span<const CatalogOrbit> catalog_orbits(int degree);

/// Built-in symmetric rule for degree d (1..11) with
/// n = 1, 3, 4, 6, 7, 12, 13, 16, 19, 25, 27 points.
template <class Real>
QuadratureRule<Real> load_builtin_rule(int degree) {
  QuadratureRule<Real> rule;
  rule.degree = degree;
  for (const auto& c : catalog_orbits(degree)) {
    Orbit<Real> o;
    o.kind = c.kind;
    o.weight = from_string<Real>(c.weight);
    if (parameter_count(c.kind) >= 1) o.params[0] = from_string<Real>(c.lambda1);
    if (parameter_count(c.kind) >= 2) o.params[1] = from_string<Real>(c.lambda2);
    rule.orbits.push_back(o);
  }
  return rule;
}

}  // namespace trisym
