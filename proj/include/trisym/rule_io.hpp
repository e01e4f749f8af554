#pragma once

// JSON form of a rule:
//   {"degree": d, "precision_digits": 33,
//    "orbits": [{"kind": "Type1", "params": ["0.6"], "weight": "0.52..."}, ...]}
// Every number is a decimal string carrying the full precision of the mode.

#include "trisym/quadrature_rule.hpp"

#include <json.hpp>

namespace trisym {

template <class Real>
nlohmann::json rule_to_json(const QuadratureRule<Real>& rule) {
  nlohmann::json orbits = nlohmann::json::array();
  for (const auto& o : rule.orbits) {
    nlohmann::json params = nlohmann::json::array();
    for (int i = 0; i < parameter_count(o.kind); ++i) params.push_back(to_string(o.params[i]));
    orbits.push_back({{"kind", std::string(to_string(o.kind))},
                      {"params", params},
                      {"weight", to_string(o.weight)}});
  }
  return {{"degree", rule.degree},
          {"precision_digits", ScalarTraits<Real>::digits10},
          {"orbits", orbits}};
}

namespace detail {

template <class Real>
Real json_number(const nlohmann::json& j) {
  if (j.is_string()) return from_string<Real>(j.get<std::string>());
  if (j.is_number()) return from_string<Real>(j.dump());
  throw Error(ErrorCode::ParseError, "expected a decimal string, got " + j.dump());
}

}  // namespace detail

/// Parses and validates a rule; throws ParseError on malformed input.
template <class Real>
QuadratureRule<Real> rule_from_json(const nlohmann::json& j) {
  try {
    QuadratureRule<Real> rule;
    rule.degree = j.at("degree").get<int>();
    if (rule.degree < 1) throw Error(ErrorCode::ParseError, "degree must be >= 1");
    for (const auto& jo : j.at("orbits")) {
      Orbit<Real> o;
      o.kind = parse_orbit_kind(jo.at("kind").get<std::string>());
      const auto& params = jo.at("params");
      if (static_cast<int>(params.size()) != parameter_count(o.kind)) {
        throw Error(ErrorCode::ParseError, std::string(to_string(o.kind)) + " orbit needs " +
                                               std::to_string(parameter_count(o.kind)) + " params");
      }
      for (std::size_t i = 0; i < params.size(); ++i) o.params[i] = detail::json_number<Real>(params[i]);
      o.weight = detail::json_number<Real>(jo.at("weight"));
      rule.orbits.push_back(o);
    }
    if (rule.orbits.empty()) throw Error(ErrorCode::ParseError, "rule has no orbits");
    return rule;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace trisym
