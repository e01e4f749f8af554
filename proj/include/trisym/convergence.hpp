#pragma once

// Mesh-level integration, convergence-rate fits, the single-triangle
// subdivision-ratio experiment and full convergence studies.

#include "trisym/compensated_sum.hpp"
#include "trisym/integrand.hpp"
#include "trisym/mesh.hpp"
#include "trisym/quadrature_rule.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace trisym {

/// Elements per partial sum in integrate_mesh. Fixed so that the reduction
/// order does not depend on the thread count.
inline constexpr std::size_t kIntegrationChunk = 512;

/// Sum of per-element quadrature values. Elements are grouped into fixed
/// chunks, each summed with compensation; chunk sums are combined in order.
/// `threads` = 0 uses the hardware concurrency. Throws DegenerateTriangle
/// naming the first bad element.
template <class Real>
Real integrate_mesh(const TriangleMesh& mesh, const QuadratureRule<Real>& rule, const Integrand<Real>& f,
                    unsigned threads = 1) {
  const auto pts = rule_points(rule);
  const std::span<const WeightedPoint<Real>> span(pts);
  const std::size_t chunks = (mesh.size() + kIntegrationChunk - 1) / kIntegrationChunk;
  std::vector<Real> partial(chunks, Real(0));
  std::vector<std::string> failure(chunks);

  const auto run_chunk = [&](std::size_t c) {
    CompensatedSum<Real> sum;
    const std::size_t end = std::min(mesh.size(), (c + 1) * kIntegrationChunk);
    for (std::size_t j = c * kIntegrationChunk; j < end; ++j) {
      try {
        sum.add(integrate_on_triangle<Real>(span, mesh.triangle<Real>(j), f.eval));
      } catch (const Error& e) {
        failure[c] = "element " + std::to_string(j) + ": " + e.what();
        return;
      }
    }
    partial[c] = sum.value();
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(chunks, 1)));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < chunks; c += threads) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  CompensatedSum<Real> total;
  for (std::size_t c = 0; c < chunks; ++c) {
    if (!failure[c].empty()) throw Error(ErrorCode::DegenerateTriangle, failure[c]);
    total.add(partial[c]);
  }
  return total.value();
}

struct RateFit {
  std::vector<double> pairwise;
  double global = 0.0;
};

/// Pairwise rates log(e_i/e_{i+1}) / log(h_i/h_{i+1}) and the least-squares
/// slope of log e against log h. Input pairs are (h, epsilon) with strictly
/// decreasing h. Throws InsufficientLevels or ZeroError.
RateFit estimate_rate(std::span<const std::pair<double, double>> levels);

/// d + 1 for odd d, d + 2 for even d.
int expected_rate(int degree);

/// Limit of e_{h/2} / e_h under midpoint subdivision: (3 + (-1)^(d+1)) / 2^(d+3).
template <class Real>
Real predicted_ratio(int degree) {
  Real denom = 1;
  for (int i = 0; i < degree + 3; ++i) denom *= Real(2);
  return Real(degree % 2 == 1 ? 4 : 2) / denom;
}

template <class Real>
struct RatioLevel {
  Real h = 0;
  Real error = 0;  // reference - quadrature, signed
  std::size_t triangles = 0;
};

template <class Real>
struct RatioExperiment {
  int rule_degree = 0;
  Real reference = 0;
  std::vector<RatioLevel<Real>> levels;
  std::vector<Real> measured_ratios;
  Real predicted_ratio = 0;
  bool exact_integration = false;
};

/// Relative tolerance for the single-triangle reference integral.
template <class Real>
Real ratio_reference_tolerance() {
  return ScalarTraits<Real>::precision == Precision::Extended ? Real(1e-30) : Real(1e-14);
}

/// Integrates f over `tri` and its successive midpoint refinements (4^l
/// subtriangles at level l) and reports e_{h/2} / e_h per level. When every
/// level is exact to rounding the experiment is flagged exact_integration
/// and carries no ratios.
template <class Real>
RatioExperiment<Real> subdivision_ratio_experiment(const QuadratureRule<Real>& rule, const Integrand<Real>& f,
                                                   const Triangle<Real>& tri, int levels) {
  using std::abs;
  if (levels < 2) throw Error(ErrorCode::InsufficientLevels, "ratio experiment needs >= 2 levels");
  RatioExperiment<Real> ex;
  ex.rule_degree = rule.degree;
  ex.predicted_ratio = predicted_ratio<Real>(rule.degree);

  const Real scale = adaptive_triangle<Real>(f.eval, tri, Real(1e-3));
  const Real tol = ratio_reference_tolerance<Real>() * (abs(scale) > 0 ? abs(scale) : Real(1));
  ex.reference = adaptive_triangle<Real>(f.eval, tri, tol);

  const auto pts = rule_points(rule);
  const std::span<const WeightedPoint<Real>> span(pts);
  std::vector<Triangle<Real>> current{tri};
  Real h = diameter(tri);
  const Real half = Real(1) / Real(2);
  for (int level = 0; level < levels; ++level) {
    CompensatedSum<Real> sum;
    for (const auto& t : current) sum.add(integrate_on_triangle<Real>(span, t, f.eval));
    ex.levels.push_back({h, ex.reference - sum.value(), current.size()});
    if (level + 1 < levels) {
      std::vector<Triangle<Real>> next;
      next.reserve(current.size() * 4);
      for (const auto& t : current) {
        for (const auto& s : split4(t, half, half, half)) next.push_back(s);
      }
      current = std::move(next);
      h /= Real(2);
    }
  }

  const Real floor = Real(100) * epsilon<Real>() * (abs(ex.reference) > 0 ? abs(ex.reference) : Real(1));
  ex.exact_integration = true;
  for (const auto& l : ex.levels) {
    if (abs(l.error) > floor) ex.exact_integration = false;
  }
  if (!ex.exact_integration) {
    for (std::size_t i = 0; i + 1 < ex.levels.size(); ++i) {
      ex.measured_ratios.push_back(ex.levels[i + 1].error / ex.levels[i].error);
    }
  }
  return ex;
}

enum class MeshSequence { Structured, NestedUnstructured, IndependentUnstructured };

std::string_view to_string(MeshSequence s);
MeshSequence parse_sequence(std::string_view name);

struct StudyConfig {
  MeshSequence sequence = MeshSequence::Structured;
  int degree = 1;
  int k_max = 5;
  int base = 5;
  Precision precision = Precision::Double;
  bool rotations = false;
  std::uint64_t rng_seed = 1;
  double warp = kDefaultWarp;
  unsigned threads = 1;
};

/// Throws (InvalidArgument, UnsupportedDegree) before any work starts.
void validate(const StudyConfig& config);
nlohmann::json to_json(const StudyConfig& config);

struct StudyLevel {
  int k = 0;
  std::size_t triangles = 0;
  double h = 0.0;
  std::string integral;  // quadrature value, full precision
  double signed_error = 0.0;  // (I - I_tilde) / I
  double epsilon = 0.0;       // |I - I_tilde| / |I|
  std::vector<double> rotation_errors;  // signed relative errors per rotation
  bool excluded = false;  // epsilon at the round-off floor, left out of the fit
  std::optional<double> pairwise_rate;
};

struct ConvergenceStudy {
  StudyConfig config;
  std::string exact_integral;
  std::vector<StudyLevel> levels;
  std::vector<double> fitted_rate_pairwise;
  double fitted_rate_global = 0.0;
  int expected_rate = 0;
};

/// Rule used by studies: the catalog rule, refined to full precision when
/// the mode is extended.
template <class Real>
QuadratureRule<Real> study_rule(int degree);

/// Builds mesh levels k = 1..k_max of the configured sequence, integrates the
/// paper integrand and fits the convergence rate. With rotations, a level's
/// error is the signed mean over the four quarter-turn rotations.
ConvergenceStudy run_study(const StudyConfig& config);

/// Mesh of level k for a configuration (before any rotation).
TriangleMesh study_mesh(const StudyConfig& config, int k);

void write_study_csv(std::ostream& out, const ConvergenceStudy& study);
void write_plot_data(std::ostream& out, const ConvergenceStudy& study);
nlohmann::json study_summary_json(const ConvergenceStudy& study);

template <class Real>
nlohmann::json ratio_to_json(const RatioExperiment<Real>& ex) {
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t i = 0; i < ex.levels.size(); ++i) {
    nlohmann::json l = {{"h", to_string(ex.levels[i].h)},
                        {"triangles", ex.levels[i].triangles},
                        {"error", to_string(ex.levels[i].error)}};
    if (i > 0 && i - 1 < ex.measured_ratios.size()) l["ratio"] = to_string(ex.measured_ratios[i - 1]);
    levels.push_back(l);
  }
  return {{"degree", ex.rule_degree},
          {"reference", to_string(ex.reference)},
          {"predicted_ratio", to_string(ex.predicted_ratio)},
          {"exact_integration", ex.exact_integration},
          {"levels", levels}};
}

}  // namespace trisym
