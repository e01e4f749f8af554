#include "trisym/convergence.hpp"

#include "trisym/catalog.hpp"
#include "trisym/derivation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace trisym {

RateFit estimate_rate(std::span<const std::pair<double, double>> levels) {
  if (levels.size() < 2) throw Error(ErrorCode::InsufficientLevels, "rate fit needs at least two levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i].second > 0.0)) {
      throw Error(ErrorCode::ZeroError, "error at level " + std::to_string(i) +
                                            " is zero; it is below the precision of the mode");
    }
    if (!(levels[i].first > 0.0) || (i > 0 && !(levels[i].first < levels[i - 1].first))) {
      throw Error(ErrorCode::InvalidArgument, "h must be positive and strictly decreasing");
    }
  }
  RateFit fit;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    fit.pairwise.push_back(std::log(levels[i].second / levels[i + 1].second) /
                           std::log(levels[i].first / levels[i + 1].first));
  }
  const double n = static_cast<double>(levels.size());
  double mx = 0, my = 0;
  for (const auto& [h, e] : levels) mx += std::log(h), my += std::log(e);
  mx /= n, my /= n;
  double sxy = 0, sxx = 0;
  for (const auto& [h, e] : levels) {
    const double dx = std::log(h) - mx;
    sxy += dx * (std::log(e) - my);
    sxx += dx * dx;
  }
  fit.global = sxy / sxx;
  return fit;
}

int expected_rate(int degree) {
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  return degree % 2 == 1 ? degree + 1 : degree + 2;
}

std::string_view to_string(MeshSequence s) {
  switch (s) {
    case MeshSequence::Structured:
      return "structured";
    case MeshSequence::NestedUnstructured:
      return "nested";
    case MeshSequence::IndependentUnstructured:
      return "unstructured";
  }
  return "?";
}

MeshSequence parse_sequence(std::string_view name) {
  if (name == "structured") return MeshSequence::Structured;
  if (name == "nested") return MeshSequence::NestedUnstructured;
  if (name == "unstructured" || name == "independent") return MeshSequence::IndependentUnstructured;
  throw Error(ErrorCode::InvalidArgument, "unknown mesh sequence '" + std::string(name) + "'");
}

void validate(const StudyConfig& c) {
  if (c.degree < 1 || c.degree > kMaxCatalogDegree) {
    throw Error(ErrorCode::UnsupportedDegree, "degree " + std::to_string(c.degree) + " is outside 1.." +
                                                  std::to_string(kMaxCatalogDegree));
  }
  if (c.k_max < 2) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 2 to fit a rate");
  if (c.base < 1) throw Error(ErrorCode::InvalidArgument, "base must be >= 1");
  if (c.rotations && c.sequence != MeshSequence::IndependentUnstructured) {
    throw Error(ErrorCode::InvalidArgument, "rotations apply to the independent unstructured sequence only");
  }
  if (!(c.warp >= 0.0) || !(c.warp < 1.0 / std::numbers::pi)) {
    throw Error(ErrorCode::WarpTooLarge, "warp must lie in [0, 1/pi)");
  }
}

nlohmann::json to_json(const StudyConfig& c) {
  return {{"sequence", to_string(c.sequence)}, {"degree", c.degree},
          {"k_max", c.k_max},                  {"base", c.base},
          {"precision", to_string(c.precision)}, {"rotations", c.rotations},
          {"rng_seed", c.rng_seed},            {"warp", c.warp}};
}

template <class Real>
QuadratureRule<Real> study_rule(int degree) {
  if constexpr (ScalarTraits<Real>::precision == Precision::Double) {
    return load_builtin_rule<double>(degree);
  } else {
    RefineOptions<Real> opt;
    opt.tol = Real(kFullPrecisionTol);
    return refine_rule(load_builtin_rule<Real>(degree), opt).rule;
  }
}

template QuadratureRule<double> study_rule<double>(int);
template QuadratureRule<Extended> study_rule<Extended>(int);

TriangleMesh study_mesh(const StudyConfig& c, int k) {
  switch (c.sequence) {
    case MeshSequence::Structured:
      return structured_mesh(k, c.base, c.warp);
    case MeshSequence::NestedUnstructured:
      return nested_mesh(unstructured_mesh(1, c.rng_seed, c.base), k);
    case MeshSequence::IndependentUnstructured:
      return unstructured_mesh(k, c.rng_seed + static_cast<std::uint64_t>(k - 1), c.base);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mesh sequence");
}

namespace {

template <class Real>
ConvergenceStudy run_study_impl(const StudyConfig& c) {
  using std::abs;
  const auto& f = paper_integrand<Real>();
  const Real exact = *f.exact_integral;
  const auto rule = study_rule<Real>(c.degree);
  const double floor = 100.0 * convert<double>(epsilon<Real>());

  ConvergenceStudy study;
  study.config = c;
  study.exact_integral = to_string(exact);
  study.expected_rate = expected_rate(c.degree);

  for (int k = 1; k <= c.k_max; ++k) {
    StudyLevel level;
    level.k = k;
    try {
      const TriangleMesh mesh = study_mesh(c, k);
      level.triangles = mesh.size();
      level.h = c.sequence == MeshSequence::IndependentUnstructured ? mesh.median_diameter()
                                                                    : 1.0 / (c.base * static_cast<double>(k));
      if (c.rotations) {
        CompensatedSum<Real> err_sum, val_sum;
        for (int r = 0; r < 4; ++r) {
          const Real value = integrate_mesh<Real>(rotate_mesh(mesh, r), rule, f, c.threads);
          const Real e = (exact - value) / exact;
          level.rotation_errors.push_back(convert<double>(e));
          err_sum.add(e);
          val_sum.add(value);
        }
        const Real mean = err_sum.value() / Real(4);
        level.integral = to_string(Real(val_sum.value() / Real(4)));
        level.signed_error = convert<double>(mean);
        level.epsilon = convert<double>(Real(abs(mean)));
      } else {
        const Real value = integrate_mesh<Real>(mesh, rule, f, c.threads);
        const Real e = (exact - value) / exact;
        level.integral = to_string(value);
        level.signed_error = convert<double>(e);
        level.epsilon = convert<double>(Real(abs(e)));
      }
    } catch (const Error& e) {
      throw Error(e.code(), "level k=" + std::to_string(k) + ": " + e.what());
    }
    level.excluded = level.epsilon < floor;
    study.levels.push_back(std::move(level));
  }

  std::vector<std::pair<double, double>> fit_input;
  std::vector<StudyLevel*> used;
  for (auto& l : study.levels) {
    if (!l.excluded) {
      fit_input.emplace_back(l.h, l.epsilon);
      used.push_back(&l);
    }
  }
  if (fit_input.size() < 2) {
    throw Error(ErrorCode::ZeroError, "fewer than two levels above the round-off floor of " +
                                          std::string(to_string(c.precision)) + " mode; use extended precision");
  }
  const RateFit fit = estimate_rate(fit_input);
  for (std::size_t i = 0; i < fit.pairwise.size(); ++i) used[i + 1]->pairwise_rate = fit.pairwise[i];
  study.fitted_rate_pairwise = fit.pairwise;
  study.fitted_rate_global = fit.global;
  return study;
}

std::string num(double x) { return to_string(x); }

}  // namespace

ConvergenceStudy run_study(const StudyConfig& config) {
  validate(config);
  return config.precision == Precision::Double ? run_study_impl<double>(config) : run_study_impl<Extended>(config);
}

void write_study_csv(std::ostream& out, const ConvergenceStudy& s) {
  out << "k,N,h,I_tilde,epsilon,pairwise_p";
  if (s.config.rotations) out << ",e_rot0,e_rot1,e_rot2,e_rot3,e_mean";
  out << ",excluded\n";
  for (const auto& l : s.levels) {
    out << l.k << ',' << l.triangles << ',' << num(l.h) << ',' << l.integral << ',' << num(l.epsilon) << ','
        << (l.pairwise_rate ? num(*l.pairwise_rate) : std::string());
    if (s.config.rotations) {
      for (double e : l.rotation_errors) out << ',' << num(e);
      out << ',' << num(l.signed_error);
    }
    out << ',' << (l.excluded ? 1 : 0) << '\n';
  }
}

void write_plot_data(std::ostream& out, const ConvergenceStudy& s) {
  out << "# h epsilon (degree " << s.config.degree << ", " << to_string(s.config.sequence) << ")\n";
  for (const auto& l : s.levels) {
    if (!l.excluded) out << num(l.h) << ' ' << num(l.epsilon) << '\n';
  }
}

nlohmann::json study_summary_json(const ConvergenceStudy& s) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : s.levels) {
    nlohmann::json j = {{"k", l.k},
                        {"N", l.triangles},
                        {"h", num(l.h)},
                        {"I_tilde", l.integral},
                        {"epsilon", num(l.epsilon)},
                        {"signed_error", num(l.signed_error)},
                        {"excluded", l.excluded}};
    if (l.pairwise_rate) j["pairwise_p"] = num(*l.pairwise_rate);
    if (!l.rotation_errors.empty()) {
      nlohmann::json r = nlohmann::json::array();
      for (double e : l.rotation_errors) r.push_back(num(e));
      j["rotation_errors"] = r;
    }
    levels.push_back(j);
  }
  nlohmann::json pairwise = nlohmann::json::array();
  for (double p : s.fitted_rate_pairwise) pairwise.push_back(num(p));
  return {{"config", to_json(s.config)},
          {"exact_integral", s.exact_integral},
          {"global_p", num(s.fitted_rate_global)},
          {"pairwise_p", pairwise},
          {"expected_p", s.expected_rate},
          {"levels", levels}};
}

}  // namespace trisym
