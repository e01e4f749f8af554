// trisym: symmetric triangle rules, meshes and convergence studies.
//
// Exit status: 0 success, 1 computation failure, 2 usage error.

#include "trisym/catalog.hpp"
#include "trisym/convergence.hpp"
#include "trisym/derivation.hpp"
#include "trisym/mesh.hpp"
#include "trisym/rule_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace trisym;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_atomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

Precision resolve_precision(const std::string& flag, Precision fallback) {
  try {
    if (!flag.empty()) return parse_precision(flag);
    if (const char* env = std::getenv("TRISYM_PRECISION"); env != nullptr && *env != '\0') {
      return parse_precision(env);
    }
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return fallback;
}

void check_degree(int d) {
  if (d < kMinCatalogDegree || d > kMaxCatalogDegree) {
    throw UsageError("degree must be in " + std::to_string(kMinCatalogDegree) + ".." +
                     std::to_string(kMaxCatalogDegree));
  }
}

// ---- rules ----------------------------------------------------------------

int rules_list() {
  std::cout << std::setw(3) << "d" << std::setw(5) << "n" << std::setw(5) << "p" << '\n';
  for (int d = kMinCatalogDegree; d <= kMaxCatalogDegree; ++d) {
    const auto rule = load_builtin_rule<double>(d);
    std::cout << std::setw(3) << d << std::setw(5) << rule.point_count() << std::setw(5) << expected_rate(d)
              << '\n';
  }
  return kOk;
}

template <class Real>
int rules_show(int d) {
  const auto rule = load_builtin_rule<Real>(d);
  std::cout << "degree " << d << ", " << rule.point_count() << " points (" << rule.n0() << " Type0, " << rule.n1()
            << " Type1, " << rule.n2() << " Type2 orbits), " << ScalarTraits<Real>::name << " precision\n";
  std::cout << "orbits:\n";
  for (const auto& o : rule.orbits) {
    std::cout << "  " << to_string(o.kind);
    for (int i = 0; i < parameter_count(o.kind); ++i) std::cout << "  lambda" << i + 1 << '=' << to_string(o.params[i]);
    std::cout << "  weight=" << to_string(o.weight) << '\n';
  }
  std::cout << "points (lambda1 lambda2 lambda3 weight):\n";
  for (const auto& wp : rule_points(rule)) {
    std::cout << "  " << to_string(wp.point.lambda1) << ' ' << to_string(wp.point.lambda2) << ' '
              << to_string(wp.point.lambda3) << ' ' << to_string(wp.weight) << '\n';
  }
  return kOk;
}

int rules_derive(int d, double tol, const std::string& out_path) {
  RefineOptions<Extended> opt;
  opt.tol = Extended(tol);
  const auto seed = convert_rule<Extended>(load_builtin_rule<double>(d));
  nlohmann::json doc;
  int status = kOk;
  try {
    const auto result = refine_rule(seed, opt);
    doc = {{"rule", rule_to_json(result.rule)}, {"report", report_to_json(result.report)}};
  } catch (const NoConvergenceError<Extended>& e) {
    doc = {{"rule", rule_to_json(e.result().rule)}, {"report", report_to_json(e.result().report)}};
    std::cerr << "error: " << e.what() << '\n';
    status = kFailure;
  }
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_atomically(out_path, text);
    std::cout << "wrote " << out_path << '\n';
  }
  return status;
}

template <class Real>
int rules_verify(int d, const std::string& file, std::optional<double> tol_flag) {
  QuadratureRule<Real> rule;
  if (file.empty()) {
    rule = load_builtin_rule<Real>(d);
  } else {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot open " + file);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    rule = rule_from_json<Real>(j.contains("rule") ? j.at("rule") : j);
  }
  const double default_tol = ScalarTraits<Real>::precision == Precision::Extended ? 1e-28 : 1e-13;
  const Real tol = Real(tol_flag.value_or(default_tol));
  const auto report = verify_degree(rule, tol);
  std::cout << "rule degree " << rule.degree << ", " << rule.point_count() << " points, tolerance "
            << to_string(tol) << '\n';
  for (std::size_t m = 0; m < report.max_residual_by_degree.size(); ++m) {
    const Real r = report.max_residual_by_degree[m];
    std::cout << "  degree " << std::setw(2) << m << "  max relative residual " << to_string(r)
              << (r < tol ? "" : "  (fails)") << '\n';
  }
  std::cout << "achieved_degree " << report.achieved_degree << '\n';
  return report.achieved_degree >= rule.degree ? kOk : kFailure;
}

// ---- mesh -----------------------------------------------------------------

int cmd_mesh(const std::string& kind, int k, int base, std::uint64_t seed, double warp, const std::string& out) {
  if (k < 1) throw UsageError("k must be >= 1");
  if (base < 1) throw UsageError("base must be >= 1");
  TriangleMesh mesh;
  if (kind == "structured") {
    mesh = structured_mesh(k, base, warp);
  } else if (kind == "nested") {
    mesh = nested_mesh(unstructured_mesh(1, seed, base), k);
  } else if (kind == "unstructured") {
    mesh = unstructured_mesh(k, seed, base);
  } else {
    throw UsageError("unknown mesh kind '" + kind + "'");
  }
  if (!out.empty()) {
    std::ostringstream text;
    write_mesh(text, mesh);
    write_atomically(out, text.str());
    write_atomically(out + ".json", mesh_metadata_json(mesh).dump(2) + "\n");
  }
  std::cout << "N " << mesh.size() << '\n' << "total_area " << to_string(mesh.total_area()) << '\n';
  return kOk;
}

// ---- study ----------------------------------------------------------------

int cmd_study(const StudyConfig& config, const std::string& out_dir, std::optional<double> gate) {
  try {
    validate(config);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const ConvergenceStudy study = run_study(config);

  std::ostringstream csv;
  write_study_csv(csv, study);
  std::cout << csv.str();
  const auto summary = study_summary_json(study);
  std::cout << "global_p " << to_string(study.fitted_rate_global) << '\n'
            << "expected_p " << study.expected_rate << '\n';

  if (!out_dir.empty()) {
    const std::string stem = std::string(to_string(config.sequence)) + "_d" + std::to_string(config.degree);
    std::ostringstream dat;
    write_plot_data(dat, study);
    write_atomically(fs::path(out_dir) / (stem + ".csv"), csv.str());
    write_atomically(fs::path(out_dir) / (stem + ".json"), summary.dump(2) + "\n");
    write_atomically(fs::path(out_dir) / (stem + ".dat"), dat.str());
  }
  if (gate) {
    const double miss = std::abs(study.fitted_rate_global - study.expected_rate);
    if (miss > *gate) {
      std::cerr << "rate gate missed: |" << study.fitted_rate_global << " - " << study.expected_rate
                << "| > " << *gate << '\n';
      return kFailure;
    }
  }
  return kOk;
}

// ---- ratio ----------------------------------------------------------------

template <class Real>
int cmd_ratio(int d, int levels, bool json) {
  const auto rule = study_rule<Real>(d);
  const auto ex = subdivision_ratio_experiment(rule, paper_integrand<Real>(), reference_triangle<Real>(), levels);
  if (json) {
    std::cout << ratio_to_json(ex).dump(2) << '\n';
    return kOk;
  }
  std::cout << "degree " << d << ", reference " << to_string(ex.reference) << '\n';
  if (ex.exact_integration) {
    std::cout << "ExactIntegration: the rule integrates f exactly at every level\n";
    return kOk;
  }
  std::cout << "level triangles h error measured_ratio predicted_ratio\n";
  for (std::size_t i = 0; i < ex.levels.size(); ++i) {
    const auto& l = ex.levels[i];
    std::cout << i << ' ' << l.triangles << ' ' << to_string(convert<double>(l.h)) << ' '
              << to_string(convert<double>(l.error)) << ' '
              << (i == 0 ? std::string("-") : to_string(convert<double>(ex.measured_ratios[i - 1]))) << ' '
              << to_string(convert<double>(ex.predicted_ratio)) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric triangle quadrature rules and convergence studies"};
  app.require_subcommand(1);

  // rules
  auto* rules = app.add_subcommand("rules", "Inspect, derive and verify the built-in rules");
  rules->require_subcommand(1);
  auto* r_list = rules->add_subcommand("list", "Table of degree d, points n and convergence rate p");
  int show_d = 0;
  std::string show_prec;
  auto* r_show = rules->add_subcommand("show", "Orbits and expanded points of one rule");
  r_show->add_option("d", show_d, "Degree")->required();
  r_show->add_option("--precision", show_prec, "double or extended");
  int derive_d = 0;
  double derive_tol = 1e-30;
  std::string derive_out;
  auto* r_derive = rules->add_subcommand("derive", "Refine a rule in extended precision and emit JSON");
  r_derive->add_option("d", derive_d, "Degree")->required();
  r_derive->add_option("--tol", derive_tol, "Residual-norm tolerance");
  r_derive->add_option("--out", derive_out, "Output file (default stdout)");
  int verify_d = 0;
  std::string verify_file, verify_prec;
  std::optional<double> verify_tol;
  auto* r_verify = rules->add_subcommand("verify", "Moment residuals per degree");
  r_verify->add_option("d", verify_d, "Degree of the built-in rule");
  r_verify->add_option("--file", verify_file, "Rule JSON to verify instead of the built-in rule");
  r_verify->add_option("--tol", verify_tol, "Relative tolerance (default 1e-13 double, 1e-28 extended)");
  r_verify->add_option("--precision", verify_prec, "double or extended");

  // mesh
  std::string mesh_kind, mesh_out;
  int mesh_k = 1, mesh_base = kPaperBase;
  std::uint64_t mesh_seed = 1;
  double mesh_warp = kDefaultWarp;
  auto* mesh = app.add_subcommand("mesh", "Generate a mesh of the unit square");
  mesh->add_option("kind", mesh_kind, "structured, nested or unstructured")->required();
  mesh->add_option("k", mesh_k, "Refinement level")->required();
  mesh->add_option("--base", mesh_base, "Base subdivision (N = 2 base^2 k^2 for structured)");
  mesh->add_option("--seed", mesh_seed, "Seed for unstructured point sets");
  mesh->add_option("--warp", mesh_warp, "Warp amplitude of the structured mesh");
  mesh->add_option("--out", mesh_out, "Mesh file; metadata goes to <out>.json");

  // study
  StudyConfig config;
  std::string study_seq = "structured", study_prec, study_out;
  std::optional<double> gate;
  bool paper_scale = false;
  auto* study = app.add_subcommand("study", "Convergence study of one rule on one mesh sequence");
  study->add_option("--sequence", study_seq, "structured, nested or unstructured");
  study->add_option("--degree", config.degree, "Rule degree")->required();
  study->add_option("--kmax", config.k_max, "Finest level");
  study->add_option("--base", config.base, "Base subdivision");
  study->add_option("--precision", study_prec, "double or extended (default: $TRISYM_PRECISION or double)");
  study->add_flag("--rotations", config.rotations, "Average over four quarter-turn rotations");
  study->add_option("--seed", config.rng_seed, "Seed for unstructured meshes");
  study->add_option("--warp", config.warp, "Warp amplitude of the structured mesh");
  study->add_option("--threads", config.threads, "Worker threads per level (0 = all cores)");
  study->add_option("--out-dir", study_out, "Directory for CSV, JSON and plot data");
  study->add_option("--gate", gate, "Fail when |fitted p - expected p| exceeds this");
  study->add_flag("--paper-scale", paper_scale, "base 15, kmax 10");

  // ratio
  int ratio_d = 1, ratio_levels = 6;
  std::string ratio_prec;
  bool ratio_json = false;
  auto* ratio = app.add_subcommand("ratio", "Error ratio under midpoint subdivision of one triangle");
  ratio->add_option("--degree", ratio_d, "Rule degree")->required();
  ratio->add_option("--levels", ratio_levels, "Number of subdivision levels");
  ratio->add_option("--precision", ratio_prec, "double or extended (default extended)");
  ratio->add_flag("--json", ratio_json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*rules) {
      if (*r_list) return rules_list();
      if (*r_show) {
        check_degree(show_d);
        return resolve_precision(show_prec, Precision::Double) == Precision::Double ? rules_show<double>(show_d)
                                                                                     : rules_show<Extended>(show_d);
      }
      if (*r_derive) {
        check_degree(derive_d);
        if (!(derive_tol > 0)) throw UsageError("--tol must be positive");
        return rules_derive(derive_d, derive_tol, derive_out);
      }
      if (*r_verify) {
        if (verify_file.empty()) check_degree(verify_d);
        return resolve_precision(verify_prec, Precision::Double) == Precision::Double
                   ? rules_verify<double>(verify_d, verify_file, verify_tol)
                   : rules_verify<Extended>(verify_d, verify_file, verify_tol);
      }
    }
    if (*mesh) return cmd_mesh(mesh_kind, mesh_k, mesh_base, mesh_seed, mesh_warp, mesh_out);
    if (*study) {
      try {
        config.sequence = parse_sequence(study_seq);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      config.precision = resolve_precision(study_prec, Precision::Double);
      if (paper_scale) config.base = kPaperBase, config.k_max = 10;
      return cmd_study(config, study_out, gate);
    }
    if (*ratio) {
      check_degree(ratio_d);
      if (ratio_levels < 2) throw UsageError("--levels must be >= 2");
      const Precision p = resolve_precision(ratio_prec, Precision::Extended);
      if (p == Precision::Double && ratio_d >= 4) throw UsageError("degree >= 4 needs extended precision");
      return p == Precision::Double ? cmd_ratio<double>(ratio_d, ratio_levels, ratio_json)
                                    : cmd_ratio<Extended>(ratio_d, ratio_levels, ratio_json);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
