#pragma once

// Refinement of symmetric rules by nonlinear least squares on the moment
// equations. The orbit structure is fixed; the unknowns are each orbit's
// weight followed by its barycentric parameters.

#include "trisym/moments.hpp"
#include "trisym/quadrature_rule.hpp"
#include "trisym/scalar.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>
#include <json.hpp>

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace trisym {

template <class Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <class Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

/// Moment equations sum_i w_i l1^p l2^q = 2 p! q! / (p+q+2)! for all p+q <= d,
/// one residual per (p, q) in lexicographic order.
struct MomentSystem {
  int degree = 0;
  std::vector<OrbitKind> kinds;

  template <class Real>
  static MomentSystem of(const QuadratureRule<Real>& rule) {
    MomentSystem sys;
    sys.degree = rule.degree;
    for (const auto& o : rule.orbits) sys.kinds.push_back(o.kind);
    return sys;
  }

  int residual_dim() const { return monomial_count(degree); }
  int unknown_count() const {
    int n = 0;
    for (auto k : kinds) n += 1 + parameter_count(k);
    return n;
  }

  template <class Real>
  Vector<Real> pack(const QuadratureRule<Real>& rule) const {
    check_structure(rule);
    Vector<Real> x(unknown_count());
    int i = 0;
    for (const auto& o : rule.orbits) {
      x(i++) = o.weight;
      for (int j = 0; j < parameter_count(o.kind); ++j) x(i++) = o.params[static_cast<std::size_t>(j)];
    }
    return x;
  }

  template <class Real>
  QuadratureRule<Real> unpack(const Vector<Real>& x) const {
    check_size(x.size());
    QuadratureRule<Real> rule;
    rule.degree = degree;
    int i = 0;
    for (auto k : kinds) {
      Orbit<Real> o;
      o.kind = k;
      o.weight = x(i++);
      for (int j = 0; j < parameter_count(k); ++j) o.params[static_cast<std::size_t>(j)] = x(i++);
      rule.orbits.push_back(o);
    }
    return rule;
  }

  void check_size(Eigen::Index n) const;

  template <class Real>
  void check_structure(const QuadratureRule<Real>& rule) const {
    bool same = rule.degree == degree && rule.orbits.size() == kinds.size();
    for (std::size_t i = 0; same && i < kinds.size(); ++i) same = rule.orbits[i].kind == kinds[i];
    if (!same) throw Error(ErrorCode::DimensionMismatch, "rule does not match the moment system");
  }
};

namespace detail {

// One orbit point: (l1, l2) and their derivatives with respect to the
// orbit's (up to two) parameters.
template <class Real>
struct PointWithGradient {
  Real l1, l2;
  std::array<Real, 2> dl1{}, dl2{};
};

template <class Real>
std::vector<PointWithGradient<Real>> orbit_points(OrbitKind kind, const Real* params) {
  std::vector<PointWithGradient<Real>> pts;
  switch (kind) {
    case OrbitKind::Type0: {
      const Real t = Real(1) / Real(3);
      pts.push_back({t, t, {}, {}});
      break;
    }
    case OrbitKind::Type1: {
      const Real a = params[0];
      const Real b = (Real(1) - a) / Real(2);
      const Real da = 1, db = Real(-1) / Real(2);
      pts.push_back({a, b, {da, 0}, {db, 0}});
      pts.push_back({b, a, {db, 0}, {da, 0}});
      pts.push_back({b, b, {db, 0}, {db, 0}});
      break;
    }
    case OrbitKind::Type2: {
      const std::array<Real, 3> c{params[0], params[1], Real(1) - params[0] - params[1]};
      const std::array<std::array<Real, 2>, 3> dc{{{Real(1), Real(0)}, {Real(0), Real(1)}, {Real(-1), Real(-1)}}};
      constexpr int perms[6][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}};
      for (const auto& p : perms) {
        pts.push_back({c[static_cast<std::size_t>(p[0])], c[static_cast<std::size_t>(p[1])],
                       dc[static_cast<std::size_t>(p[0])], dc[static_cast<std::size_t>(p[1])]});
      }
      break;
    }
  }
  return pts;
}

template <class Real>
std::vector<Real> powers(const Real& x, int n) {
  std::vector<Real> out(static_cast<std::size_t>(n + 1));
  out[0] = 1;
  for (int i = 1; i <= n; ++i) out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i - 1)] * x;
  return out;
}

}  // namespace detail

template <class Real>
Vector<Real> moment_residuals(const MomentSystem& sys, const Vector<Real>& x) {
  sys.check_size(x.size());
  const int d = sys.degree;
  std::vector<CompensatedSum<Real>> sums(static_cast<std::size_t>(sys.residual_dim()));
  int row = 0;
  for (int p = 0; p <= d; ++p) {
    for (int q = 0; q <= d - p; ++q) {
      sums[static_cast<std::size_t>(row++)].add(-monomial_moment(p, q).template normalized_value<Real>());
    }
  }
  int col = 0;
  for (auto kind : sys.kinds) {
    const Real w = x(col);
    for (const auto& pt : detail::orbit_points<Real>(kind, x.data() + col + 1)) {
      const auto p1 = detail::powers(pt.l1, d);
      const auto p2 = detail::powers(pt.l2, d);
      row = 0;
      for (int p = 0; p <= d; ++p) {
        for (int q = 0; q <= d - p; ++q) {
          sums[static_cast<std::size_t>(row++)].add(w * p1[static_cast<std::size_t>(p)] * p2[static_cast<std::size_t>(q)]);
        }
      }
    }
    col += 1 + parameter_count(kind);
  }
  Vector<Real> r(sys.residual_dim());
  for (int i = 0; i < r.size(); ++i) r(i) = sums[static_cast<std::size_t>(i)].value();
  return r;
}

/// Analytic d r / d x: linear in the weights, power rule through the
/// permutation structure for the barycentric parameters.
template <class Real>
Matrix<Real> residual_jacobian(const MomentSystem& sys, const Vector<Real>& x) {
  sys.check_size(x.size());
  const int d = sys.degree;
  Matrix<Real> jac = Matrix<Real>::Zero(sys.residual_dim(), sys.unknown_count());
  int col = 0;
  for (auto kind : sys.kinds) {
    const Real w = x(col);
    const int np = parameter_count(kind);
    for (const auto& pt : detail::orbit_points<Real>(kind, x.data() + col + 1)) {
      const auto p1 = detail::powers(pt.l1, d);
      const auto p2 = detail::powers(pt.l2, d);
      int row = 0;
      for (int p = 0; p <= d; ++p) {
        for (int q = 0; q <= d - p; ++q, ++row) {
          const auto up = static_cast<std::size_t>(p);
          const auto uq = static_cast<std::size_t>(q);
          jac(row, col) += p1[up] * p2[uq];
          for (int j = 0; j < np; ++j) {
            Real g = 0;
            if (p > 0) g += Real(p) * p1[up - 1] * p2[uq] * pt.dl1[static_cast<std::size_t>(j)];
            if (q > 0) g += Real(q) * p1[up] * p2[uq - 1] * pt.dl2[static_cast<std::size_t>(j)];
            jac(row, col + 1 + j) += w * g;
          }
        }
      }
    }
    col += 1 + np;
  }
  return jac;
}

template <class Real>
struct RefinementReport {
  Real initial_residual_norm = 0;
  Real final_residual_norm = 0;
  Real final_step_norm = 0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
};

/// Residual-norm target used where a rule must be good to the last digits of
/// binary128: at 1e-30 the relative error of the smallest degree-8 moments of
/// the degree-9 rule is still about 3e-27.
inline constexpr double kFullPrecisionTol = 1e-32;

template <class Real>
struct RefineOptions {
  Real tol = Real(1e-30);
  int max_iter = 50;
  Real step_tol = Real(1e-32);
  Real initial_damping = Real(1e-12);
  Real degeneracy_tol = Real(1e-20);
};

template <class Real>
struct RefineResult {
  QuadratureRule<Real> rule;
  RefinementReport<Real> report;
};

/// Thrown when the iteration budget is exhausted or the iteration stalls
/// above tolerance; carries the report and the last iterate.
template <class Real>
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(RefineResult<Real> result, const std::string& what)
      : Error(ErrorCode::NoConvergence, what), result_(std::move(result)) {}
  const RefineResult<Real>& result() const { return result_; }

 private:
  RefineResult<Real> result_;
};

/// Throws StructureLost when an orbit is within `tol` of merging its points.
template <class Real>
void check_orbit_structure(const QuadratureRule<Real>& rule, const Real& tol) {
  using std::abs;
  for (std::size_t i = 0; i < rule.orbits.size(); ++i) {
    const auto& o = rule.orbits[i];
    bool degenerate = false;
    if (o.kind == OrbitKind::Type1) {
      degenerate = abs(o.params[0] - Real(1) / Real(3)) < tol;
    } else if (o.kind == OrbitKind::Type2) {
      const Real c = Real(1) - o.params[0] - o.params[1];
      degenerate = abs(o.params[0] - o.params[1]) < tol || abs(o.params[0] - c) < tol ||
                   abs(o.params[1] - c) < tol;
    }
    if (degenerate) {
      throw Error(ErrorCode::StructureLost, "orbit " + std::to_string(i) + " (" +
                                                std::string(to_string(o.kind)) + ") degenerated");
    }
  }
}

/// Levenberg-Marquardt on the moment residuals, starting from `seed`. Each
/// step solves the damped problem min |J dx + r|^2 + mu |D dx|^2 by QR, with
/// D the Jacobian column norms. Stops when |r| < tol or |dx| < step_tol.
template <class Real>
RefineResult<Real> refine_rule(const QuadratureRule<Real>& seed, const RefineOptions<Real>& opt = {}) {
  const auto sys = MomentSystem::of(seed);
  check_orbit_structure(seed, opt.degeneracy_tol);

  Vector<Real> x = sys.pack(seed);
  Vector<Real> r = moment_residuals(sys, x);
  Real rnorm = r.norm();

  RefineResult<Real> result;
  auto& rep = result.report;
  rep.initial_residual_norm = rnorm;

  const int m = sys.residual_dim();
  const int n = sys.unknown_count();
  Real mu = opt.initial_damping;
  const Real max_damping = Real(1e16);

  while (true) {
    if (rnorm < opt.tol) {
      rep.converged = true;
      rep.stop_reason = "residual below tolerance";
      break;
    }
    if (rep.iterations >= opt.max_iter) {
      rep.stop_reason = "iteration limit reached";
      break;
    }
    const Matrix<Real> jac = residual_jacobian(sys, x);
    Vector<Real> scale(n);
    for (int j = 0; j < n; ++j) {
      scale(j) = jac.col(j).norm();
      if (scale(j) == 0) scale(j) = 1;
    }

    bool accepted = false;
    while (!accepted) {
      using std::sqrt;
      Matrix<Real> a = Matrix<Real>::Zero(m + n, n);
      a.topRows(m) = jac;
      Vector<Real> b = Vector<Real>::Zero(m + n);
      b.head(m) = -r;
      const Real root_mu = sqrt(mu);
      for (int j = 0; j < n; ++j) a(m + j, j) = root_mu * scale(j);
      const Vector<Real> dx = a.colPivHouseholderQr().solve(b);
      rep.final_step_norm = dx.norm();

      const Vector<Real> x_new = x + dx;
      check_orbit_structure(sys.unpack(x_new), opt.degeneracy_tol);
      const Vector<Real> r_new = moment_residuals(sys, x_new);
      const Real rnorm_new = r_new.norm();
      if (rnorm_new < rnorm) {
        x = x_new;
        r = r_new;
        rnorm = rnorm_new;
        mu = mu / Real(10);
        accepted = true;
      } else {
        mu *= Real(10);
        if (mu > max_damping || rep.final_step_norm < opt.step_tol) break;
      }
    }
    ++rep.iterations;
    if (!accepted || rep.final_step_norm < opt.step_tol) {
      rep.converged = rnorm < opt.tol;
      rep.stop_reason = accepted ? "step below tolerance" : "no decrease along damped steps";
      break;
    }
  }

  rep.final_residual_norm = rnorm;
  result.rule = sys.unpack(x);
  if (!rep.converged) {
    throw NoConvergenceError<Real>(result, "refinement of degree-" + std::to_string(seed.degree) +
                                               " rule stopped: " + rep.stop_reason);
  }
  return result;
}

template <class Real>
nlohmann::json report_to_json(const RefinementReport<Real>& rep) {
  return {{"initial_residual_norm", to_string(rep.initial_residual_norm)},
          {"final_residual_norm", to_string(rep.final_residual_norm)},
          {"final_step_norm", to_string(rep.final_step_norm)},
          {"iterations", rep.iterations},
          {"converged", rep.converged},
          {"stop_reason", rep.stop_reason}};
}

}  // namespace trisym
