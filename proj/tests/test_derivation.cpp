#include "trisym/catalog.hpp"
#include "trisym/derivation.hpp"

#include <doctest.h>

#include <random>

using namespace trisym;

TEST_SUITE("derivation") {
  TEST_CASE("system dimensions") {
    for (int d = 1; d <= 11; ++d) {
      const auto rule = load_builtin_rule<double>(d);
      const auto sys = MomentSystem::of(rule);
      CHECK(sys.residual_dim() == (d + 1) * (d + 2) / 2);
      CHECK(sys.unknown_count() == rule.n0() + 2 * rule.n1() + 3 * rule.n2());
      CHECK(sys.unpack<double>(sys.pack(rule)).orbits.size() == rule.orbits.size());
    }
  }

  TEST_CASE("residuals") {
    const auto r1 = load_builtin_rule<Extended>(1);
    const auto s1 = MomentSystem::of(r1);
    const auto res = moment_residuals(s1, s1.pack(r1));
    CHECK(res.size() == 3);
    for (int i = 0; i < res.size(); ++i) CHECK(res(i) == 0);

    const auto r2 = load_builtin_rule<Extended>(2);
    const auto s2 = MomentSystem::of(r2);
    auto x = s2.pack(r2);
    const Extended eps("1e-10");
    const Extended before = moment_residuals(s2, x)(0);
    x(0) += eps;
    CHECK(abs(moment_residuals(s2, x)(0) - before - 3 * eps) < Extended(1e-30));

    CHECK_THROWS_AS(moment_residuals(s2, Vector<Extended>(5)), Error);
    CHECK_THROWS_AS(residual_jacobian(s2, Vector<Extended>(1)), Error);
  }

  TEST_CASE("published double seed evaluated in extended precision") {
    const auto seed = convert_rule<Extended>(load_builtin_rule<double>(8));
    const auto sys = MomentSystem::of(seed);
    const Extended norm = moment_residuals(sys, sys.pack(seed)).norm();
    CHECK(norm > Extended(1e-17));
    CHECK(norm < Extended(1e-14));
  }

  TEST_CASE("Jacobian structure") {
    const auto r3 = load_builtin_rule<Extended>(3);  // Type0 then Type1
    const auto sys = MomentSystem::of(r3);
    const auto jac = residual_jacobian(sys, sys.pack(r3));
    CHECK(jac.cols() == 3);
    // Constant monomial: three points share the Type1 weight.
    CHECK(jac(0, 1) == 3);
    CHECK(jac(0, 0) == 1);
    // The centroid orbit contributes only a weight column: (1/3)^(p+q).
    int row = 0;
    for (int p = 0; p <= 3; ++p) {
      for (int q = 0; p + q <= 3; ++q) {
        CHECK(abs(jac(row, 0) - pow(Extended(1) / 3, p + q)) < Extended(1e-32));
        ++row;
      }
    }
  }

  TEST_CASE("Jacobian against central finite differences") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    const Extended h("1e-20");
    for (int d = 1; d <= 11; ++d) {
      const auto rule = load_builtin_rule<Extended>(d);
      const auto sys = MomentSystem::of(rule);
      for (int trial = 0; trial < 3; ++trial) {
        Vector<Extended> x = sys.pack(rule);
        for (int i = 0; i < x.size(); ++i) x(i) *= 1 + Extended(1e-3) * u(rng);
        const auto jac = residual_jacobian(sys, x);
        for (int j = 0; j < x.size(); ++j) {
          Vector<Extended> xp = x, xm = x;
          xp(j) += h;
          xm(j) -= h;
          const Vector<Extended> fd = (moment_residuals(sys, xp) - moment_residuals(sys, xm)) / (2 * h);
          for (int i = 0; i < fd.size(); ++i) {
            const Extended ref = abs(jac(i, j)) > 1 ? abs(jac(i, j)) : Extended(1);
            CHECK(abs(fd(i) - jac(i, j)) <= Extended(1e-8) * ref);
          }
        }
      }
    }
  }

  TEST_CASE("refinement of every catalog rule") {
    for (int d = 1; d <= 11; ++d) {
      CAPTURE(d);
      const auto seed = convert_rule<Extended>(load_builtin_rule<double>(d));
      const auto res = refine_rule(seed);
      CHECK(res.report.converged);
      CHECK(res.report.final_residual_norm < Extended(1e-30));
      CHECK(verify_degree(res.rule, Extended(1e-26)).achieved_degree == d);

      RefineOptions<Extended> full;
      full.tol = Extended(kFullPrecisionTol);
      const auto res_full = refine_rule(seed, full);
      CHECK(res_full.report.final_residual_norm < Extended(kFullPrecisionTol));
      CHECK(res.report.final_residual_norm <= res.report.initial_residual_norm);
      CHECK(res.rule.n0() == seed.n0());
      CHECK(res.rule.n1() == seed.n1());
      CHECK(res.rule.n2() == seed.n2());
      CHECK(abs(weight_sum(res.rule) - 1) < Extended(1e-30));
      CHECK(verify_degree(res_full.rule, Extended(1e-28)).achieved_degree == d);

      const auto again = refine_rule(res.rule);
      CHECK(again.report.iterations <= 2);
      CHECK(again.report.final_residual_norm <= res.report.final_residual_norm);
    }
    const auto r1 = refine_rule(load_builtin_rule<Extended>(1));
    CHECK(r1.report.iterations <= 1);
    CHECK(r1.report.final_residual_norm == 0);
  }

  TEST_CASE("refinement failures") {
    QuadratureRule<Extended> bad;
    bad.degree = 2;
    bad.orbits.push_back(Orbit<Extended>::median(Extended(1) / 3 + Extended(1e-25), Extended(1) / 3));
    CHECK_THROWS_WITH_AS(refine_rule(bad), doctest::Contains("degenerated"), Error);
    try {
      refine_rule(bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::StructureLost);
    }

    auto far = load_builtin_rule<Extended>(6);
    for (auto& o : far.orbits) o.weight *= Extended(1.3);
    RefineOptions<Extended> opt;
    opt.max_iter = 1;
    bool thrown = false;
    try {
      refine_rule(far, opt);
    } catch (const NoConvergenceError<Extended>& e) {
      thrown = true;
      CHECK(e.code() == ErrorCode::NoConvergence);
      CHECK_FALSE(e.result().report.converged);
      CHECK(e.result().report.iterations == 1);
      CHECK(e.result().rule.orbits.size() == far.orbits.size());
    }
    CHECK(thrown);
  }

  TEST_CASE("report JSON") {
    const auto res = refine_rule(convert_rule<Extended>(load_builtin_rule<double>(4)));
    const auto j = report_to_json(res.report);
    CHECK(j.at("converged").get<bool>());
    CHECK(from_string<Extended>(j.at("final_residual_norm").get<std::string>()) == res.report.final_residual_norm);
    CHECK(j.contains("iterations"));
  }
}
