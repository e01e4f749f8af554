#include "trisym/catalog.hpp"
#include "trisym/integrand.hpp"
#include "trisym/quadrature_rule.hpp"
#include "trisym/rule_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace trisym;

namespace {

const int kPointCounts[] = {1, 3, 4, 6, 7, 12, 13, 16, 19, 25, 27};

template <class Real>
Triangle<Real> random_ccw_triangle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  for (;;) {
    Triangle<Real> t{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    const Real a = signed_area(t);
    if (abs(a) < Real(0.05)) continue;
    if (a < 0) std::swap(t.v2, t.v3);
    return t;
  }
}

}  // namespace

TEST_SUITE("rules") {
  TEST_CASE("orbit expansion") {
    const auto c = expand_orbit(Orbit<double>::centroid(0.25));
    REQUIRE(c.size() == 1);
    CHECK(c[0].point.lambda1 == 1.0 / 3);
    CHECK(c[0].weight == 0.25);

    const auto m = expand_orbit(Orbit<double>::median(0.6, 0.1));
    REQUIRE(m.size() == 3);
    CHECK(m[0].point == BarycentricPoint<double>{0.6, 0.2, 0.2});
    CHECK(m[1].point == BarycentricPoint<double>{0.2, 0.6, 0.2});
    CHECK(m[2].point == BarycentricPoint<double>{0.2, 0.2, 0.6});
    for (const auto& p : m) CHECK(p.weight == 0.1);

    // Oracle: brute-force permutations, deduplicated, lexicographically descending.
    const auto g = expand_orbit(Orbit<double>::general(0.5, 0.3, 0.05));
    std::array<double, 3> base{0.5, 0.3, 1 - 0.5 - 0.3};
    std::sort(base.begin(), base.end());
    std::set<std::array<double, 3>, std::greater<>> perms;
    do perms.insert(base);
    while (std::next_permutation(base.begin(), base.end()));
    REQUIRE(g.size() == perms.size());
    std::size_t i = 0;
    for (const auto& p : perms) {
      CHECK(g[i].point.lambda1 == p[0]);
      CHECK(g[i].point.lambda2 == p[1]);
      CHECK(g[i].point.lambda3 == p[2]);
      ++i;
    }

    CHECK_THROWS_AS(expand_orbit(Orbit<Extended>::median(Extended(1) / 3, 1)), Error);
    CHECK_THROWS_AS(expand_orbit(Orbit<double>::general(0.4, 0.3, 1)), Error);
    CHECK_THROWS_AS(expand_orbit(Orbit<double>::general(0.5, 0.25, 1)), Error);
  }

  TEST_CASE("catalog point counts and weight sums") {
    for (int d = 1; d <= 11; ++d) {
      const auto r = load_builtin_rule<double>(d);
      CHECK(r.degree == d);
      CHECK(static_cast<int>(rule_points(r).size()) == kPointCounts[d - 1]);
      CHECK(r.point_count() == r.n0() + 3 * r.n1() + 6 * r.n2());
      CHECK(std::abs(weight_sum(r) - 1) <= 16 * epsilon<double>());
      for (const auto& wp : rule_points(r)) CHECK(is_normalized(wp.point));
    }
    CHECK_THROWS_AS(load_builtin_rule<double>(0), Error);
    CHECK_THROWS_AS(load_builtin_rule<double>(12), Error);
  }

  TEST_CASE("low-degree catalog entries") {
    const auto r1 = load_builtin_rule<double>(1);
    REQUIRE(r1.orbits.size() == 1);
    CHECK(r1.orbits[0].kind == OrbitKind::Type0);
    CHECK(r1.orbits[0].weight == 1.0);

    const auto r3 = load_builtin_rule<Extended>(3);
    REQUIRE(r3.orbits.size() == 2);
    CHECK(r3.orbits[0].weight == Extended(-9) / 16);
    CHECK(r3.orbits[1].kind == OrbitKind::Type1);
    CHECK(r3.orbits[1].params[0] == Extended(3) / 5);
    CHECK(r3.orbits[1].weight == Extended(25) / 48);
    CHECK(r3.orbits[0].weight + 3 * r3.orbits[1].weight == 1);
    CHECK(load_builtin_rule<double>(4).point_count() == 6);
  }

  TEST_CASE("integrate_on_triangle examples") {
    const auto ref = reference_triangle<double>();
    for (int d = 1; d <= 11; ++d) {
      CHECK(integrate_on_triangle(load_builtin_rule<double>(d), ref, [](double, double) { return 1.0; }) ==
            doctest::Approx(0.5).epsilon(1e-15));
    }
    CHECK(integrate_on_triangle(load_builtin_rule<double>(1), ref, [](double x, double y) { return x + y; }) ==
          doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(integrate_on_triangle(load_builtin_rule<double>(3), ref, [](double x, double y) { return x * x * y; }) ==
          doctest::Approx(1.0 / 60).epsilon(1e-14));
    const Triangle<double> flat{{0, 0}, {1, 0}, {2, 0}};
    const Triangle<double> cw{{0, 0}, {0, 1}, {1, 0}};
    const auto one = [](double, double) { return 1.0; };
    CHECK_THROWS_AS(integrate_on_triangle(load_builtin_rule<double>(2), flat, one), Error);
    CHECK_THROWS_AS(integrate_on_triangle(load_builtin_rule<double>(2), cw, one), Error);
  }

  TEST_CASE("verify_degree") {
    for (int d = 1; d <= 11; ++d) {
      const auto rep = verify_degree(load_builtin_rule<double>(d), 1e-13);
      CHECK(rep.achieved_degree == d);
      CHECK(static_cast<int>(rep.max_residual_by_degree.size()) == d + 4);
    }
    const auto r1 = verify_degree(load_builtin_rule<double>(1), 1e-13);
    // Centroid rule on x^2: (1/3)^2 / 2 = 1/18 against 1/12.
    CHECK(r1.max_residual_by_degree[2] >= doctest::Approx(1.0 / 3));
  }

  TEST_CASE("vertex relabeling symmetry") {
    const auto& f = paper_integrand<Extended>();
    std::mt19937_64 rng(3);
    for (int d = 1; d <= 11; ++d) {
      const auto rule = load_builtin_rule<Extended>(d);
      const auto t = random_ccw_triangle<Extended>(rng);
      const Extended a = integrate_on_triangle(rule, t, f.eval);
      const Extended b = integrate_on_triangle(rule, Triangle<Extended>{t.v2, t.v3, t.v1}, f.eval);
      const Extended c = integrate_on_triangle(rule, Triangle<Extended>{t.v3, t.v1, t.v2}, f.eval);
      CHECK(abs(a - b) <= 32 * epsilon<Extended>() * abs(a));
      CHECK(abs(a - c) <= 32 * epsilon<Extended>() * abs(a));
    }
  }

  TEST_CASE("affine covariance under random maps") {
    // For a polynomial f of degree <= d, the rule is exact on both sides, so
    //   int_{M(T)} f = |det A| int_T f o M.
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1, 1);
    const auto rule = load_builtin_rule<double>(5);
    for (int trial = 0; trial < 100; ++trial) {
      double a11, a12, a21, a22;
      do {
        a11 = 2 * u(rng), a12 = 2 * u(rng), a21 = 2 * u(rng), a22 = 2 * u(rng);
      } while (std::abs(a11 * a22 - a12 * a21) < 0.1);
      const double b1 = u(rng), b2 = u(rng);
      double coef[21];
      for (double& c : coef) c = u(rng);
      const auto poly = [&coef](const double& x, const double& y) {
        double s = 0;
        int i = 0;
        for (int p = 0; p <= 5; ++p)
          for (int q = 0; p + q <= 5; ++q) s += coef[i++] * std::pow(x, p) * std::pow(y, q);
        return s;
      };
      const auto map = [&](const Point2<double>& p) {
        return Point2<double>{a11 * p.x + a12 * p.y + b1, a21 * p.x + a22 * p.y + b2};
      };
      const double det = a11 * a22 - a12 * a21;
      auto t = random_ccw_triangle<double>(rng);
      Triangle<double> mt{map(t.v1), map(t.v2), map(t.v3)};
      if (det < 0) std::swap(mt.v2, mt.v3);
      const double lhs = integrate_on_triangle(rule, mt, poly);
      const auto pulled = [&](const double& x, const double& y) {
        const auto p = map({x, y});
        return poly(p.x, p.y);
      };
      const double rhs = std::abs(det) * integrate_on_triangle(rule, t, pulled);
      // Bound relative to the magnitude of the summed monomial terms.
      const auto absf = [&](const double& x, const double& y) {
        const auto p = map({x, y});
        double s = 0;
        int i = 0;
        for (int a = 0; a <= 5; ++a)
          for (int b = 0; a + b <= 5; ++b) s += std::abs(coef[i++] * std::pow(p.x, a) * std::pow(p.y, b));
        return s;
      };
      const double scale = std::abs(det) * integrate_on_triangle(rule, t, absf);
      CHECK(std::abs(lhs - rhs) <= 64 * epsilon<double>() * scale);
    }
  }

  TEST_CASE("rule JSON round trip") {
    for (int d = 1; d <= 11; ++d) {
      const auto r = load_builtin_rule<Extended>(d);
      const auto text = rule_to_json(r).dump();
      const auto back = rule_from_json<Extended>(nlohmann::json::parse(text));
      REQUIRE(back.orbits.size() == r.orbits.size());
      for (std::size_t i = 0; i < r.orbits.size(); ++i) {
        CHECK(back.orbits[i].kind == r.orbits[i].kind);
        CHECK(back.orbits[i].weight == r.orbits[i].weight);
        CHECK(back.orbits[i].params == r.orbits[i].params);
      }
      CHECK(verify_degree(convert_rule<double>(back), 1e-13).achieved_degree == d);
    }
    CHECK_THROWS_AS(rule_from_json<double>(nlohmann::json::parse(R"({"degree":2})")), Error);
    CHECK_THROWS_AS(rule_from_json<double>(nlohmann::json::parse(
                        R"({"degree":2,"orbits":[{"kind":"Type1","params":[],"weight":"1"}]})")),
                    Error);
    CHECK_THROWS_AS(rule_from_json<double>(nlohmann::json::parse(
                        R"({"degree":2,"orbits":[{"kind":"Type9","params":[],"weight":"1"}]})")),
                    Error);
    const auto num = rule_from_json<double>(
        nlohmann::json::parse(R"({"degree":1,"orbits":[{"kind":"Type0","params":[],"weight":1.0}]})"));
    CHECK(num.orbits[0].weight == 1.0);
  }

  TEST_CASE("interior-point quality flag") {
    CHECK(all_points_inside(load_builtin_rule<double>(5)));
    CHECK_FALSE(all_points_inside(load_builtin_rule<double>(11)));
  }
}
