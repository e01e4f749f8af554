#include "trisym/mesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace trisym;

namespace {

void check_unit_square_mesh(const TriangleMesh& m) {
  CHECK(m.min_area() > 0);
  CHECK(std::abs(m.total_area() - 1) <= 1e-12 * static_cast<double>(m.size()));
  CHECK_FALSE(has_duplicate_vertices(m));
}

TriangleMesh single_triangle(const Triangle<double>& t) {
  TriangleMesh m;
  m.vertices = {t.v1, t.v2, t.v3};
  m.triangles = {{0, 1, 2}};
  return m;
}

std::vector<double> sorted_areas(const TriangleMesh& m) {
  std::vector<double> a;
  for (std::size_t j = 0; j < m.size(); ++j) a.push_back(signed_area(m.triangle<double>(j)));
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("structured counts and invariants") {
    CHECK(structured_mesh(1, 15).size() == 450);
    CHECK(structured_mesh(3, 15).size() == 4050);
    const auto two = structured_mesh(1, 1, 0.0);
    CHECK(two.size() == 2);
    CHECK(two.total_area() == 1.0);
    for (int k = 1; k <= 3; ++k) check_unit_square_mesh(structured_mesh(k, 5));
    CHECK(structured_mesh(2, 5).meta.provenance == MeshProvenance::Structured);
  }

  TEST_CASE("structured warp fixes the boundary and moves the interior") {
    const auto flat = structured_mesh(2, 5, 0.0);
    const auto warped = structured_mesh(2, 5);
    REQUIRE(flat.vertices.size() == warped.vertices.size());
    bool moved = false;
    for (std::size_t i = 0; i < flat.vertices.size(); ++i) {
      const auto& p = flat.vertices[i];
      const bool boundary = p.x == 0 || p.x == 1 || p.y == 0 || p.y == 1;
      if (boundary) CHECK(warped.vertices[i] == p);
      if (!boundary && !(warped.vertices[i] == p)) moved = true;
    }
    CHECK(moved);
    CHECK_THROWS_AS(structured_mesh(1, 5, 0.4), Error);
    CHECK_THROWS_AS(structured_mesh(0, 5), Error);
  }

  TEST_CASE("nested refinement") {
    const auto ref = single_triangle(reference_triangle<double>());
    const auto one = nested_mesh(ref, 1);
    CHECK(one.vertices == ref.vertices);
    CHECK(one.triangles == ref.triangles);

    const auto quarters = nested_mesh(ref, 2);
    REQUIRE(quarters.size() == 4);
    for (std::size_t j = 0; j < 4; ++j) CHECK(signed_area(quarters.triangle<double>(j)) == 0.125);

    // k = 3: the standard pattern has 6 translated copies of the scaled parent
    // and 3 point-reflected ones.
    const Triangle<double> parent{{0.1, 0.2}, {1.3, 0.5}, {0.4, 1.1}};
    const auto nine = nested_mesh(single_triangle(parent), 3);
    REQUIRE(nine.size() == 9);
    const double ex = (parent.v2.x - parent.v1.x) / 3, ey = (parent.v2.y - parent.v1.y) / 3;
    int upright = 0, inverted = 0;
    for (std::size_t j = 0; j < 9; ++j) {
      const auto t = nine.triangle<double>(j);
      for (int s = 0; s < 3; ++s) {
        const auto& a = t.vertex(s);
        const auto& b = t.vertex((s + 1) % 3);
        const double dx = b.x - a.x, dy = b.y - a.y;
        if (std::abs(dx - ex) < 1e-12 && std::abs(dy - ey) < 1e-12) ++upright;
        if (std::abs(dx + ex) < 1e-12 && std::abs(dy + ey) < 1e-12) ++inverted;
      }
      CHECK(signed_area(t) == doctest::Approx(signed_area(parent) / 9).epsilon(1e-12));
    }
    CHECK(upright == 6);
    CHECK(inverted == 3);

    const auto coarse = unstructured_mesh(1, 1, 5);
    const auto n6 = nested_mesh(coarse, 6);
    CHECK(n6.size() == 36 * coarse.size());
    CHECK(nested_mesh(nested_mesh(coarse, 2), 3).size() == n6.size());
    check_unit_square_mesh(n6);
    CHECK(n6.meta.provenance == MeshProvenance::NestedUnstructured);
  }

  TEST_CASE("unstructured meshes") {
    for (int k = 1; k <= 3; ++k) {
      const auto m = unstructured_mesh(k, 3);
      const double n = 450.0 * k * k;
      CHECK(static_cast<double>(m.size()) >= 0.9 * n);
      CHECK(static_cast<double>(m.size()) <= 1.1 * n);
      CHECK(std::abs(m.total_area() - 1) <= 1e-12);
      check_unit_square_mesh(m);
    }
    const auto a = unstructured_mesh(2, 7, 5), b = unstructured_mesh(2, 7, 5), c = unstructured_mesh(2, 8, 5);
    CHECK(a.vertices == b.vertices);
    CHECK(a.triangles == b.triangles);
    CHECK_FALSE(a.vertices == c.vertices);
    CHECK(*a.meta.seed == 7);
  }

  TEST_CASE("empty-circumcircle property, brute force") {
    using boost::multiprecision::float128;
    const auto m = unstructured_mesh(1, 42);
    int violations = 0;
    for (const auto& t : m.triangles) {
      const auto& A = m.vertices[static_cast<std::size_t>(t[0])];
      const auto& B = m.vertices[static_cast<std::size_t>(t[1])];
      const auto& C = m.vertices[static_cast<std::size_t>(t[2])];
      // Circumcentre by solving the perpendicular-bisector equations.
      const float128 ax = A.x, ay = A.y, bx = B.x, by = B.y, cx = C.x, cy = C.y;
      const float128 d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
      const float128 a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
      const float128 ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
      const float128 uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
      const float128 r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy);
      for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        if (static_cast<int>(i) == t[0] || static_cast<int>(i) == t[1] || static_cast<int>(i) == t[2]) continue;
        const float128 px = m.vertices[i].x, py = m.vertices[i].y;
        const float128 dist2 = (px - ux) * (px - ux) + (py - uy) * (py - uy);
        if (dist2 < r2 * (1 - float128(1e-20))) ++violations;
      }
    }
    CHECK(violations == 0);
  }

  TEST_CASE("Bowyer-Watson on small inputs") {
    const std::vector<Point2<double>> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto tris = delaunay_triangulate(square);
    CHECK(tris.size() == 2);
    const std::vector<Point2<double>> two{{0, 0}, {1, 0}};
    CHECK_THROWS_AS(delaunay_triangulate(two), Error);
  }

  TEST_CASE("rotations") {
    const auto m = unstructured_mesh(1, 5, 5);
    const auto r0 = rotate_mesh(m, 0);
    CHECK(r0.vertices == m.vertices);
    TriangleMesh corner;
    corner.vertices = {{0, 0}, {1, 0}, {0, 1}};
    corner.triangles = {{0, 1, 2}};
    CHECK(rotate_mesh(corner, 1).vertices[0] == Point2<double>{1, 0});

    const auto back = rotate_mesh(rotate_mesh(m, 2), 2);
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      CHECK(std::abs(back.vertices[i].x - m.vertices[i].x) <= 1e-15);
      CHECK(std::abs(back.vertices[i].y - m.vertices[i].y) <= 1e-15);
    }
    for (int q = 1; q <= 3; ++q) {
      const auto r = rotate_mesh(m, q);
      CHECK(r.meta.quarter_turns == q);
      CHECK(r.meta.provenance == MeshProvenance::Rotated);
      const auto a = sorted_areas(m), b = sorted_areas(r);
      for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-15);
    }
    CHECK_THROWS_AS(rotate_mesh(m, 4), Error);
    CHECK_THROWS_AS(rotate_mesh(m, -1), Error);
  }

  TEST_CASE("split4 at midpoints") {
    const auto ref = reference_triangle<Extended>();
    const Extended half = Extended(1) / 2;
    const auto parts = split4(ref, half, half, half);
    for (const auto& t : parts) CHECK(signed_area(t) / signed_area(ref) == Extended(1) / 4);
    const auto& c = parts[3];
    const std::array<Point2<Extended>, 3> mids{{{half, 0}, {half, half}, {0, half}}};
    for (const auto& v : {c.v1, c.v2, c.v3}) CHECK(std::find(mids.begin(), mids.end(), v) != mids.end());
  }

  TEST_CASE("split4 area ratios against the Jacobian determinants") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1, 1), delta(0, 0.1);
    const Triangle<double> tri{{0.2, 0.1}, {1.7, 0.4}, {0.5, 1.6}};
    const double area = signed_area(tri);
    for (int i = 0; i < 200; ++i) {
      const double dl = delta(rng);
      const double a = 0.5 + dl * u(rng), b = 0.5 + dl * u(rng), g = 0.5 + dl * u(rng);
      const auto parts = split4(tri, a, b, g);
      const double expected[4] = {(1 - a) * (1 - g), g * (1 - b), a * b, b * g + a * (1 - b - g)};
      double total = 0;
      for (int j = 0; j < 4; ++j) {
        const double ratio = signed_area(parts[static_cast<std::size_t>(j)]) / area;
        CHECK(ratio == doctest::Approx(expected[j]).epsilon(1e-12));
        total += ratio;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
    // Perturbing alpha alone: ratio (1) is (1/2 - da)/2.
    const double da = 0.01;
    const auto p = split4(tri, 0.5 + da, 0.5, 0.5);
    CHECK(signed_area(p[0]) / area == doctest::Approx(0.25 - da / 2).epsilon(1e-12));
    CHECK(signed_area(p[2]) / area == doctest::Approx(0.25 + da / 2).epsilon(1e-12));
  }

  TEST_CASE("mesh file round trip and metadata") {
    const auto m = unstructured_mesh(1, 9, 5);
    std::stringstream io;
    write_mesh(io, m);
    const auto back = read_mesh(io);
    CHECK(back.vertices == m.vertices);
    CHECK(back.triangles == m.triangles);
    check_unit_square_mesh(back);
    const auto meta = mesh_metadata_json(m);
    CHECK(meta.at("provenance") == "IndependentUnstructured");
    CHECK(meta.at("seed") == 9);
    CHECK(meta.contains("k"));
    CHECK(meta.contains("warp"));

    std::stringstream bad("3 1\n0 0\n1 0\n");
    CHECK_THROWS_AS(read_mesh(bad), Error);
    std::stringstream bad_index("3 1\n0 0\n1 0\n0 1\n0 1 5\n");
    CHECK_THROWS_AS(read_mesh(bad_index), Error);
  }
}
