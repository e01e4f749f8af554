#pragma once

// Triangle meshes of the unit square and the generators for the three
// refinement sequences (structured, nested unstructured, independent
// unstructured), plus rotations and the four-subtriangle split.

#include "trisym/error.hpp"
#include "trisym/geometry.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trisym {

enum class MeshProvenance { Structured, NestedUnstructured, IndependentUnstructured, Rotated, Synthetic };

std::string_view to_string(MeshProvenance p);
MeshProvenance parse_provenance(std::string_view name);

struct MeshMetadata {
  MeshProvenance provenance = MeshProvenance::Synthetic;
  int k = 1;
  int base = 0;
  std::optional<std::uint64_t> seed;
  double warp = 0.0;
  int quarter_turns = 0;
};

/// Vertices are built in double precision; extended-precision integration
/// converts them exactly.
struct TriangleMesh {
  std::vector<Point2<double>> vertices;
  std::vector<std::array<int, 3>> triangles;
  MeshMetadata meta;

  std::size_t size() const { return triangles.size(); }

  template <class Real>
  Triangle<Real> triangle(std::size_t j) const {
    const auto& t = triangles[j];
    return {convert_point<Real>(vertices[static_cast<std::size_t>(t[0])]),
            convert_point<Real>(vertices[static_cast<std::size_t>(t[1])]),
            convert_point<Real>(vertices[static_cast<std::size_t>(t[2])])};
  }

  /// Compensated sum of signed triangle areas.
  double total_area() const;
  double min_area() const;
  double median_diameter() const;
};

struct MeshLevel {
  int k = 1;
  std::size_t triangle_count = 0;
  double h = 0.0;
};

inline constexpr int kPaperBase = 15;
inline constexpr double kDefaultWarp = 0.06;

/// Uniform (base k) x (base k) grid split into 2 (base k)^2 triangles, then
/// every vertex mapped through
///   T(x, y) = (x + w s(x, y), y + w s(x, y)),  s = sin(pi x) sin(pi y),
/// which fixes the boundary and is injective for w < 1/pi. Throws
/// WarpTooLarge otherwise or when a mapped triangle loses positive area.
TriangleMesh structured_mesh(int k, int base = kPaperBase, double warp = kDefaultWarp);

/// Splits every triangle into k^2 similar subtriangles by k-sectioning its
/// edges. Points on shared edges are generated once, so the output has no
/// duplicate vertices.
TriangleMesh nested_mesh(const TriangleMesh& coarse, int k);

/// Delaunay triangulation of (base k + 1)^2 points: the boundary of the
/// square sampled at spacing 1/(base k) and the interior grid jittered by up
/// to 0.3 spacing from a seeded generator. Deterministic per seed. On a
/// degenerate triangulation it retries once with a perturbed seed, then
/// throws TriangulationFailure.
TriangleMesh unstructured_mesh(int k, std::uint64_t seed, int base = kPaperBase);

/// Rotation by quarter_turns * 90 degrees about (1/2, 1/2); 0 <= quarter_turns <= 3.
TriangleMesh rotate_mesh(const TriangleMesh& mesh, int quarter_turns);

/// Bowyer-Watson Delaunay triangulation. Triangles are CCW index triples.
std::vector<std::array<int, 3>> delaunay_triangulate(std::span<const Point2<double>> points);

bool has_duplicate_vertices(const TriangleMesh& mesh, double tol = 1e-12);

/// Flat text format: "nv nt", nv lines "x y", nt lines "i j k" (0-based, CCW).
void write_mesh(std::ostream& out, const TriangleMesh& mesh);
TriangleMesh read_mesh(std::istream& in);
nlohmann::json mesh_metadata_json(const TriangleMesh& mesh);

/// The four subtriangles obtained from edge points (alpha, 0, 1-alpha),
/// (0, beta, 1-beta) and (gamma, 1-gamma, 0), in barycentric coordinates of
/// `tri`. Order: (1) at vertex 1, (2) at vertex 2, (3) at vertex 3,
/// (4) the central one. Each keeps the orientation of `tri`; the area ratios
/// are (1-a)(1-g), g(1-b), a b and b g + a(1-b-g).
template <class Real>
std::array<Triangle<Real>, 4> split4(const Triangle<Real>& tri, const Real& alpha, const Real& beta,
                                     const Real& gamma) {
  const Real one = 1, zero = 0;
  const auto at = [&tri](const Real& l1, const Real& l2, const Real& l3) {
    return bary_to_cart(tri, BarycentricPoint<Real>{l1, l2, l3});
  };
  const Point2<Real> d = at(alpha, zero, one - alpha);
  const Point2<Real> f = at(zero, beta, one - beta);
  const Point2<Real> e = at(gamma, one - gamma, zero);
  return {{{tri.v1, e, d}, {e, tri.v2, f}, {d, f, tri.v3}, {f, d, e}}};
}

}  // namespace trisym
