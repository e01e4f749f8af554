#include "trisym/mesh.hpp"

#include "trisym/compensated_sum.hpp"
#include "trisym/error.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace trisym {

std::string_view to_string(MeshProvenance p) {
  switch (p) {
    case MeshProvenance::Structured: return "Structured";
    case MeshProvenance::NestedUnstructured: return "NestedUnstructured";
    case MeshProvenance::IndependentUnstructured: return "IndependentUnstructured";
    case MeshProvenance::Rotated: return "Rotated";
    case MeshProvenance::Synthetic: return "Synthetic";
  }
  return "?";
}

MeshProvenance parse_provenance(std::string_view name) {
  for (auto p : {MeshProvenance::Structured, MeshProvenance::NestedUnstructured,
                 MeshProvenance::IndependentUnstructured, MeshProvenance::Rotated,
                 MeshProvenance::Synthetic}) {
    if (to_string(p) == name) return p;
  }
  throw Error(ErrorCode::ParseError, "unknown mesh provenance '" + std::string(name) + "'");
}

double TriangleMesh::total_area() const {
  CompensatedSum<double> sum;
  for (std::size_t j = 0; j < size(); ++j) sum.add(signed_area(triangle<double>(j)));
  return sum.value();
}

double TriangleMesh::min_area() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < size(); ++j) m = std::min(m, signed_area(triangle<double>(j)));
  return m;
}

double TriangleMesh::median_diameter() const {
  std::vector<double> d(size());
  for (std::size_t j = 0; j < size(); ++j) d[j] = diameter(triangle<double>(j));
  if (d.empty()) return 0.0;
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  if (d.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(d.begin(), mid);
  return 0.5 * (lower + upper);
}

namespace {

void require_positive(int value, const char* name) {
  if (value < 1) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be >= 1, got " + std::to_string(value));
  }
}

// Uniform deviate in [0, 1) from the top 53 bits; mt19937_64's output is fixed
// by the standard, so meshes are reproducible across standard libraries.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Point2<double>> jittered_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double spacing = 1.0 / n;
  std::vector<Point2<double>> pts;
  pts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double x = i == n ? 1.0 : static_cast<double>(i) / n;
      const double y = j == n ? 1.0 : static_cast<double>(j) / n;
      if (i == 0 || j == 0 || i == n || j == n) {
        pts.push_back({x, y});
      } else {
        const double jx = (2.0 * unit_uniform(rng) - 1.0) * 0.3 * spacing;
        const double jy = (2.0 * unit_uniform(rng) - 1.0) * 0.3 * spacing;
        pts.push_back({x + jx, y + jy});
      }
    }
  }
  return pts;
}

}  // namespace

TriangleMesh structured_mesh(int k, int base, double warp) {
  require_positive(k, "k");
  require_positive(base, "base");
  if (!(warp >= 0.0) || warp >= 1.0 / std::numbers::pi) {
    throw Error(ErrorCode::WarpTooLarge, "warp must satisfy 0 <= w < 1/pi, got " + to_string(warp));
  }
  const int n = base * k;
  TriangleMesh mesh;
  mesh.meta = {MeshProvenance::Structured, k, base, std::nullopt, warp, 0};
  mesh.vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double x = i == n ? 1.0 : static_cast<double>(i) / n;
      const double y = j == n ? 1.0 : static_cast<double>(j) / n;
      const bool boundary = i == 0 || j == 0 || i == n || j == n;
      const double s = boundary ? 0.0 : std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
      mesh.vertices.push_back({x + warp * s, y + warp * s});
    }
  }
  const auto id = [n](int i, int j) { return i * (n + 1) + j; };
  mesh.triangles.reserve(static_cast<std::size_t>(2 * n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  if (!(mesh.min_area() > 0.0)) {
    throw Error(ErrorCode::WarpTooLarge, "warp " + to_string(warp) + " folds the mesh");
  }
  return mesh;
}

TriangleMesh nested_mesh(const TriangleMesh& coarse, int k) {
  require_positive(k, "k");
  TriangleMesh out;
  out.meta = coarse.meta;
  out.meta.provenance = MeshProvenance::NestedUnstructured;
  out.meta.k = coarse.meta.k * k;
  if (k == 1) {
    out.vertices = coarse.vertices;
    out.triangles = coarse.triangles;
    return out;
  }
  out.vertices = coarse.vertices;
  const double inv_k = 1.0 / k;

  // First of the k-1 interior points of edge (u, v), u < v, ordered from u.
  std::map<std::pair<int, int>, int> edge_start;
  for (const auto& t : coarse.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int u = std::min(t[static_cast<std::size_t>(e)], t[static_cast<std::size_t>((e + 1) % 3)]);
      const int v = std::max(t[static_cast<std::size_t>(e)], t[static_cast<std::size_t>((e + 1) % 3)]);
      if (edge_start.contains({u, v})) continue;
      edge_start[{u, v}] = static_cast<int>(out.vertices.size());
      const auto pu = coarse.vertices[static_cast<std::size_t>(u)];
      const auto pv = coarse.vertices[static_cast<std::size_t>(v)];
      for (int s = 1; s < k; ++s) {
        const double t_s = s * inv_k;
        out.vertices.push_back({pu.x + t_s * (pv.x - pu.x), pu.y + t_s * (pv.y - pu.y)});
      }
    }
  }
  const auto edge_point = [&](int from, int to, int s) {
    if (from < to) return edge_start.at({from, to}) + s - 1;
    return edge_start.at({to, from}) + (k - s) - 1;
  };

  out.triangles.reserve(coarse.size() * static_cast<std::size_t>(k * k));
  std::vector<int> lattice(static_cast<std::size_t>((k + 1) * (k + 1)), -1);
  for (const auto& t : coarse.triangles) {
    const int a = t[0], b = t[1], c = t[2];
    const auto pa = coarse.vertices[static_cast<std::size_t>(a)];
    const auto pb = coarse.vertices[static_cast<std::size_t>(b)];
    const auto pc = coarse.vertices[static_cast<std::size_t>(c)];
    const auto at = [&](int i, int j) -> int& { return lattice[static_cast<std::size_t>(i * (k + 1) + j)]; };
    // Lattice point (i, j) sits at a + (i/k)(b - a) + (j/k)(c - a).
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; i + j <= k; ++j) {
        int idx;
        if (i == 0 && j == 0) idx = a;
        else if (i == k) idx = b;
        else if (j == k) idx = c;
        else if (j == 0) idx = edge_point(a, b, i);
        else if (i == 0) idx = edge_point(a, c, j);
        else if (i + j == k) idx = edge_point(b, c, j);
        else {
          idx = static_cast<int>(out.vertices.size());
          out.vertices.push_back({pa.x + i * inv_k * (pb.x - pa.x) + j * inv_k * (pc.x - pa.x),
                                  pa.y + i * inv_k * (pb.y - pa.y) + j * inv_k * (pc.y - pa.y)});
        }
        at(i, j) = idx;
      }
    }
    for (int i = 0; i < k; ++i) {
      for (int j = 0; i + j < k; ++j) {
        out.triangles.push_back({at(i, j), at(i + 1, j), at(i, j + 1)});
        if (i + j < k - 1) out.triangles.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
      }
    }
  }
  return out;
}

TriangleMesh unstructured_mesh(int k, std::uint64_t seed, int base) {
  require_positive(k, "k");
  require_positive(base, "base");
  const int n = base * k;
  std::string failure;
  std::uint64_t s = seed;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      TriangleMesh mesh;
      mesh.meta = {MeshProvenance::IndependentUnstructured, k, base, s, 0.0, 0};
      mesh.vertices = jittered_points(n, s);
      mesh.triangles = delaunay_triangulate(mesh.vertices);
      const double area = mesh.total_area();
      if (!(mesh.min_area() > 0.0) || std::abs(area - 1.0) > 1e-12) {
        throw Error(ErrorCode::TriangulationFailure,
                    "triangulation does not tile the unit square (area " + to_string(area) + ")");
      }
      return mesh;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TriangulationFailure) throw;
      failure = e.what();
      s = seed ^ 0x9E3779B97F4A7C15ull;
    }
  }
  throw Error(ErrorCode::TriangulationFailure, "seed " + std::to_string(seed) + ": " + failure);
}

TriangleMesh rotate_mesh(const TriangleMesh& mesh, int quarter_turns) {
  if (quarter_turns < 0 || quarter_turns > 3) {
    throw Error(ErrorCode::OutOfRange, "quarter_turns must be in 0..3, got " + std::to_string(quarter_turns));
  }
  TriangleMesh out = mesh;
  if (quarter_turns == 0) return out;
  for (auto& v : out.vertices) {
    for (int r = 0; r < quarter_turns; ++r) v = {1.0 - v.y, v.x};
  }
  out.meta.provenance = MeshProvenance::Rotated;
  out.meta.quarter_turns = (mesh.meta.quarter_turns + quarter_turns) % 4;
  return out;
}

bool has_duplicate_vertices(const TriangleMesh& mesh, double tol) {
  std::vector<Point2<double>> v = mesh.vertices;
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size() && v[j].x - v[i].x <= tol; ++j) {
      if (std::abs(v[j].y - v[i].y) <= tol) return true;
    }
  }
  return false;
}

void write_mesh(std::ostream& out, const TriangleMesh& mesh) {
  out << mesh.vertices.size() << ' ' << mesh.triangles.size() << '\n';
  for (const auto& v : mesh.vertices) out << to_string(v.x) << ' ' << to_string(v.y) << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

TriangleMesh read_mesh(std::istream& in) {
  const auto fail = [](const std::string& what) { return Error(ErrorCode::ParseError, "mesh file: " + what); };
  long long nv = -1, nt = -1;
  if (!(in >> nv >> nt) || nv < 0 || nt < 0) throw fail("bad header");
  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    std::string xs, ys;
    if (!(in >> xs >> ys)) throw fail("truncated vertex list");
    try {
      mesh.vertices.push_back({from_string<double>(xs), from_string<double>(ys)});
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
  }
  mesh.triangles.reserve(static_cast<std::size_t>(nt));
  for (long long i = 0; i < nt; ++i) {
    std::array<int, 3> t{};
    if (!(in >> t[0] >> t[1] >> t[2])) throw fail("truncated triangle list");
    for (int v : t) {
      if (v < 0 || v >= nv) throw fail("vertex index " + std::to_string(v) + " out of range");
    }
    mesh.triangles.push_back(t);
  }
  return mesh;
}

nlohmann::json mesh_metadata_json(const TriangleMesh& mesh) {
  nlohmann::json j = {{"provenance", std::string(to_string(mesh.meta.provenance))},
                      {"k", mesh.meta.k},
                      {"base", mesh.meta.base},
                      {"warp", to_string(mesh.meta.warp)},
                      {"quarter_turns", mesh.meta.quarter_turns},
                      {"vertices", mesh.vertices.size()},
                      {"triangles", mesh.triangles.size()}};
  j["seed"] = mesh.meta.seed ? nlohmann::json(*mesh.meta.seed) : nlohmann::json(nullptr);
  return j;
}

}  // namespace trisym
