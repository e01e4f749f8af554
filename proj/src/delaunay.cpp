// Incremental Bowyer-Watson triangulation with a walking point location and
// neighbour-based cavity search. Predicates are evaluated in binary128 from
// double inputs, which resolves the near-collinear configurations produced by
// points on the square's boundary.

#include "trisym/error.hpp"
#include "trisym/mesh.hpp"
#include "trisym/scalar.hpp"

#include <unordered_map>

namespace trisym {
namespace {

using P = Point2<double>;

int orient(const P& a, const P& b, const P& c) {
  const Extended abx = Extended(b.x) - a.x, aby = Extended(b.y) - a.y;
  const Extended acx = Extended(c.x) - a.x, acy = Extended(c.y) - a.y;
  const Extended det = abx * acy - aby * acx;
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

// > 0 when d lies strictly inside the circumcircle of the CCW triangle abc.
int incircle(const P& a, const P& b, const P& c, const P& d) {
  const Extended adx = Extended(a.x) - d.x, ady = Extended(a.y) - d.y;
  const Extended bdx = Extended(b.x) - d.x, bdy = Extended(b.y) - d.y;
  const Extended cdx = Extended(c.x) - d.x, cdy = Extended(c.y) - d.y;
  const Extended det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
                       (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
                       (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nbr;  // nbr[e] shares the edge opposite v[e]
  bool alive = true;
};

class Triangulator {
 public:
  explicit Triangulator(std::span<const P> input) : pts_(input.begin(), input.end()) {
    n_ = static_cast<int>(pts_.size());
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    for (const auto& p : pts_) {
      xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
    }
    const double span = std::max(xmax - xmin, ymax - ymin);
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    const double r = 30.0 * span;
    pts_.push_back({cx - r, cy - r});
    pts_.push_back({cx + 2 * r, cy - r});
    pts_.push_back({cx - r, cy + 2 * r});
    tris_.push_back({{n_, n_ + 1, n_ + 2}, {-1, -1, -1}, true});
  }

  std::vector<std::array<int, 3>> run() {
    for (int i = 0; i < n_; ++i) insert(i);
    std::vector<std::array<int, 3>> out;
    for (const auto& t : tris_) {
      if (t.alive && t.v[0] < n_ && t.v[1] < n_ && t.v[2] < n_) out.push_back(t.v);
    }
    return out;
  }

 private:
  const P& pt(int i) const { return pts_[static_cast<std::size_t>(i)]; }

  int locate(const P& p) const {
    int t = last_;
    const std::size_t limit = tris_.size() + 16;
    for (std::size_t step = 0; step < limit; ++step) {
      const Tri& tri = tris_[static_cast<std::size_t>(t)];
      int next = -1;
      for (int e = 0; e < 3; ++e) {
        const int a = tri.v[static_cast<std::size_t>((e + 1) % 3)];
        const int b = tri.v[static_cast<std::size_t>((e + 2) % 3)];
        if (orient(pt(a), pt(b), p) < 0) {
          next = tri.nbr[static_cast<std::size_t>(e)];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    // The walk cycled; fall back to a scan.
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      const Tri& tri = tris_[i];
      if (!tri.alive) continue;
      if (orient(pt(tri.v[0]), pt(tri.v[1]), p) >= 0 && orient(pt(tri.v[1]), pt(tri.v[2]), p) >= 0 &&
          orient(pt(tri.v[2]), pt(tri.v[0]), p) >= 0) {
        return static_cast<int>(i);
      }
    }
    throw Error(ErrorCode::TriangulationFailure, "point location failed");
  }

  void insert(int pi) {
    const P& p = pt(pi);
    const int start = locate(p);

    ++epoch_;
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
    std::vector<int> bad{start};
    mark_[static_cast<std::size_t>(start)] = epoch_;
    struct Edge {
      int a, b, outside;
    };
    std::vector<Edge> boundary;
    for (std::size_t i = 0; i < bad.size(); ++i) {
      const Tri tri = tris_[static_cast<std::size_t>(bad[i])];
      for (int e = 0; e < 3; ++e) {
        const int nb = tri.nbr[static_cast<std::size_t>(e)];
        const int a = tri.v[static_cast<std::size_t>((e + 1) % 3)];
        const int b = tri.v[static_cast<std::size_t>((e + 2) % 3)];
        if (nb >= 0 && mark_[static_cast<std::size_t>(nb)] == epoch_) continue;
        if (nb >= 0) {
          const Tri& nt = tris_[static_cast<std::size_t>(nb)];
          if (incircle(pt(nt.v[0]), pt(nt.v[1]), pt(nt.v[2]), p) > 0) {
            mark_[static_cast<std::size_t>(nb)] = epoch_;
            bad.push_back(nb);
            continue;
          }
        }
        boundary.push_back({a, b, nb});
      }
    }
    // An edge seen from a triangle that later joined the cavity is interior.
    std::erase_if(boundary, [this](const Edge& e) {
      return e.outside >= 0 && mark_[static_cast<std::size_t>(e.outside)] == epoch_;
    });

    for (const auto& e : boundary) {
      if (orient(pt(e.a), pt(e.b), p) <= 0) {
        throw Error(ErrorCode::TriangulationFailure, "cavity is not star-shaped at point " + std::to_string(pi));
      }
    }

    for (int t : bad) tris_[static_cast<std::size_t>(t)].alive = false;
    std::vector<int> slots = bad;
    std::unordered_map<int, int> starting_at, ending_at;
    std::vector<int> created;
    created.reserve(boundary.size());
    for (const auto& e : boundary) {
      int id;
      if (!slots.empty()) {
        id = slots.back();
        slots.pop_back();
      } else {
        id = static_cast<int>(tris_.size());
        tris_.push_back({});
      }
      tris_[static_cast<std::size_t>(id)] = {{e.a, e.b, pi}, {-1, -1, e.outside}, true};
      if (e.outside >= 0) {
        Tri& o = tris_[static_cast<std::size_t>(e.outside)];
        for (int k = 0; k < 3; ++k) {
          if (o.v[static_cast<std::size_t>((k + 1) % 3)] == e.b && o.v[static_cast<std::size_t>((k + 2) % 3)] == e.a) {
            o.nbr[static_cast<std::size_t>(k)] = id;
          }
        }
      }
      starting_at[e.a] = id;
      ending_at[e.b] = id;
      created.push_back(id);
    }
    for (int id : created) {
      Tri& t = tris_[static_cast<std::size_t>(id)];
      t.nbr[0] = starting_at.at(t.v[1]);
      t.nbr[1] = ending_at.at(t.v[0]);
    }
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
    last_ = created.front();
  }

  std::vector<P> pts_;
  int n_ = 0;
  std::vector<Tri> tris_;
  std::vector<int> mark_;
  int epoch_ = 0;
  int last_ = 0;
};

}  // namespace

std::vector<std::array<int, 3>> delaunay_triangulate(std::span<const Point2<double>> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::TriangulationFailure, "need at least three points");
  }
  return Triangulator(points).run();
}

}  // namespace trisym
