#include "cfo/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "cfo/quadrature.hpp"

namespace cfo {

namespace {

bool lex_less(const Vec2& a, const Vec2& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  return a.y() < b.y();
}

}  // namespace

TriMesh::TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> tris)
    : vertices_(std::move(vertices)) {
  if (vertices_.empty() || tris.empty())
    throw std::invalid_argument("TriMesh: empty vertex or triangle list");

  bbox_ = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
           std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const auto& p : vertices_) {
    bbox_.x0 = std::min(bbox_.x0, p.x());
    bbox_.y0 = std::min(bbox_.y0, p.y());
    bbox_.x1 = std::max(bbox_.x1, p.x());
    bbox_.y1 = std::max(bbox_.y1, p.y());
  }

  tris_.resize(tris.size());
  std::map<std::pair<int, int>, int> edge_of;  // sorted vertex pair -> edge id

  for (std::size_t t = 0; t < tris.size(); ++t) {
    TriangleInfo& tri = tris_[t];
    tri.v = tris[t];
    for (int i : tri.v)
      if (i < 0 || i >= num_vertices())
        throw std::invalid_argument("TriMesh: triangle vertex out of range");

    const Vec2& a = vertices_[tri.v[0]];
    const Vec2& b = vertices_[tri.v[1]];
    const Vec2& c = vertices_[tri.v[2]];
    double twice_area = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    if (twice_area <= 0.0)
      throw std::invalid_argument("TriMesh: triangle not CCW or degenerate");
    tri.area = 0.5 * twice_area;
    tri.centroid = (a + b + c) / 3.0;

    tri.h = 0.0;
    for (int l = 0; l < 3; ++l) {
      int va = tri.v[l];
      int vb = tri.v[(l + 1) % 3];
      auto key = std::minmax(va, vb);
      auto [it, inserted] = edge_of.try_emplace({key.first, key.second}, num_edges());
      if (inserted) {
        EdgeInfo e;
        // Lexicographic order decides the stored direction and the normal.
        bool fwd = lex_less(vertices_[va], vertices_[vb]);
        e.v0 = fwd ? va : vb;
        e.v1 = fwd ? vb : va;
        Vec2 tang = vertices_[e.v1] - vertices_[e.v0];
        e.length = tang.norm();
        if (e.length <= 0.0) throw std::invalid_argument("TriMesh: zero-length edge");
        tang /= e.length;
        e.normal = Vec2(-tang.y(), tang.x());
        e.boundary = true;  // until a second triangle claims it
        edges_.push_back(e);
      }
      int eid = it->second;
      EdgeInfo& e = edges_[eid];
      if (!inserted) {
        if (e.tri[1] != -1)
          throw std::invalid_argument("TriMesh: edge shared by more than two triangles");
        e.tri[1] = static_cast<int>(t);
        e.boundary = false;
      } else {
        e.tri[0] = static_cast<int>(t);
      }

      tri.edge[l] = eid;
      tri.forward[l] = (e.v0 == va);
      tri.h = std::max(tri.h, e.length);

      // Outward normal of the CCW triangle on local edge l is the local
      // direction rotated by -90 degrees; sigma compares it with e.normal.
      Vec2 dir = vertices_[vb] - vertices_[va];
      Vec2 outward(dir.y(), -dir.x());
      double dot = outward.dot(e.normal);
      tri.sigma[l] = (dot > 0.0) ? 1.0 : -1.0;
      if (std::abs(std::abs(dot) - outward.norm()) > 1e-12 * outward.norm())
        throw std::invalid_argument("TriMesh: edge normal not collinear with face normal");
    }
    h_ = std::max(h_, tri.h);
  }

  boundary_vertex_.assign(vertices_.size(), false);
  for (const auto& e : edges_) {
    if (e.boundary) {
      boundary_vertex_[e.v0] = true;
      boundary_vertex_[e.v1] = true;
    }
  }
}

TriMesh build_uniform_mesh(const Rect& domain, int n) {
  if (!domain.valid()) throw std::invalid_argument("build_uniform_mesh: invalid rectangle");
  if (n < 1) throw std::invalid_argument("build_uniform_mesh: n must be >= 1");

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(domain.x0 + domain.width() * i / n,
                            domain.y0 + domain.height() * j / n);

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j);
      int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      tris.push_back({v00, v10, v11});  // below the diagonal
      tris.push_back({v00, v11, v01});  // above the diagonal
    }
  }
  return TriMesh(std::move(vertices), std::move(tris));
}

std::vector<std::pair<Vec2, double>> edge_quadrature_points(const TriMesh& mesh,
                                                            int edge, int order) {
  if (order < 1) throw std::invalid_argument("edge_quadrature_points: order must be >= 1");
  const EdgeInfo& e = mesh.edge(edge);
  const Vec2& a = mesh.vertex(e.v0);
  const Vec2& b = mesh.vertex(e.v1);
  std::vector<std::pair<Vec2, double>> pts;
  pts.reserve(order);
  for (const auto& q : gauss_legendre(order))
    pts.emplace_back(a + q.s * (b - a), q.w * e.length);
  return pts;
}

void TriMesh::dump(std::ostream& os) const {
  os << num_vertices() << " " << num_edges() << " " << num_triangles() << "\n";
  for (const auto& p : vertices_) os << p.x() << " " << p.y() << "\n";
  for (const auto& e : edges_)
    os << e.v0 << " " << e.v1 << " " << e.normal.x() << " " << e.normal.y() << "\n";
  for (const auto& t : tris_) os << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
}

}  // namespace cfo
