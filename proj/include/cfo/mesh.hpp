#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "cfo/common.hpp"

namespace cfo {

// Undirected mesh edge. Vertices are ordered so that vertex(v0) precedes
// vertex(v1) lexicographically (x first, then y); the unit normal is the
// direction v0->v1 rotated by +90 degrees. Interior edges list both adjacent
// triangles, boundary edges have tri[1] == -1.
struct EdgeInfo {
  int v0, v1;
  Vec2 normal;
  double length;
  bool boundary;
  std::array<int, 2> tri{-1, -1};
};

// Triangle with CCW vertices. edge[l] is the global edge spanned by local
// vertices (l, l+1 mod 3); forward[l] says whether that local direction
// coincides with the global (lexicographic) edge direction; sigma[l] is the
// sign of (outward normal . edge normal), always exactly +-1.
struct TriangleInfo {
  std::array<int, 3> v;
  std::array<int, 3> edge;
  std::array<double, 3> sigma;
  std::array<bool, 3> forward;
  double area;
  double h;  // diameter = longest edge
  Vec2 centroid;
};

class TriMesh {
 public:
  // Builds connectivity from raw triangles. Triangles must be CCW and
  // consistently oriented; throws std::invalid_argument otherwise.
  TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> tris);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_triangles() const { return static_cast<int>(tris_.size()); }

  const Vec2& vertex(int v) const { return vertices_[v]; }
  const EdgeInfo& edge(int e) const { return edges_[e]; }
  const TriangleInfo& triangle(int t) const { return tris_[t]; }

  bool vertex_on_boundary(int v) const { return boundary_vertex_[v]; }
  double h() const { return h_; }  // max element diameter

  // Bounding box of the vertex set.
  const Rect& bounding_box() const { return bbox_; }

  // Plain-text dump: "V E T" header, vertex coordinates, edge endpoints plus
  // normals, triangle connectivity.
  void dump(std::ostream& os) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<TriangleInfo> tris_;
  std::vector<EdgeInfo> edges_;
  std::vector<bool> boundary_vertex_;
  double h_ = 0.0;
  Rect bbox_;
};

// Uniform N x N grid of subsquares over `domain`, each split along the
// bottom-left to top-right diagonal into two CCW triangles.
TriMesh build_uniform_mesh(const Rect& domain, int n);

// Gauss points of an `order`-point rule on a physical edge, traversed in the
// global (lexicographic) direction. Returns (point, weight); weights sum to
// the edge length.
std::vector<std::pair<Vec2, double>> edge_quadrature_points(const TriMesh& mesh,
                                                            int edge,
                                                            int order);

}  // namespace cfo
