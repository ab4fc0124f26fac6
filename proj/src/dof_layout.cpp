#include "cfo/dof_layout.hpp"

namespace cfo {

DofLayout::DofLayout(const TriMesh& mesh, int k) : k_(k) {
  if (k < 1 || k > 3) throw std::invalid_argument("DofLayout: k must be 1, 2 or 3");

  const int nv = mesh.num_vertices();
  const int ne = mesh.num_edges();
  const int nt = mesh.num_triangles();
  const int per_edge = k - 1;
  const int per_cell = (k - 1) * (k - 2) / 2;

  n_u_ = nv + per_edge * ne + per_cell * nt;
  n_q_ = k * ne;
  n_lambda_ = nt;

  s_node_pos_.resize(n_u_);
  s_boundary_.assign(n_u_, false);

  for (int v = 0; v < nv; ++v) {
    s_node_pos_[v] = mesh.vertex(v);
    s_boundary_[v] = mesh.vertex_on_boundary(v);
  }
  for (int e = 0; e < ne; ++e) {
    const EdgeInfo& ed = mesh.edge(e);
    const Vec2& a = mesh.vertex(ed.v0);
    const Vec2& b = mesh.vertex(ed.v1);
    for (int t = 0; t < per_edge; ++t) {
      int dof = nv + e * per_edge + t;
      s_node_pos_[dof] = a + (b - a) * (double(t + 1) / k);
      s_boundary_[dof] = ed.boundary;
    }
  }
  for (int t = 0; t < nt && per_cell > 0; ++t)
    s_node_pos_[nv + per_edge * ne + t] = mesh.triangle(t).centroid;

  for (int dof = 0; dof < n_u_; ++dof)
    if (s_boundary_[dof]) boundary_s_dofs_.push_back(dof);

  // Local order must match TriBasis: vertices, edge slots in local direction,
  // interior. A reversed edge flips the slot order.
  cell_s_dofs_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const TriangleInfo& tri = mesh.triangle(t);
    auto& dofs = cell_s_dofs_[t];
    dofs.reserve(s_dofs_per_cell());
    for (int l = 0; l < 3; ++l) dofs.push_back(tri.v[l]);
    for (int l = 0; l < 3; ++l) {
      int e = tri.edge[l];
      for (int s = 0; s < per_edge; ++s) {
        int slot = tri.forward[l] ? s : per_edge - 1 - s;
        dofs.push_back(nv + e * per_edge + slot);
      }
    }
    if (per_cell > 0) dofs.push_back(nv + per_edge * ne + t);
  }
}

}  // namespace cfo
