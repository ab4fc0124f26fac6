#pragma once

#include <vector>

#include "cfo/basis.hpp"
#include "cfo/mesh.hpp"

namespace cfo {

// Global numbering for the three discrete spaces on one mesh:
//   scalar space  S_h: continuous P_k, dofs 0..n_u-1
//                      (vertices, then k-1 slots per edge along the global
//                       edge direction, then one interior slot for k=3);
//   flux space    V_h: k Legendre modes per edge, single valued, n_q dofs;
//   multipliers   W_h: one constant per triangle, n_lambda dofs.
// Stacked saddle-system indices run u first, then q, then lambda.
class DofLayout {
 public:
  DofLayout(const TriMesh& mesh, int k);

  int k() const { return k_; }
  int n_u() const { return n_u_; }
  int n_q() const { return n_q_; }
  int n_lambda() const { return n_lambda_; }
  int n_total() const { return n_u_ + n_q_ + n_lambda_; }

  // S_h
  int s_dofs_per_cell() const { return (k_ + 1) * (k_ + 2) / 2; }
  const std::vector<int>& cell_s_dofs(int t) const { return cell_s_dofs_[t]; }
  const Vec2& s_node_position(int dof) const { return s_node_pos_[dof]; }
  bool s_dof_on_boundary(int dof) const { return s_boundary_[dof]; }
  const std::vector<int>& boundary_s_dofs() const { return boundary_s_dofs_; }

  // V_h
  int q_dof(int edge, int mode) const { return edge * k_ + mode; }

  // Stacked indices
  int u_index(int sdof) const { return sdof; }
  int q_index(int qdof) const { return n_u_ + qdof; }
  int lambda_index(int t) const { return n_u_ + n_q_ + t; }

 private:
  int k_;
  int n_u_, n_q_, n_lambda_;
  std::vector<std::vector<int>> cell_s_dofs_;
  std::vector<Vec2> s_node_pos_;
  std::vector<bool> s_boundary_;
  std::vector<int> boundary_s_dofs_;
};

}  // namespace cfo
