#pragma once

#include <span>
#include <vector>

#include "cfo/common.hpp"

namespace cfo {

// Nodal Lagrange basis of degree k (1..3) on the reference triangle.
// Node order: vertices (0,0),(1,0),(0,1); then k-1 equispaced interior nodes
// per edge, edges in local order 01,12,20, nodes along the local direction;
// then the barycenter for k=3.
class TriBasis {
 public:
  explicit TriBasis(int k);

  int degree() const { return k_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }

  void eval(const Vec2& xi, std::span<double> out) const;
  void eval_grad(const Vec2& xi, std::span<Vec2> out) const;

 private:
  int k_;
  std::vector<Vec2> nodes_;
  Eigen::MatrixXd coeff_;  // column i: monomial coefficients of phi_i
};

// Shifted Legendre basis on [0,1] up to `degree` (0..2). Orthogonal:
// int_0^1 L_m L_n = delta_mn / (2m+1).
class EdgeBasis {
 public:
  explicit EdgeBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  void eval(double s, std::span<double> out) const;
  // int_0^1 L_m ds
  double integral(int m) const { return m == 0 ? 1.0 : 0.0; }

 private:
  int degree_;
};

// Unknowns per element of the flux-optimization scheme: the degree-k scalar
// space, k flux modes on each of the three edges, one multiplier.
int local_dof_count(int k);

}  // namespace cfo
