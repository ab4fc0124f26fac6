#pragma once

#include <Eigen/SparseCore>
#include <iosfwd>
#include <vector>

#include "cfo/dof_layout.hpp"
#include "cfo/problem.hpp"

namespace cfo {

// Coefficient and source seen through the element they are integrated on;
// lets piecewise data resolve the correct one-sided trace and lets callers
// plug in elementwise fields (e.g. mobility times permeability).
struct ElementCoefficient {
  std::function<Mat2(int element, const Vec2& x)> alpha;
  std::function<double(int element, const Vec2& x)> source;
};

ElementCoefficient make_coefficient(const ProblemDefinition& problem,
                                    const TriMesh& mesh);

// Essential constraints in stacked indices (u block for Dirichlet nodes,
// q block for prescribed edge fluxes).
struct EssentialBc {
  std::vector<int> dofs;
  std::vector<double> values;
};

// Dirichlet data by nodal interpolation of g on the boundary scalar dofs.
EssentialBc dirichlet_bc(const TriMesh& mesh, const DofLayout& layout,
                         const std::function<double(const Vec2&)>& g);

// Square system after eliminating prescribed dofs; the eliminated columns
// times their values are moved to the right-hand side.
struct ReducedSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<int> full_to_reduced;   // -1 where prescribed
  Eigen::VectorXd prescribed_values;  // full length, zero on free dofs

  int n_full() const { return static_cast<int>(full_to_reduced.size()); }
  // Reinserts prescribed values around a reduced solution vector.
  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
};

// Symmetric indefinite system for the constrained flux-optimization scheme,
// unknowns stacked (u, q, lambda):
//   [ A_uu  A_uq  0  ] [u]   [ (f,v)  ]
//   [ A_qu  A_qq  B^T] [q] = [   0    ]
//   [ 0     B     0  ] [l]   [ int f  ]
// A collects the diffusion form plus the h^beta-weighted edge penalty on
// q + alpha grad u . n_e, summed over both sides of interior edges; row T of
// B integrates sigma q over the element boundary (the |T|^-1 of the weak
// divergence cancels against the same factor on the right-hand side).
struct SaddleSystem : ReducedSystem {
  int n_u = 0, n_q = 0, n_lambda = 0;
  std::size_t stab_edge_instances = 0;  // == 2 |interior edges| + |boundary edges|

  // Text dump "n nnz" then one "row col value" per entry.
  void dump(std::ostream& os) const;
};

SaddleSystem assemble_cfo(const TriMesh& mesh, const DofLayout& layout,
                          const ElementCoefficient& coeff, double beta,
                          const EssentialBc& bc);
SaddleSystem assemble_cfo(const TriMesh& mesh, const DofLayout& layout,
                          const ProblemDefinition& problem, double beta);

// Plain continuous-Galerkin (Ritz) system for the same data, scalar unknowns
// only; positive definite after Dirichlet elimination.
ReducedSystem assemble_ritz(const TriMesh& mesh, const DofLayout& layout,
                            const ElementCoefficient& coeff,
                            const EssentialBc& bc);

// Constraint block alone: row T holds sigma int_e psi for each edge mode,
// rhs holds int_T f. Independent of beta by construction.
struct ConstraintBlock {
  Eigen::SparseMatrix<double> matrix;  // n_lambda x n_q
  Eigen::VectorXd rhs;
};
ConstraintBlock assemble_constraint(const TriMesh& mesh, const DofLayout& layout,
                                    const ElementCoefficient& coeff);

// (1/|T|) sum_e sigma int_e q ds for a flux coefficient vector.
double weak_divergence(const TriMesh& mesh, const DofLayout& layout,
                       const Eigen::VectorXd& q, int element);

// The minimized objective: 1/2 sum_T h_T^beta sum_e int_e (q + alpha grad u . n_e)^2
// + 1/2 (alpha grad u, grad u) - (f, u). Direct quadrature, no assembled
// operators; used to cross-check the assembled system against finite
// differences of this value.
double stabilized_objective(const TriMesh& mesh, const DofLayout& layout,
                            const ElementCoefficient& coeff, double beta,
                            const Eigen::VectorXd& u_full,
                            const Eigen::VectorXd& q);

// Per-element sum_e sigma int_e q - int_T f, direct quadrature.
Eigen::VectorXd constraint_residual(const TriMesh& mesh, const DofLayout& layout,
                                    const ElementCoefficient& coeff,
                                    const Eigen::VectorXd& q);

// Solution bundle: full-length scalar coefficients (Dirichlet values filled
// in), edge flux modes, multipliers, and the plain Galerkin solution.
struct CfoSolution {
  int k = 1;
  double beta = 1.0;
  Eigen::VectorXd u;
  Eigen::VectorXd q;
  Eigen::VectorXd lambda;
  Eigen::VectorXd ritz_u;
};

CfoSolution solve_cfo(const TriMesh& mesh, const DofLayout& layout,
                      const ProblemDefinition& problem, double beta);

}  // namespace cfo
