#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cfo/assembly.hpp"

namespace cfo {

// Norms of a discrete solution against the manufactured one. h1 norms are
// gradient seminorms; flux is the h_T-weighted edge norm of
// alpha grad u . n_e + q_h with the exact gradient taken from the element
// side; lambda is measured in the piecewise-constant L2 norm.
struct ErrorReport {
  double h = 0.0;
  int k = 1;
  double beta = 0.0;
  double l2_u = 0.0;
  double h1_u = 0.0;
  double flux = 0.0;
  double l2_lambda = 0.0;
  double l2_u_ritz = 0.0;   // || u_h - R_h u ||_0
  double h1_u_ritz = 0.0;   // || grad(u_h - R_h u) ||_0
  double l2_ritz = 0.0;     // || R_h u - u ||_0, plain Galerkin reference
  double h1_ritz = 0.0;     // || grad(R_h u - u) ||_0
  double cons_residual_max = 0.0;
};

ErrorReport compute_errors(const TriMesh& mesh, const DofLayout& layout,
                           const ProblemDefinition& problem,
                           const CfoSolution& solution);

// Per-element balance sum_e sigma int_e q - int_T f for the discrete flux.
struct ConservationAudit {
  Eigen::VectorXd residuals;
  Eigen::VectorXd f_integrals;
  double max_residual = 0.0;

  // |residual_T| <= factor * max(1, |int_T f|) for every element.
  bool passes(double factor) const;
};

ConservationAudit conservation_audit(const TriMesh& mesh, const DofLayout& layout,
                                     const ElementCoefficient& coeff,
                                     const Eigen::VectorXd& q);

// Same audit for an elementwise edge flux given as a callable
// (element, local edge, point) -> flux against the global edge normal; used
// for the naive Galerkin flux -alpha grad R_h u . n_e.
ConservationAudit conservation_audit_flux(
    const TriMesh& mesh, const ElementCoefficient& coeff,
    const std::function<double(int, int, const Vec2&)>& flux);

// Naive flux audit of the plain Galerkin solution.
ConservationAudit ritz_flux_audit(const TriMesh& mesh, const DofLayout& layout,
                                  const ElementCoefficient& coeff,
                                  const Eigen::VectorXd& ritz_u);

// Rows coarse to fine over a halving sequence of mesh sizes.
struct ConvergenceTable {
  std::vector<ErrorReport> rows;

  // log2(coarse/fine) between consecutive rows; NaN when undefined.
  static double rate(double coarse, double fine);
  // Pinned column set; scientific notation with 6 significant digits, rate
  // cells empty on the first row or when undefined.
  void write_csv(std::ostream& os) const;
};

ConvergenceTable convergence_study(const ProblemDefinition& problem, int k,
                                   double beta, const std::vector<int>& sizes);

// lambda_T^2 against the local squared error; the multiplier field acts as an
// inexpensive error indicator.
struct EstimatorFields {
  Eigen::VectorXd lambda_sq;
  Eigen::VectorXd err_sq;
  double correlation = 0.0;  // Pearson, 0 when a field is constant
};

EstimatorFields estimator_fields(const TriMesh& mesh, const DofLayout& layout,
                                 const ProblemDefinition& problem,
                                 const CfoSolution& solution);

// Scientific notation with 6 significant digits ("1.23456e-03").
std::string fmt_sci(double v);

// One "tri_id value" row per element.
void write_element_field(std::ostream& os, const Eigen::VectorXd& field);

}  // namespace cfo
