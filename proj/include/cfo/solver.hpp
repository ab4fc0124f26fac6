#pragma once

#include <Eigen/SparseCore>
#include <string>

#include "cfo/common.hpp"

namespace cfo {

struct SolveDiagnostics {
  double residual_inf = 0.0;  // ||Mx - b||_inf after refinement
  double matrix_max = 0.0;    // max |M_ij|
  double rhs_inf = 0.0;
  std::string factorization;
};

// Direct solve of a symmetric (possibly indefinite) sparse system via pivoted
// sparse LU with fill-reducing ordering plus one step of iterative
// refinement. Enforces ||Mx-b||_inf <= 1e-9 (max|M| ||x||_inf + ||b||_inf)
// and throws NumericError on failure. Deterministic for fixed input.
Eigen::VectorXd solve_symmetric_indefinite(const Eigen::SparseMatrix<double>& m,
                                           const Eigen::VectorXd& b,
                                           SolveDiagnostics* diag = nullptr);

// Cholesky (LDLt) solve for symmetric positive definite systems, same
// residual contract.
Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& m,
                          const Eigen::VectorXd& b,
                          SolveDiagnostics* diag = nullptr);

}  // namespace cfo
