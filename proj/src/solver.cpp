#include "cfo/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace cfo {

namespace {

double matrix_max_abs(const Eigen::SparseMatrix<double>& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      v = std::max(v, std::abs(it.value()));
  return v;
}

template <typename Factorization>
Eigen::VectorXd solve_with(Factorization& fact, const Eigen::SparseMatrix<double>& m,
                           const Eigen::VectorXd& b, const char* label,
                           SolveDiagnostics* diag) {
  if (m.rows() != m.cols() || m.rows() != b.size())
    throw std::invalid_argument("linear solve: dimension mismatch");

  fact.compute(m);
  if (fact.info() != Eigen::Success)
    throw NumericError(std::string(label) + ": factorization failed");

  Eigen::VectorXd x = fact.solve(b);
  if (fact.info() != Eigen::Success)
    throw NumericError(std::string(label) + ": backsolve failed");

  // One refinement step; the saddle systems are well within reach of a
  // pivoted direct factorization, this just tightens the last digits.
  Eigen::VectorXd r = b - m * x;
  x += fact.solve(r);
  r = b - m * x;

  SolveDiagnostics d;
  d.residual_inf = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  d.matrix_max = matrix_max_abs(m);
  d.rhs_inf = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
  d.factorization = label;

  double xinf = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  double bound = 1e-9 * (d.matrix_max * xinf + d.rhs_inf);
  if (!(d.residual_inf <= bound) && d.residual_inf != 0.0)
    throw NumericError(std::string(label) + ": residual " +
                       std::to_string(d.residual_inf) + " exceeds contract " +
                       std::to_string(bound));
  if (!x.allFinite()) throw NumericError(std::string(label) + ": non-finite solution");

  if (diag) *diag = d;
  return x;
}

}  // namespace

Eigen::VectorXd solve_symmetric_indefinite(const Eigen::SparseMatrix<double>& m,
                                           const Eigen::VectorXd& b,
                                           SolveDiagnostics* diag) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  return solve_with(lu, m, b, "sparse_lu", diag);
}

Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& m,
                          const Eigen::VectorXd& b, SolveDiagnostics* diag) {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  return solve_with(ldlt, m, b, "simplicial_ldlt", diag);
}

}  // namespace cfo
