#include <cstring>
#include <random>
#include <vector>

#include <Eigen/SparseCore>

#include "cfo/solver.hpp"
#include "doctest.h"

using namespace cfo;

namespace {

Eigen::SparseMatrix<double> to_sparse(const Eigen::MatrixXd& dense) {
  Eigen::SparseMatrix<double> m(dense.rows(), dense.cols());
  std::vector<Eigen::Triplet<double>> trips;
  for (int j = 0; j < dense.cols(); ++j)
    for (int i = 0; i < dense.rows(); ++i)
      if (dense(i, j) != 0.0) trips.emplace_back(i, j, dense(i, j));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

// Unpivoted dense Gaussian elimination, small and independent of Eigen's
// factorizations; fine as an oracle for well-conditioned SPD systems.
Eigen::VectorXd eliminate(Eigen::MatrixXd m, Eigen::VectorXd b) {
  const int n = static_cast<int>(m.rows());
  for (int p = 0; p < n; ++p) {
    for (int i = p + 1; i < n; ++i) {
      const double c = m(i, p) / m(p, p);
      m.row(i) -= c * m.row(p);
      b[i] -= c * b[p];
    }
  }
  Eigen::VectorXd x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
    x[i] = s / m(i, i);
  }
  return x;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("indefinite solve handles a zero diagonal") {
  // [[0,1],[1,0]] swaps the entries; plain Cholesky would fail.
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  Eigen::VectorXd b(2);
  b << 3.0, -7.0;
  const Eigen::VectorXd x = solve_symmetric_indefinite(to_sparse(m), b);
  CHECK(x[0] == doctest::Approx(-7.0));
  CHECK(x[1] == doctest::Approx(3.0));
}

TEST_CASE("solvers agree with dense elimination on a stiffness-like system") {
  // 1D Laplacian: tridiagonal (-1, 2, -1).
  const int n = 40;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2.0;
    if (i > 0) m(i, i - 1) = -1.0;
    if (i + 1 < n) m(i, i + 1) = -1.0;
  }
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = std::sin(0.3 * i);
  const Eigen::VectorXd oracle = eliminate(m, b);
  CHECK((solve_symmetric_indefinite(to_sparse(m), b) - oracle).lpNorm<Eigen::Infinity>() <
        1e-10 * oracle.lpNorm<Eigen::Infinity>());
  CHECK((solve_spd(to_sparse(m), b) - oracle).lpNorm<Eigen::Infinity>() <
        1e-10 * oracle.lpNorm<Eigen::Infinity>());
}

TEST_CASE("random symmetric indefinite systems are solved to the contract") {
  std::mt19937 rng(123);
  std::normal_distribution<double> gauss;
  const int n = 50;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      m(i, j) = gauss(rng);
      m(j, i) = m(i, j);
    }
  Eigen::VectorXd x_ref(n);
  for (int i = 0; i < n; ++i) x_ref[i] = gauss(rng);
  const Eigen::VectorXd b = m * x_ref;
  SolveDiagnostics diag;
  const Eigen::VectorXd x = solve_symmetric_indefinite(to_sparse(m), b, &diag);
  CHECK((x - x_ref).lpNorm<Eigen::Infinity>() < 1e-8 * x_ref.lpNorm<Eigen::Infinity>());
  CHECK(diag.residual_inf <=
        1e-9 * (diag.matrix_max * x.lpNorm<Eigen::Infinity>() + diag.rhs_inf));
  CHECK(!diag.factorization.empty());
}

TEST_CASE("spd solve copes with an ill-conditioned matrix") {
  // 5x5 Hilbert matrix, condition number ~ 5e5.
  const int n = 5;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = 1.0 / (i + j + 1.0);
  const Eigen::VectorXd x_ref = Eigen::VectorXd::LinSpaced(n, 1.0, 5.0);
  const Eigen::VectorXd b = m * x_ref;
  const Eigen::VectorXd x = solve_spd(to_sparse(m), b);
  CHECK((x - x_ref).lpNorm<Eigen::Infinity>() < 1e-8 * x_ref.lpNorm<Eigen::Infinity>());
}

TEST_CASE("solves are deterministic") {
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss;
  const int n = 30;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      m(i, j) = gauss(rng);
      m(j, i) = m(i, j);
    }
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = gauss(rng);
  const Eigen::VectorXd x1 = solve_symmetric_indefinite(to_sparse(m), b);
  const Eigen::VectorXd x2 = solve_symmetric_indefinite(to_sparse(m), b);
  CHECK(std::memcmp(x1.data(), x2.data(), sizeof(double) * n) == 0);
}

TEST_CASE("dimension mismatch and singular input are rejected") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.0, 0.0, 1.0;
  Eigen::VectorXd b(3);
  b.setZero();
  CHECK_THROWS(solve_symmetric_indefinite(to_sparse(m), b));

  Eigen::MatrixXd sing(2, 2);
  sing << 1.0, 1.0, 1.0, 1.0;
  Eigen::VectorXd b2(2);
  b2 << 1.0, 0.0;  // inconsistent, no solution exists
  CHECK_THROWS_AS(solve_symmetric_indefinite(to_sparse(sing), b2), NumericError);
}

}  // TEST_SUITE
