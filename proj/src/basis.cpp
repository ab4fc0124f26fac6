#include "cfo/basis.hpp"

#include <Eigen/Dense>

namespace cfo {

namespace {

// Monomial exponents (a,b) for x^a y^b, total degree <= k, graded order.
std::vector<std::pair<int, int>> monomials(int k) {
  std::vector<std::pair<int, int>> m;
  for (int d = 0; d <= k; ++d)
    for (int a = d; a >= 0; --a) m.emplace_back(a, d - a);
  return m;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

TriBasis::TriBasis(int k) : k_(k) {
  if (k < 1 || k > 3) throw std::invalid_argument("TriBasis: k must be 1, 2 or 3");

  const Vec2 verts[3] = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  nodes_.assign(verts, verts + 3);
  for (int l = 0; l < 3; ++l) {
    const Vec2& a = verts[l];
    const Vec2& b = verts[(l + 1) % 3];
    for (int t = 1; t < k; ++t) nodes_.push_back(a + (b - a) * (double(t) / k));
  }
  if (k == 3) nodes_.push_back(Vec2(1.0 / 3.0, 1.0 / 3.0));

  auto mono = monomials(k);
  const int n = size();
  Eigen::MatrixXd vand(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      vand(i, j) = ipow(nodes_[i].x(), mono[j].first) * ipow(nodes_[i].y(), mono[j].second);
  // coeff_ solves V * coeff_ = I, so phi_i(node_j) = delta_ij.
  coeff_ = vand.fullPivLu().solve(Eigen::MatrixXd::Identity(n, n));
}

void TriBasis::eval(const Vec2& xi, std::span<double> out) const {
  auto mono = monomials(k_);
  const int n = size();
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int j = 0; j < n; ++j)
      v += coeff_(j, i) * ipow(xi.x(), mono[j].first) * ipow(xi.y(), mono[j].second);
    out[i] = v;
  }
}

void TriBasis::eval_grad(const Vec2& xi, std::span<Vec2> out) const {
  auto mono = monomials(k_);
  const int n = size();
  for (int i = 0; i < n; ++i) {
    Vec2 g(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
      auto [a, b] = mono[j];
      double c = coeff_(j, i);
      if (a > 0) g.x() += c * a * ipow(xi.x(), a - 1) * ipow(xi.y(), b);
      if (b > 0) g.y() += c * b * ipow(xi.x(), a) * ipow(xi.y(), b - 1);
    }
    out[i] = g;
  }
}

EdgeBasis::EdgeBasis(int degree) : degree_(degree) {
  if (degree < 0 || degree > 2)
    throw std::invalid_argument("EdgeBasis: degree must be 0, 1 or 2");
}

void EdgeBasis::eval(double s, std::span<double> out) const {
  out[0] = 1.0;
  if (degree_ >= 1) out[1] = 2.0 * s - 1.0;
  if (degree_ >= 2) out[2] = 6.0 * s * s - 6.0 * s + 1.0;
}

int local_dof_count(int k) {
  if (k < 1) throw std::invalid_argument("local_dof_count: k must be >= 1");
  return (k + 1) * (k + 2) / 2 + 3 * k + 1;
}

}  // namespace cfo
