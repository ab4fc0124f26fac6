#include "cfo/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace cfo {

namespace {

// Value and derivative of the Legendre polynomial P_n on [-1,1].
void legendre(int n, double x, double* p, double* dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    *p = 1.0;
    *dp = 0.0;
    return;
  }
  for (int m = 2; m <= n; ++m) {
    double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
    p0 = p1;
    p1 = p2;
  }
  *p = p1;
  *dp = n * (x * p1 - p0) / (x * x - 1.0);
}

std::vector<QuadPoint1D> make_gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  std::vector<QuadPoint1D> rule(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, &p, &dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(n, x, &p, &dp);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1,1] -> [0,1]; nodes come out in descending x, store ascending.
    rule[n - 1 - i] = {0.5 * (x + 1.0), 0.5 * w};
  }
  return rule;
}

}  // namespace

const std::vector<QuadPoint1D>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<QuadPoint1D>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

TriangleRule::TriangleRule(int n, int exactness) : exactness_(exactness) {
  // Duffy map (s,t) -> (s, t(1-s)) with Jacobian (1-s). The s-direction
  // carries polynomial degree up to `exactness`+1 after the Jacobian folds in,
  // so n Gauss points per direction are exact when 2n-1 >= exactness+1.
  const auto& gl = gauss_legendre(n);
  points_.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& a : gl) {
    for (const auto& b : gl) {
      TriQuadPoint q;
      q.xi = Vec2(a.s, b.s * (1.0 - a.s));
      q.w = a.w * b.w * (1.0 - a.s);
      points_.push_back(q);
    }
  }
}

const TriangleRule& TriangleRule::for_degree(int degree) {
  if (degree < 0) throw std::invalid_argument("TriangleRule: negative degree");
  int n = (degree + 3) / 2;  // smallest n with 2n-1 >= degree+1
  static std::mutex mu;
  static std::map<int, TriangleRule> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, TriangleRule(n, 2 * n - 2)).first;
  return it->second;
}

}  // namespace cfo
