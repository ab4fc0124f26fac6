#pragma once

#include <vector>

#include "cfo/common.hpp"

namespace cfo {

// One point of a rule on the unit interval [0,1]; weights sum to 1.
struct QuadPoint1D {
  double s;
  double w;
};

// Gauss-Legendre rule with n points on [0,1], exact for degree 2n-1.
const std::vector<QuadPoint1D>& gauss_legendre(int n);

// One point of a rule on the reference triangle {xi,eta >= 0, xi+eta <= 1};
// weights sum to 1/2.
struct TriQuadPoint {
  Vec2 xi;
  double w;
};

// Collapsed (conical-product) Gauss rule on the reference triangle.
class TriangleRule {
 public:
  // Smallest rule of this family exact for total degree `degree`.
  static const TriangleRule& for_degree(int degree);

  const std::vector<TriQuadPoint>& points() const { return points_; }
  int exactness() const { return exactness_; }

 private:
  TriangleRule(int n, int exactness);
  std::vector<TriQuadPoint> points_;
  int exactness_;
};

}  // namespace cfo
