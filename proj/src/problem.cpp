#include "cfo/problem.hpp"

#include <cmath>

namespace cfo {

namespace {

constexpr double kPi = M_PI;

double cbrt_abs(double x) { return std::cbrt(std::abs(x)); }
double sgn(double x) { return x >= 0.0 ? 1.0 : -1.0; }

}  // namespace

ProblemDefinition test_case_1() {
  ProblemDefinition p;
  p.name = "case1";
  p.domain = {0.0, 0.0, 1.0, 1.0};
  p.alpha = [](const Vec2&, const Vec2&) { return Mat2::Identity(); };
  p.exact_u = [](const Vec2& x) { return std::cos(kPi * x.x()) * std::cos(kPi * x.y()); };
  p.exact_grad = [](const Vec2& x, const Vec2&) {
    return Vec2(-kPi * std::sin(kPi * x.x()) * std::cos(kPi * x.y()),
                -kPi * std::cos(kPi * x.x()) * std::sin(kPi * x.y()));
  };
  p.f = [](const Vec2& x) {
    return 2.0 * kPi * kPi * std::cos(kPi * x.x()) * std::cos(kPi * x.y());
  };
  p.g = p.exact_u;
  return p;
}

ProblemDefinition test_case_2(Test2Domain variant) {
  ProblemDefinition p;
  p.name = variant == Test2Domain::full ? "case2" : "case2shifted";
  p.domain = variant == Test2Domain::full ? Rect{-1.0, -1.0, 1.0, 1.0}
                                          : Rect{0.1, 0.1, 1.0, 1.0};
  p.alpha = [](const Vec2& x, const Vec2&) {
    Mat2 a;
    double off = 0.5 * cbrt_abs(x.x()) * cbrt_abs(x.y());
    a << 1.0 + std::abs(x.x()), off, off, 1.0 + std::abs(x.y());
    return a;
  };
  p.exact_u = [](const Vec2& x) { return std::cos(kPi * x.x()) * std::cos(kPi * x.y()); };
  p.exact_grad = [](const Vec2& x, const Vec2&) {
    return Vec2(-kPi * std::sin(kPi * x.x()) * std::cos(kPi * x.y()),
                -kPi * std::cos(kPi * x.x()) * std::sin(kPi * x.y()));
  };
  // -div(alpha grad u) expanded by hand; the |x|^(-2/3) factors are
  // integrable and are only ever evaluated at interior quadrature points.
  p.f = [](const Vec2& p_) {
    double x = p_.x(), y = p_.y();
    double sx = sgn(x), sy = sgn(y);
    double cx = std::cos(kPi * x), sxn = std::sin(kPi * x);
    double cy = std::cos(kPi * y), syn = std::sin(kPi * y);
    double rx = cbrt_abs(x), ry = cbrt_abs(y);
    double f = kPi * sx * sxn * cy;
    f += (2.0 + std::abs(x) + std::abs(y)) * kPi * kPi * cx * cy;
    f += (kPi / 6.0) * sx * ry / (rx * rx) * cx * syn;
    f -= kPi * kPi * rx * ry * sxn * syn;
    f += (kPi / 6.0) * sy * rx / (ry * ry) * sxn * cy;
    f += kPi * sy * cx * syn;
    return f;
  };
  p.g = p.exact_u;
  return p;
}

ProblemDefinition test_case_3() {
  ProblemDefinition p;
  p.name = "case3";
  p.domain = {0.0, 0.0, 1.0, 1.0};
  auto left = [](double x) { return x < 0.5; };
  p.alpha = [left](const Vec2&, const Vec2& hint) {
    Mat2 a;
    if (left(hint.x()))
      a = Mat2::Identity();
    else
      a << 10.0, 3.0, 3.0, 1.0;
    return a;
  };
  p.exact_u = [left](const Vec2& p_) {
    double x = p_.x(), y = p_.y();
    if (left(x)) return 1.0 - 2.0 * y * y + 4.0 * x * y + 6.0 * x + 2.0 * y;
    return -2.0 * y * y + 1.6 * x * y - 0.6 * x + 3.2 * y + 4.3;
  };
  p.exact_grad = [left](const Vec2& p_, const Vec2& hint) {
    double x = p_.x(), y = p_.y();
    if (left(hint.x())) return Vec2(4.0 * y + 6.0, -4.0 * y + 4.0 * x + 2.0);
    return Vec2(1.6 * y - 0.6, -4.0 * y + 1.6 * x + 3.2);
  };
  p.f = [left](const Vec2& p_) { return left(p_.x()) ? 4.0 : -5.6; };
  p.g = p.exact_u;
  return p;
}

ProblemDefinition test_case_4() {
  ProblemDefinition p;
  p.name = "case4";
  p.domain = {-1.0, -1.0, 1.0, 1.0};
  // Quadrant data, indexed 1..4 with (x>=0,y>=0) -> 2, (x<0,y>=0) -> 1,
  // (x<0,y<0) -> 4, (x>=0,y<0) -> 3; the normal component of alpha grad u is
  // continuous across both axes.
  static constexpr double ax[5] = {0.0, 100.0, 1.0, 1000.0, 0.1};
  static constexpr double ay[5] = {0.0, 10.0, 0.1, 100.0, 0.01};
  static constexpr double am[5] = {0.0, 0.1, 10.0, 0.01, 100.0};
  auto quadrant = [](const Vec2& p_) {
    if (p_.x() >= 0.0) return p_.y() >= 0.0 ? 2 : 3;
    return p_.y() >= 0.0 ? 1 : 4;
  };
  p.alpha = [quadrant](const Vec2&, const Vec2& hint) {
    int i = quadrant(hint);
    Mat2 a;
    a << ax[i], 0.0, 0.0, ay[i];
    return a;
  };
  p.exact_u = [quadrant](const Vec2& x) {
    return am[quadrant(x)] * std::sin(2.0 * kPi * x.x()) * std::sin(2.0 * kPi * x.y());
  };
  p.exact_grad = [quadrant](const Vec2& x, const Vec2& hint) {
    int i = quadrant(hint);
    return Vec2(am[i] * 2.0 * kPi * std::cos(2.0 * kPi * x.x()) * std::sin(2.0 * kPi * x.y()),
                am[i] * 2.0 * kPi * std::sin(2.0 * kPi * x.x()) * std::cos(2.0 * kPi * x.y()));
  };
  p.f = [quadrant](const Vec2& x) {
    int i = quadrant(x);
    return am[i] * (ax[i] + ay[i]) * 4.0 * kPi * kPi * std::sin(2.0 * kPi * x.x()) *
           std::sin(2.0 * kPi * x.y());
  };
  p.g = p.exact_u;
  return p;
}

ProblemDefinition problem_by_id(int id, Test2Domain variant) {
  switch (id) {
    case 1: return test_case_1();
    case 2: return test_case_2(variant);
    case 3: return test_case_3();
    case 4: return test_case_4();
    default: throw std::invalid_argument("problem_by_id: id must be in 1..4");
  }
}

}  // namespace cfo
