#pragma once

#include <functional>
#include <string>

#include "cfo/common.hpp"

namespace cfo {

// Data of the model problem  -div(alpha grad u) = f  with Dirichlet trace g.
// `hint` is a point known to lie inside the element being assembled (its
// centroid): piecewise-defined coefficients pick their branch from the hint
// so that every element sees the one-sided trace of alpha and grad u, while
// pointwise-continuous quantities may ignore it.
struct ProblemDefinition {
  std::string name;
  Rect domain;
  std::function<Mat2(const Vec2& x, const Vec2& hint)> alpha;
  std::function<double(const Vec2& x)> f;
  std::function<double(const Vec2& x)> g;
  // Optional manufactured solution.
  std::function<double(const Vec2& x)> exact_u;
  std::function<Vec2(const Vec2& x, const Vec2& hint)> exact_grad;

  bool has_exact() const { return static_cast<bool>(exact_u); }
};

// Smooth isotropic benchmark on the unit square, u = cos(pi x) cos(pi y).
ProblemDefinition test_case_1();

// Full-tensor variable coefficient with |x|^(1/3)-type entries; same u.
// The shifted variant moves the domain off the coordinate axes.
enum class Test2Domain { full, shifted };
ProblemDefinition test_case_2(Test2Domain variant);

// Piecewise-quadratic solution over an interface at x = 0.5 with a full
// tensor on the right half; both u and the normal flux are continuous.
ProblemDefinition test_case_3();

// Four-quadrant diagonal coefficient with strong jumps,
// u = a_i sin(2 pi x) sin(2 pi y) in quadrant i.
ProblemDefinition test_case_4();

// id in 1..4; the variant applies to case 2 only.
ProblemDefinition problem_by_id(int id, Test2Domain variant = Test2Domain::full);

}  // namespace cfo
