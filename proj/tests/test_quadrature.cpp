#include <cmath>

#include "cfo/quadrature.hpp"
#include "doctest.h"

using namespace cfo;

namespace {

// Exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!.
double tri_monomial(int a, int b) {
  double v = 1.0;
  for (int i = 1; i <= a; ++i) v *= i;
  for (int i = 1; i <= b; ++i) v *= i;
  for (int i = 1; i <= a + b + 2; ++i) v /= i;
  return v;
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("gauss-legendre weights and nodes") {
  for (int n = 1; n <= 12; ++n) {
    const auto& rule = gauss_legendre(n);
    REQUIRE(rule.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (const auto& q : rule) {
      CHECK(q.s > 0.0);
      CHECK(q.s < 1.0);
      wsum += q.w;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    // Exact for monomials up to degree 2n-1.
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double acc = 0.0;
      for (const auto& q : rule) acc += q.w * std::pow(q.s, d);
      CHECK(acc == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("gauss-legendre midpoint rule for n=1") {
  const auto& rule = gauss_legendre(1);
  CHECK(rule[0].s == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rule[0].w == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("triangle rule monomial exactness") {
  for (int degree : {2, 4, 6, 8, 10}) {
    const TriangleRule& rule = TriangleRule::for_degree(degree);
    REQUIRE(rule.exactness() >= degree);
    double wsum = 0.0;
    for (const auto& q : rule.points()) {
      CHECK(q.xi.x() >= 0.0);
      CHECK(q.xi.y() >= 0.0);
      CHECK(q.xi.x() + q.xi.y() <= 1.0 + 1e-14);
      wsum += q.w;
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a + 0 <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        double acc = 0.0;
        for (const auto& q : rule.points())
          acc += q.w * std::pow(q.xi.x(), a) * std::pow(q.xi.y(), b);
        CHECK(acc == doctest::Approx(tri_monomial(a, b)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("triangle rule rejects negative degree") {
  CHECK_THROWS_AS(TriangleRule::for_degree(-1), std::invalid_argument);
}

}  // TEST_SUITE
