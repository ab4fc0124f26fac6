#include <cmath>
#include <sstream>

#include "cfo/analysis.hpp"
#include "cfo/quadrature.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cfo;

namespace {

// Pure relative comparison (doctest's default mixes in an absolute term).
doctest::Approx near(double v, double rel) {
  return doctest::Approx(v).epsilon(rel).scale(0.0);
}

CfoSolution zero_solution(const DofLayout& layout) {
  CfoSolution z;
  z.k = layout.k();
  z.u = Eigen::VectorXd::Zero(layout.n_u());
  z.q = Eigen::VectorXd::Zero(layout.n_q());
  z.lambda = Eigen::VectorXd::Zero(layout.n_lambda());
  z.ritz_u = z.u;
  return z;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("rate is the base-two error quotient") {
  CHECK(ConvergenceTable::rate(4.0, 1.0) == doctest::Approx(2.0));
  CHECK(ConvergenceTable::rate(8.0, 1.0) == doctest::Approx(3.0));
  CHECK(ConvergenceTable::rate(1.0, 1.0) == doctest::Approx(0.0));
  CHECK(std::isnan(ConvergenceTable::rate(0.0, 1.0)));
  CHECK(std::isnan(ConvergenceTable::rate(1.0, -2.0)));
}

TEST_CASE("norms of the zero solution reproduce closed forms") {
  const auto problem = test_case_1();
  const auto mesh = build_uniform_mesh(problem.domain, 16);
  const DofLayout layout(mesh, 1);
  const ErrorReport r = compute_errors(mesh, layout, problem, zero_solution(layout));

  // ||u||_0 = 1/2 and |u|_1 = pi/sqrt(2) for the product-of-cosines solution.
  CHECK(r.l2_u == near(0.5, 1e-9));
  CHECK(r.h1_u == near(M_PI / std::sqrt(2.0), 1e-9));
  CHECK(r.l2_lambda == 0.0);
  CHECK(r.l2_u_ritz == 0.0);
  CHECK(r.h1_u_ritz == 0.0);
  CHECK(r.l2_ritz == r.l2_u);
  CHECK(r.h1_ritz == r.h1_u);
  CHECK(r.h == doctest::Approx(std::sqrt(2.0) / 16.0));
  CHECK(r.k == 1);

  // The flux norm of the zero solution, re-integrated from its definition
  // sum_T h_T sum_{e in dT} int_e (alpha grad u . n_e)^2 with a finer rule.
  double acc = 0.0;
  const auto& rule = gauss_legendre(8);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int l = 0; l < 3; ++l) {
      const auto& edge = mesh.edge(tri.edge[l]);
      const Vec2 a = mesh.vertex(edge.v0), b = mesh.vertex(edge.v1);
      double line = 0.0;
      for (const auto& qp : rule) {
        const Vec2 x = a + qp.s * (b - a);
        const double fn = (problem.alpha(x, tri.centroid) *
                           problem.exact_grad(x, tri.centroid))
                              .dot(edge.normal);
        line += qp.w * edge.length * fn * fn;
      }
      acc += tri.h * line;
    }
  }
  CHECK(r.flux == near(std::sqrt(acc), 1e-8));
}

TEST_CASE("interpolating an in-space solution yields zero error") {
  const auto problem = test_case_3();
  const auto mesh = build_uniform_mesh(problem.domain, 4);
  for (int k : {2, 3}) {
    const DofLayout layout(mesh, k);
    CfoSolution sol = zero_solution(layout);
    sol.u = testing::interpolate_scalar(layout, problem.exact_u);
    sol.ritz_u = sol.u;
    sol.q = testing::project_exact_flux(mesh, layout, problem);

    const ErrorReport r = compute_errors(mesh, layout, problem, sol);
    CHECK(r.l2_u < 1e-12 * 5.0);
    CHECK(r.h1_u < 1e-11 * 5.0);
    CHECK(r.flux < 1e-10);

    // The projected exact flux balances the source in every element.
    const auto coeff = make_coefficient(problem, mesh);
    const ConservationAudit audit = conservation_audit(mesh, layout, coeff, sol.q);
    CHECK(audit.passes(1e-12));
    CHECK(audit.residuals.size() == mesh.num_triangles());
  }
}

TEST_CASE("solved errors hold pinned values and first-order gradient decay") {
  const auto problem = test_case_1();
  const ConvergenceTable table = convergence_study(problem, 1, 1.0, {8, 16});
  REQUIRE(table.rows.size() == 2);
  const ErrorReport& c = table.rows[0];
  const ErrorReport& f = table.rows[1];

  CHECK(c.l2_u == near(2.742834e-02, 1e-3));
  CHECK(c.h1_u == near(4.347712e-01, 1e-3));
  CHECK(c.flux == near(4.232505e-01, 1e-3));
  CHECK(c.l2_lambda == near(1.142993e-01, 1e-3));
  CHECK(c.l2_u_ritz == near(9.482325e-03, 1e-3));
  CHECK(c.h1_u_ritz == near(5.075654e-02, 1e-3));

  CHECK(ConvergenceTable::rate(c.l2_u, f.l2_u) == doctest::Approx(1.92).epsilon(0.03));
  CHECK(ConvergenceTable::rate(c.h1_u, f.h1_u) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(ConvergenceTable::rate(c.flux, f.flux) == doctest::Approx(1.0).epsilon(0.05));

  // The conforming part stays within a few percent of the plain Galerkin
  // solution in the gradient norm.
  CHECK(std::abs(f.h1_ritz - f.h1_u) <= 0.03 * f.h1_u);
  CHECK(f.cons_residual_max < 1e-12);

  // Mesh width halves exactly between the rows.
  CHECK(f.h == doctest::Approx(0.5 * c.h));
}

TEST_CASE("cubic elements hit the pinned flux level on the medium mesh") {
  const auto problem = test_case_1();
  const auto mesh = build_uniform_mesh(problem.domain, 16);
  const DofLayout layout(mesh, 3);
  const CfoSolution sol = solve_cfo(mesh, layout, problem, 2.0);
  const ErrorReport r = compute_errors(mesh, layout, problem, sol);
  CHECK(std::abs(r.flux - 3.87e-04) <= 0.05 * 3.87e-04);
}

TEST_CASE("discrete flux conserves mass where the naive flux does not") {
  const auto problem = test_case_1();
  const auto mesh = build_uniform_mesh(problem.domain, 8);
  const DofLayout layout(mesh, 1);
  const CfoSolution sol = solve_cfo(mesh, layout, problem, 1.0);
  const auto coeff = make_coefficient(problem, mesh);

  const ConservationAudit good = conservation_audit(mesh, layout, coeff, sol.q);
  CHECK(good.passes(1e-9));
  CHECK(good.max_residual < 1e-12);
  // The source integrates to zero over this domain; the per-element values
  // come from quadrature, so only quadrature accuracy is available here.
  CHECK(std::abs(good.f_integrals.sum()) < 1e-6);

  const ConservationAudit naive = ritz_flux_audit(mesh, layout, coeff, sol.ritz_u);
  CHECK(!naive.passes(1e-9));
  CHECK(naive.max_residual > 1e-3);
}

TEST_CASE("multiplier magnitudes track the local error") {
  const auto problem = test_case_1();
  const auto mesh = build_uniform_mesh(problem.domain, 16);
  const DofLayout layout(mesh, 1);
  const CfoSolution sol = solve_cfo(mesh, layout, problem, 1.0);
  const EstimatorFields est = estimator_fields(mesh, layout, problem, sol);
  REQUIRE(est.lambda_sq.size() == mesh.num_triangles());
  REQUIRE(est.err_sq.size() == mesh.num_triangles());
  CHECK(est.lambda_sq.minCoeff() >= 0.0);
  CHECK(est.err_sq.minCoeff() >= 0.0);
  CHECK(est.correlation > 0.9);
  CHECK(est.correlation <= 1.0);
}

TEST_CASE("study sizes must form a halving sequence") {
  const auto problem = test_case_1();
  CHECK_THROWS_AS(convergence_study(problem, 1, 1.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(problem, 1, 1.0, {8, 12}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(problem, 1, 1.0, {0, 0}), std::invalid_argument);
}

TEST_CASE("table serialization is stable") {
  ConvergenceTable table;
  ErrorReport a;
  a.h = 0.5;
  a.l2_u = 1e-2;
  a.h1_u = 2e-1;
  a.flux = 3.0;
  a.l2_lambda = 4e-3;
  a.l2_u_ritz = 5e-4;
  a.h1_u_ritz = 6e-3;
  a.cons_residual_max = 1e-15;
  ErrorReport b = a;
  b.h = 0.25;
  b.l2_u = 2.5e-3;
  b.h1_u = 1e-1;
  b.flux = 1.5;
  b.l2_lambda = 1e-3;
  b.l2_u_ritz = 6.25e-5;
  b.h1_u_ritz = 1.5e-3;
  b.cons_residual_max = 2e-15;
  table.rows = {a, b};

  std::ostringstream os;
  table.write_csv(os);
  const std::string expected =
      "h,L2,L2_rate,H1,H1_rate,flux,flux_rate,lambda,lambda_rate,"
      "uRh_L2,uRh_L2_rate,uRh_H1,uRh_H1_rate,cons_residual\n"
      "5.00000e-01,1.00000e-02,,2.00000e-01,,3.00000e+00,,4.00000e-03,,"
      "5.00000e-04,,6.00000e-03,,1.00000e-15\n"
      "2.50000e-01,2.50000e-03,2.00000e+00,1.00000e-01,1.00000e+00,"
      "1.50000e+00,1.00000e+00,1.00000e-03,2.00000e+00,6.25000e-05,"
      "3.00000e+00,1.50000e-03,2.00000e+00,2.00000e-15\n";
  CHECK(os.str() == expected);

  CHECK(fmt_sci(0.5) == "5.00000e-01");
  CHECK(fmt_sci(-1.23456789e-4) == "-1.23457e-04");

  std::ostringstream fs;
  Eigen::VectorXd field(2);
  field << 2.5, -1.0;
  write_element_field(fs, field);
  CHECK(fs.str() == "0 2.50000e+00\n1 -1.00000e+00\n");
}

}  // TEST_SUITE
