#include "cfo/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "cfo/quadrature.hpp"

namespace cfo {

namespace {

// Error norms use two extra polynomial degrees over the assembly rules so the
// non-polynomial integrands are resolved well past the reported digits.
int error_tri_degree(int k) { return 2 * k + 4; }
int error_edge_points(int k) { return k + 4; }

struct ElementGeometry {
  Mat2 jac;
  Mat2 invjt;
  double detj;
  Vec2 p0;

  explicit ElementGeometry(const TriMesh& mesh, const TriangleInfo& tri) {
    p0 = mesh.vertex(tri.v[0]);
    jac.col(0) = mesh.vertex(tri.v[1]) - p0;
    jac.col(1) = mesh.vertex(tri.v[2]) - p0;
    detj = jac.determinant();
    invjt = jac.inverse().transpose();
  }
};

}  // namespace

ErrorReport compute_errors(const TriMesh& mesh, const DofLayout& layout,
                           const ProblemDefinition& problem,
                           const CfoSolution& solution) {
  if (!problem.has_exact())
    throw std::invalid_argument("compute_errors: problem has no exact solution");

  const int k = layout.k();
  TriBasis basis(k);
  EdgeBasis edge_basis(k - 1);
  const auto& rule = TriangleRule::for_degree(error_tri_degree(k));
  const auto& edge_rule = gauss_legendre(error_edge_points(k));
  const int ns = basis.size();

  ErrorReport rep;
  rep.h = mesh.h();
  rep.k = k;
  rep.beta = solution.beta;

  double l2 = 0, h1 = 0, flux = 0, l2r = 0, h1r = 0, l2l = 0;
  double l2re = 0, h1re = 0;
  std::vector<double> phi(ns);
  std::vector<Vec2> dphi(ns);

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleInfo& tri = mesh.triangle(t);
    const auto& dofs = layout.cell_s_dofs(t);
    ElementGeometry geo(mesh, tri);

    for (const auto& qp : rule.points()) {
      const Vec2 x = geo.p0 + geo.jac * qp.xi;
      const double w = qp.w * geo.detj;
      basis.eval(qp.xi, phi);
      basis.eval_grad(qp.xi, dphi);

      double uh = 0, ur = 0;
      Vec2 guh(0, 0), gur(0, 0);
      for (int i = 0; i < ns; ++i) {
        const Vec2 g = geo.invjt * dphi[i];
        uh += solution.u[dofs[i]] * phi[i];
        ur += solution.ritz_u[dofs[i]] * phi[i];
        guh += solution.u[dofs[i]] * g;
        gur += solution.ritz_u[dofs[i]] * g;
      }
      const double ue = problem.exact_u(x);
      const Vec2 ge = problem.exact_grad(x, tri.centroid);
      l2 += w * (uh - ue) * (uh - ue);
      h1 += w * (guh - ge).squaredNorm();
      l2r += w * (uh - ur) * (uh - ur);
      h1r += w * (guh - gur).squaredNorm();
      l2re += w * (ur - ue) * (ur - ue);
      h1re += w * (gur - ge).squaredNorm();
    }

    l2l += solution.lambda[t] * solution.lambda[t] * tri.area;

    for (int l = 0; l < 3; ++l) {
      const EdgeInfo& e = mesh.edge(tri.edge[l]);
      const Vec2& ea = mesh.vertex(e.v0);
      const Vec2& eb = mesh.vertex(e.v1);
      for (const auto& qp : edge_rule) {
        const Vec2 x = ea + qp.s * (eb - ea);
        const Mat2 a = problem.alpha(x, tri.centroid);
        const Vec2 ge = problem.exact_grad(x, tri.centroid);
        double qh = 0;
        std::array<double, 3> psi{};
        edge_basis.eval(qp.s, psi);
        for (int m = 0; m < edge_basis.size(); ++m)
          qh += solution.q[layout.q_dof(tri.edge[l], m)] * psi[m];
        const double resid = (a * ge).dot(e.normal) + qh;
        flux += tri.h * qp.w * e.length * resid * resid;
      }
    }
  }

  rep.l2_u = std::sqrt(l2);
  rep.h1_u = std::sqrt(h1);
  rep.flux = std::sqrt(flux);
  rep.l2_lambda = std::sqrt(l2l);
  rep.l2_u_ritz = std::sqrt(l2r);
  rep.h1_u_ritz = std::sqrt(h1r);
  rep.l2_ritz = std::sqrt(l2re);
  rep.h1_ritz = std::sqrt(h1re);

  ElementCoefficient coeff = make_coefficient(problem, mesh);
  rep.cons_residual_max = conservation_audit(mesh, layout, coeff, solution.q).max_residual;
  return rep;
}

bool ConservationAudit::passes(double factor) const {
  for (int t = 0; t < residuals.size(); ++t)
    if (std::abs(residuals[t]) > factor * std::max(1.0, std::abs(f_integrals[t])))
      return false;
  return true;
}

ConservationAudit conservation_audit(const TriMesh& mesh, const DofLayout& layout,
                                     const ElementCoefficient& coeff,
                                     const Eigen::VectorXd& q) {
  ConstraintBlock block = assemble_constraint(mesh, layout, coeff);
  ConservationAudit audit;
  audit.residuals = block.matrix * q - block.rhs;
  audit.f_integrals = block.rhs;
  audit.max_residual = audit.residuals.size() ? audit.residuals.cwiseAbs().maxCoeff() : 0.0;
  return audit;
}

ConservationAudit conservation_audit_flux(
    const TriMesh& mesh, const ElementCoefficient& coeff,
    const std::function<double(int, int, const Vec2&)>& flux) {
  const auto& rule = TriangleRule::for_degree(8);
  const auto& edge_rule = gauss_legendre(6);

  ConservationAudit audit;
  audit.residuals = Eigen::VectorXd::Zero(mesh.num_triangles());
  audit.f_integrals = Eigen::VectorXd::Zero(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleInfo& tri = mesh.triangle(t);
    ElementGeometry geo(mesh, tri);
    double acc = 0.0;
    for (int l = 0; l < 3; ++l) {
      const EdgeInfo& e = mesh.edge(tri.edge[l]);
      const Vec2& ea = mesh.vertex(e.v0);
      const Vec2& eb = mesh.vertex(e.v1);
      for (const auto& qp : edge_rule)
        acc += tri.sigma[l] * qp.w * e.length * flux(t, l, ea + qp.s * (eb - ea));
    }
    double fint = 0.0;
    for (const auto& qp : rule.points())
      fint += qp.w * geo.detj * coeff.source(t, geo.p0 + geo.jac * qp.xi);
    audit.residuals[t] = acc - fint;
    audit.f_integrals[t] = fint;
  }
  audit.max_residual = audit.residuals.cwiseAbs().maxCoeff();
  return audit;
}

ConservationAudit ritz_flux_audit(const TriMesh& mesh, const DofLayout& layout,
                                  const ElementCoefficient& coeff,
                                  const Eigen::VectorXd& ritz_u) {
  TriBasis basis(layout.k());
  const int ns = basis.size();
  auto flux = [&](int t, int l, const Vec2& x) {
    const TriangleInfo& tri = mesh.triangle(t);
    ElementGeometry geo(mesh, tri);
    // Reference preimage of x (the affine map is invertible per element).
    const Vec2 xi = geo.jac.inverse() * (x - geo.p0);
    std::vector<Vec2> dphi(ns);
    basis.eval_grad(xi, dphi);
    Vec2 gu(0, 0);
    const auto& dofs = layout.cell_s_dofs(t);
    for (int i = 0; i < ns; ++i) gu += ritz_u[dofs[i]] * (geo.invjt * dphi[i]);
    return -(coeff.alpha(t, x) * gu).dot(mesh.edge(tri.edge[l]).normal);
  };
  return conservation_audit_flux(mesh, coeff, flux);
}

double ConvergenceTable::rate(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(coarse / fine);
}

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.5e", v);
  return buf;
}

void ConvergenceTable::write_csv(std::ostream& os) const {
  os << "h,L2,L2_rate,H1,H1_rate,flux,flux_rate,lambda,lambda_rate,"
        "uRh_L2,uRh_L2_rate,uRh_H1,uRh_H1_rate,cons_residual\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const ErrorReport& row = rows[r];
    const ErrorReport* prev = r > 0 ? &rows[r - 1] : nullptr;
    auto cell = [&](double val, double prev_val) {
      std::string s = "," + fmt_sci(val) + ",";
      if (prev) {
        double rt = rate(prev_val, val);
        if (std::isfinite(rt)) s += fmt_sci(rt);
      }
      return s;
    };
    os << fmt_sci(row.h);
    os << cell(row.l2_u, prev ? prev->l2_u : 0);
    os << cell(row.h1_u, prev ? prev->h1_u : 0);
    os << cell(row.flux, prev ? prev->flux : 0);
    os << cell(row.l2_lambda, prev ? prev->l2_lambda : 0);
    os << cell(row.l2_u_ritz, prev ? prev->l2_u_ritz : 0);
    os << cell(row.h1_u_ritz, prev ? prev->h1_u_ritz : 0);
    os << "," << fmt_sci(row.cons_residual_max) << "\n";
  }
}

ConvergenceTable convergence_study(const ProblemDefinition& problem, int k,
                                   double beta, const std::vector<int>& sizes) {
  if (sizes.empty()) throw std::invalid_argument("convergence_study: empty size list");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw std::invalid_argument("convergence_study: sizes must be >= 1");
    if (i > 0 && sizes[i] != 2 * sizes[i - 1])
      throw std::invalid_argument("convergence_study: sizes must double (halving sequence)");
  }

  ConvergenceTable table;
  for (int n : sizes) {
    TriMesh mesh = build_uniform_mesh(problem.domain, n);
    DofLayout layout(mesh, k);
    CfoSolution sol = solve_cfo(mesh, layout, problem, beta);
    table.rows.push_back(compute_errors(mesh, layout, problem, sol));
  }
  return table;
}

EstimatorFields estimator_fields(const TriMesh& mesh, const DofLayout& layout,
                                 const ProblemDefinition& problem,
                                 const CfoSolution& solution) {
  if (!problem.has_exact())
    throw std::invalid_argument("estimator_fields: problem has no exact solution");

  const int k = layout.k();
  TriBasis basis(k);
  const auto& rule = TriangleRule::for_degree(error_tri_degree(k));
  const int ns = basis.size();

  EstimatorFields fields;
  fields.lambda_sq = solution.lambda.cwiseProduct(solution.lambda);
  fields.err_sq = Eigen::VectorXd::Zero(mesh.num_triangles());

  std::vector<double> phi(ns);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleInfo& tri = mesh.triangle(t);
    const auto& dofs = layout.cell_s_dofs(t);
    ElementGeometry geo(mesh, tri);
    double acc = 0.0;
    for (const auto& qp : rule.points()) {
      const Vec2 x = geo.p0 + geo.jac * qp.xi;
      basis.eval(qp.xi, phi);
      double uh = 0;
      for (int i = 0; i < ns; ++i) uh += solution.u[dofs[i]] * phi[i];
      const double d = uh - problem.exact_u(x);
      acc += qp.w * geo.detj * d * d;
    }
    fields.err_sq[t] = acc;
  }

  const int n = mesh.num_triangles();
  const double mx = fields.lambda_sq.mean();
  const double my = fields.err_sq.mean();
  double sxy = 0, sxx = 0, syy = 0;
  for (int t = 0; t < n; ++t) {
    const double dx = fields.lambda_sq[t] - mx;
    const double dy = fields.err_sq[t] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  fields.correlation = (sxx > 0 && syy > 0) ? sxy / std::sqrt(sxx * syy) : 0.0;
  return fields;
}

void write_element_field(std::ostream& os, const Eigen::VectorXd& field) {
  for (int t = 0; t < field.size(); ++t) os << t << " " << fmt_sci(field[t]) << "\n";
}

}  // namespace cfo
