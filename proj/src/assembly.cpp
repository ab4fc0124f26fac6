#include "cfo/assembly.hpp"

#include <Eigen/Dense>
#include <ostream>

#include "cfo/quadrature.hpp"
#include "cfo/solver.hpp"

namespace cfo {

namespace {

void check_spd(const Mat2& a, const Vec2& x) {
  double asym = std::abs(a(0, 1) - a(1, 0));
  double scale = a.cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, scale) || a(0, 0) <= 0.0 || a.determinant() <= 0.0)
    throw std::invalid_argument("coefficient is not symmetric positive definite at (" +
                                std::to_string(x.x()) + ", " + std::to_string(x.y()) + ")");
}

// Reference data shared by every element of one assembly pass: basis values
// and gradients at the volume rule, reference preimages of the edge Gauss
// points for each (local edge, orientation) pair, edge mode values.
struct ReferenceTables {
  ReferenceTables(int k, int tri_degree, int edge_points)
      : basis(k), edge_basis(k - 1), rule(TriangleRule::for_degree(tri_degree)),
        edge_rule(gauss_legendre(edge_points)) {
    const int ns = basis.size();
    const auto& qps = rule.points();
    phi.resize(qps.size(), std::vector<double>(ns));
    dphi.resize(qps.size(), std::vector<Vec2>(ns));
    for (std::size_t q = 0; q < qps.size(); ++q) {
      basis.eval(qps[q].xi, phi[q]);
      basis.eval_grad(qps[q].xi, dphi[q]);
    }

    const Vec2 ref[3] = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
    const int ne = static_cast<int>(edge_rule.size());
    psi.resize(ne, std::vector<double>(edge_basis.size()));
    for (int q = 0; q < ne; ++q) edge_basis.eval(edge_rule[q].s, psi[q]);
    for (int l = 0; l < 3; ++l) {
      const Vec2& a = ref[l];
      const Vec2& b = ref[(l + 1) % 3];
      for (int fwd = 0; fwd < 2; ++fwd) {
        edge_dphi[l][fwd].resize(ne, std::vector<Vec2>(ns));
        for (int q = 0; q < ne; ++q) {
          double s = edge_rule[q].s;
          Vec2 xi = fwd ? a + s * (b - a) : b + s * (a - b);
          basis.eval_grad(xi, edge_dphi[l][fwd][q]);
        }
      }
    }
  }

  TriBasis basis;
  EdgeBasis edge_basis;
  const TriangleRule& rule;
  const std::vector<QuadPoint1D>& edge_rule;
  std::vector<std::vector<double>> phi;
  std::vector<std::vector<Vec2>> dphi;
  std::vector<std::vector<double>> psi;
  std::array<std::array<std::vector<std::vector<Vec2>>, 2>, 3> edge_dphi;
};

int tri_quad_degree(int k) { return 2 * k + 2; }
int edge_quad_points(int k) { return k + 2; }

ReducedSystem reduce(int n_full, const std::vector<Eigen::Triplet<double>>& trips,
                     const Eigen::VectorXd& rhs_full, const EssentialBc& bc) {
  ReducedSystem sys;
  sys.full_to_reduced.assign(n_full, 0);
  sys.prescribed_values = Eigen::VectorXd::Zero(n_full);
  for (std::size_t i = 0; i < bc.dofs.size(); ++i) {
    int dof = bc.dofs[i];
    if (dof < 0 || dof >= n_full) throw std::invalid_argument("essential bc dof out of range");
    sys.full_to_reduced[dof] = -1;
    sys.prescribed_values[dof] = bc.values[i];
  }
  int n_red = 0;
  for (int i = 0; i < n_full; ++i)
    if (sys.full_to_reduced[i] == 0) sys.full_to_reduced[i] = n_red++;

  sys.rhs = Eigen::VectorXd::Zero(n_red);
  for (int i = 0; i < n_full; ++i)
    if (sys.full_to_reduced[i] >= 0) sys.rhs[sys.full_to_reduced[i]] = rhs_full[i];

  std::vector<Eigen::Triplet<double>> red;
  red.reserve(trips.size());
  for (const auto& t : trips) {
    int r = sys.full_to_reduced[t.row()];
    int c = sys.full_to_reduced[t.col()];
    if (r < 0) continue;
    if (c < 0)
      sys.rhs[r] -= t.value() * sys.prescribed_values[t.col()];
    else
      red.emplace_back(r, c, t.value());
  }
  sys.matrix.resize(n_red, n_red);
  sys.matrix.setFromTriplets(red.begin(), red.end());
  sys.matrix.makeCompressed();
  return sys;
}

}  // namespace

Eigen::VectorXd ReducedSystem::expand(const Eigen::VectorXd& reduced) const {
  Eigen::VectorXd full = prescribed_values;
  for (int i = 0; i < n_full(); ++i)
    if (full_to_reduced[i] >= 0) full[i] = reduced[full_to_reduced[i]];
  return full;
}

ElementCoefficient make_coefficient(const ProblemDefinition& problem,
                                    const TriMesh& mesh) {
  ElementCoefficient c;
  c.alpha = [&problem, &mesh](int t, const Vec2& x) {
    return problem.alpha(x, mesh.triangle(t).centroid);
  };
  c.source = [&problem](int, const Vec2& x) { return problem.f(x); };
  return c;
}

EssentialBc dirichlet_bc(const TriMesh&, const DofLayout& layout,
                         const std::function<double(const Vec2&)>& g) {
  EssentialBc bc;
  for (int dof : layout.boundary_s_dofs()) {
    bc.dofs.push_back(dof);
    bc.values.push_back(g(layout.s_node_position(dof)));
  }
  return bc;
}

SaddleSystem assemble_cfo(const TriMesh& mesh, const DofLayout& layout,
                          const ElementCoefficient& coeff, double beta,
                          const EssentialBc& bc) {
  const int k = layout.k();
  ReferenceTables ref(k, tri_quad_degree(k), edge_quad_points(k));
  const int ns = ref.basis.size();
  const int nm = ref.edge_basis.size();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.num_triangles()) * (ns + 3 * nm) * (ns + 3 * nm));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(layout.n_total());
  std::size_t edge_instances = 0;

  std::vector<Vec2> grad(ns);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleInfo& tri = mesh.triangle(t);
    const auto& dofs = layout.cell_s_dofs(t);
    const Vec2& p0 = mesh.vertex(tri.v[0]);
    Mat2 jac;
    jac.col(0) = mesh.vertex(tri.v[1]) - p0;
    jac.col(1) = mesh.vertex(tri.v[2]) - p0;
    const double detj = jac.determinant();
    const Mat2 invjt = jac.inverse().transpose();

    // Diffusion form and scalar load.
    const auto& qps = ref.rule.points();
    for (std::size_t q = 0; q < qps.size(); ++q) {
      const Vec2 x = p0 + jac * qps[q].xi;
      const Mat2 a = coeff.alpha(t, x);
      check_spd(a, x);
      const double w = qps[q].w * detj;
      for (int i = 0; i < ns; ++i) grad[i] = invjt * ref.dphi[q][i];
      const double fval = coeff.source(t, x);
      for (int i = 0; i < ns; ++i) {
        const Vec2 agi = a * grad[i];
        rhs[dofs[i]] += w * fval * ref.phi[q][i];
        for (int j = 0; j < ns; ++j)
          trips.emplace_back(dofs[i], dofs[j], w * agi.dot(grad[j]));
      }
      rhs[layout.lambda_index(t)] += w * fval;
    }

    // Edge penalty, every element contributes on each of its edges with its
    // own diameter weight and coefficient trace, plus the constraint row.
    const double hbeta = std::pow(tri.h, beta);
    for (int l = 0; l < 3; ++l) {
      ++edge_instances;
      const EdgeInfo& e = mesh.edge(tri.edge[l]);
      const int fwd = tri.forward[l] ? 1 : 0;
      const Vec2& ea = mesh.vertex(e.v0);
      const Vec2& eb = mesh.vertex(e.v1);
      for (std::size_t q = 0; q < ref.edge_rule.size(); ++q) {
        const double s = ref.edge_rule[q].s;
        const Vec2 x = ea + s * (eb - ea);
        const Mat2 a = coeff.alpha(t, x);
        check_spd(a, x);
        const double w = hbeta * ref.edge_rule[q].w * e.length;
        for (int i = 0; i < ns; ++i) {
          grad[i] = invjt * ref.edge_dphi[l][fwd][q][i];
          grad[i] = a * grad[i];
        }
        for (int i = 0; i < ns; ++i) {
          const double ti = grad[i].dot(e.normal);
          for (int j = 0; j < ns; ++j)
            trips.emplace_back(dofs[i], dofs[j], w * ti * grad[j].dot(e.normal));
          for (int m = 0; m < nm; ++m) {
            const double v = w * ti * ref.psi[q][m];
            trips.emplace_back(dofs[i], layout.q_index(layout.q_dof(tri.edge[l], m)), v);
            trips.emplace_back(layout.q_index(layout.q_dof(tri.edge[l], m)), dofs[i], v);
          }
        }
        for (int m = 0; m < nm; ++m)
          for (int n = 0; n < nm; ++n)
            trips.emplace_back(layout.q_index(layout.q_dof(tri.edge[l], m)),
                               layout.q_index(layout.q_dof(tri.edge[l], n)),
                               w * ref.psi[q][m] * ref.psi[q][n]);
      }

      // sigma int_e psi_m ds and its transpose couple q with the multiplier.
      for (int m = 0; m < nm; ++m) {
        const double v = tri.sigma[l] * ref.edge_basis.integral(m) * e.length;
        if (v != 0.0) {
          trips.emplace_back(layout.lambda_index(t),
                             layout.q_index(layout.q_dof(tri.edge[l], m)), v);
          trips.emplace_back(layout.q_index(layout.q_dof(tri.edge[l], m)),
                             layout.lambda_index(t), v);
        }
      }
    }
  }

  ReducedSystem base = reduce(layout.n_total(), trips, rhs, bc);
  SaddleSystem sys;
  static_cast<ReducedSystem&>(sys) = std::move(base);
  sys.n_u = layout.n_u();
  sys.n_q = layout.n_q();
  sys.n_lambda = layout.n_lambda();
  sys.stab_edge_instances = edge_instances;
  return sys;
}

SaddleSystem assemble_cfo(const TriMesh& mesh, const DofLayout& layout,
                          const ProblemDefinition& problem, double beta) {
  return assemble_cfo(mesh, layout, make_coefficient(problem, mesh), beta,
                      dirichlet_bc(mesh, layout, problem.g));
}

ReducedSystem assemble_ritz(const TriMesh& mesh, const DofLayout& layout,
                            const ElementCoefficient& coeff,
                            const EssentialBc& bc) {
  const int k = layout.k();
  ReferenceTables ref(k, tri_quad_degree(k), edge_quad_points(k));
  const int ns = ref.basis.size();

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(layout.n_u());
  EssentialBc ubc;
  for (std::size_t i = 0; i < bc.dofs.size(); ++i) {
    if (bc.dofs[i] < layout.n_u()) {
      ubc.dofs.push_back(bc.dofs[i]);
      ubc.values.push_back(bc.values[i]);
    }
  }

  std::vector<Vec2> grad(ns);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleInfo& tri = mesh.triangle(t);
    const auto& dofs = layout.cell_s_dofs(t);
    const Vec2& p0 = mesh.vertex(tri.v[0]);
    Mat2 jac;
    jac.col(0) = mesh.vertex(tri.v[1]) - p0;
    jac.col(1) = mesh.vertex(tri.v[2]) - p0;
    const double detj = jac.determinant();
    const Mat2 invjt = jac.inverse().transpose();

    const auto& qps = ref.rule.points();
    for (std::size_t q = 0; q < qps.size(); ++q) {
      const Vec2 x = p0 + jac * qps[q].xi;
      const Mat2 a = coeff.alpha(t, x);
      check_spd(a, x);
      const double w = qps[q].w * detj;
      for (int i = 0; i < ns; ++i) grad[i] = invjt * ref.dphi[q][i];
      const double fval = coeff.source(t, x);
      for (int i = 0; i < ns; ++i) {
        rhs[dofs[i]] += w * fval * ref.phi[q][i];
        const Vec2 agi = a * grad[i];
        for (int j = 0; j < ns; ++j)
          trips.emplace_back(dofs[i], dofs[j], w * agi.dot(grad[j]));
      }
    }
  }
  return reduce(layout.n_u(), trips, rhs, ubc);
}

ConstraintBlock assemble_constraint(const TriMesh& mesh, const DofLayout& layout,
                                    const ElementCoefficient& coeff) {
  const int k = layout.k();
  EdgeBasis edge_basis(k - 1);
  const auto& rule = TriangleRule::for_degree(tri_quad_degree(k));

  ConstraintBlock block;
  block.rhs = Eigen::VectorXd::Zero(layout.n_lambda());
  std::vector<Eigen::Triplet<double>> trips;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleInfo& tri = mesh.triangle(t);
    for (int l = 0; l < 3; ++l) {
      const EdgeInfo& e = mesh.edge(tri.edge[l]);
      for (int m = 0; m < edge_basis.size(); ++m) {
        double v = tri.sigma[l] * edge_basis.integral(m) * e.length;
        if (v != 0.0) trips.emplace_back(t, layout.q_dof(tri.edge[l], m), v);
      }
    }
    const Vec2& p0 = mesh.vertex(tri.v[0]);
    Mat2 jac;
    jac.col(0) = mesh.vertex(tri.v[1]) - p0;
    jac.col(1) = mesh.vertex(tri.v[2]) - p0;
    for (const auto& qp : rule.points())
      block.rhs[t] += qp.w * jac.determinant() * coeff.source(t, p0 + jac * qp.xi);
  }
  block.matrix.resize(layout.n_lambda(), layout.n_q());
  block.matrix.setFromTriplets(trips.begin(), trips.end());
  block.matrix.makeCompressed();
  return block;
}

double weak_divergence(const TriMesh& mesh, const DofLayout& layout,
                       const Eigen::VectorXd& q, int element) {
  const TriangleInfo& tri = mesh.triangle(element);
  EdgeBasis edge_basis(layout.k() - 1);
  double acc = 0.0;
  for (int l = 0; l < 3; ++l) {
    const EdgeInfo& e = mesh.edge(tri.edge[l]);
    for (int m = 0; m < edge_basis.size(); ++m)
      acc += tri.sigma[l] * q[layout.q_dof(tri.edge[l], m)] * edge_basis.integral(m) * e.length;
  }
  return acc / tri.area;
}

double stabilized_objective(const TriMesh& mesh, const DofLayout& layout,
                            const ElementCoefficient& coeff, double beta,
                            const Eigen::VectorXd& u_full,
                            const Eigen::VectorXd& q) {
  const int k = layout.k();
  ReferenceTables ref(k, tri_quad_degree(k), edge_quad_points(k));
  const int ns = ref.basis.size();
  const int nm = ref.edge_basis.size();

  double value = 0.0;
  std::vector<Vec2> grad(ns);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleInfo& tri = mesh.triangle(t);
    const auto& dofs = layout.cell_s_dofs(t);
    const Vec2& p0 = mesh.vertex(tri.v[0]);
    Mat2 jac;
    jac.col(0) = mesh.vertex(tri.v[1]) - p0;
    jac.col(1) = mesh.vertex(tri.v[2]) - p0;
    const double detj = jac.determinant();
    const Mat2 invjt = jac.inverse().transpose();

    const auto& qps = ref.rule.points();
    for (std::size_t qi = 0; qi < qps.size(); ++qi) {
      const Vec2 x = p0 + jac * qps[qi].xi;
      const double w = qps[qi].w * detj;
      Vec2 gu(0.0, 0.0);
      double uval = 0.0;
      for (int i = 0; i < ns; ++i) {
        gu += u_full[dofs[i]] * (invjt * ref.dphi[qi][i]);
        uval += u_full[dofs[i]] * ref.phi[qi][i];
      }
      value += w * (0.5 * gu.dot(coeff.alpha(t, x) * gu) - coeff.source(t, x) * uval);
    }

    const double hbeta = std::pow(tri.h, beta);
    for (int l = 0; l < 3; ++l) {
      const EdgeInfo& e = mesh.edge(tri.edge[l]);
      const int fwd = tri.forward[l] ? 1 : 0;
      const Vec2& ea = mesh.vertex(e.v0);
      const Vec2& eb = mesh.vertex(e.v1);
      for (std::size_t qi = 0; qi < ref.edge_rule.size(); ++qi) {
        const double s = ref.edge_rule[qi].s;
        const Vec2 x = ea + s * (eb - ea);
        const Mat2 a = coeff.alpha(t, x);
        Vec2 gu(0.0, 0.0);
        for (int i = 0; i < ns; ++i) gu += u_full[dofs[i]] * (invjt * ref.edge_dphi[l][fwd][qi][i]);
        double resid = (a * gu).dot(e.normal);
        for (int m = 0; m < nm; ++m)
          resid += q[layout.q_dof(tri.edge[l], m)] * ref.psi[qi][m];
        value += 0.5 * hbeta * ref.edge_rule[qi].w * e.length * resid * resid;
      }
    }
  }
  return value;
}

Eigen::VectorXd constraint_residual(const TriMesh& mesh, const DofLayout& layout,
                                    const ElementCoefficient& coeff,
                                    const Eigen::VectorXd& q) {
  ConstraintBlock block = assemble_constraint(mesh, layout, coeff);
  return block.matrix * q - block.rhs;
}

void SaddleSystem::dump(std::ostream& os) const {
  os << matrix.rows() << " " << matrix.nonZeros() << "\n";
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

CfoSolution solve_cfo(const TriMesh& mesh, const DofLayout& layout,
                      const ProblemDefinition& problem, double beta) {
  ElementCoefficient coeff = make_coefficient(problem, mesh);
  EssentialBc bc = dirichlet_bc(mesh, layout, problem.g);

  SaddleSystem sys = assemble_cfo(mesh, layout, coeff, beta, bc);
  Eigen::VectorXd full = sys.expand(solve_symmetric_indefinite(sys.matrix, sys.rhs));

  CfoSolution sol;
  sol.k = layout.k();
  sol.beta = beta;
  sol.u = full.segment(0, layout.n_u());
  sol.q = full.segment(layout.n_u(), layout.n_q());
  sol.lambda = full.tail(layout.n_lambda());

  ReducedSystem ritz = assemble_ritz(mesh, layout, coeff, bc);
  sol.ritz_u = ritz.expand(solve_spd(ritz.matrix, ritz.rhs));
  return sol;
}

}  // namespace cfo
