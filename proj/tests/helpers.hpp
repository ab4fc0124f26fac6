#pragma once

// Oracles shared by the test suites. Everything here reaches its answer by a
// route independent of the library code it checks: closed-form integrals,
// direct nodal interpolation, orthogonal-projection coefficients, and a 1D
// displacement reference solver.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cfo/basis.hpp"
#include "cfo/dof_layout.hpp"
#include "cfo/mesh.hpp"
#include "cfo/problem.hpp"
#include "cfo/quadrature.hpp"
#include "cfo/twophase.hpp"

namespace cfo::testing {

// int over the reference triangle of xi^a eta^b = a! b! / (a+b+2)!.
inline double tri_monomial_integral(int a, int b) {
  double v = 1.0;
  for (int i = 1; i <= a; ++i) v *= i;
  for (int i = 1; i <= b; ++i) v *= i;
  for (int i = 1; i <= a + b + 2; ++i) v /= i;
  return v;
}

// Nodal interpolant onto the continuous scalar space.
inline Eigen::VectorXd interpolate_scalar(
    const DofLayout& layout, const std::function<double(const Vec2&)>& fn) {
  Eigen::VectorXd u(layout.n_u());
  for (int d = 0; d < layout.n_u(); ++d) u[d] = fn(layout.s_node_position(d));
  return u;
}

// Edge-wise L2 projection of the exact flux -alpha grad u . n_e onto the
// Legendre modes: coeff_m = (2m+1) int_0^1 flux(x(s)) L_m(s) ds. The element
// hint picks one side of piecewise coefficients; a continuous normal flux
// makes the choice immaterial.
inline Eigen::VectorXd project_exact_flux(const TriMesh& mesh,
                                          const DofLayout& layout,
                                          const ProblemDefinition& problem) {
  const int k = layout.k();
  EdgeBasis basis(k - 1);
  const auto& rule = gauss_legendre(k + 6);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(layout.n_q());
  std::vector<double> psi(basis.size());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& edge = mesh.edge(e);
    const Vec2 a = mesh.vertex(edge.v0);
    const Vec2 b = mesh.vertex(edge.v1);
    const Vec2 hint = mesh.triangle(edge.tri[0]).centroid;
    for (const auto& qp : rule) {
      const Vec2 x = a + qp.s * (b - a);
      const double flux =
          -(problem.alpha(x, hint) * problem.exact_grad(x, hint)).dot(edge.normal);
      basis.eval(qp.s, psi);
      for (int m = 0; m < k; ++m)
        q[layout.q_dof(e, m)] += (2 * m + 1) * qp.w * flux * psi[m];
    }
  }
  return q;
}

// Explicit-upwind reference for a unit pressure drop across a homogeneous
// unit-permeability column: incompressibility makes the total velocity
// uniform in x, v(t) = 1 / int_0^1 dx / lam(S), and the water flux v f(S) is
// upwinded from the inflow side (reservoir S = 1 at x = 0).
struct ColumnReference {
  std::vector<double> saturation;
  double dx = 0.0;
};

inline ColumnReference column_displacement(const CoreyModel& corey, int cells,
                                           double t_end) {
  ColumnReference ref;
  ref.dx = 1.0 / cells;
  ref.saturation.assign(cells, 0.0);
  const double speed = corey.max_wave_speed();
  double t = 0.0;
  while (t < t_end) {
    double resistance = 0.0;
    for (double s : ref.saturation) resistance += ref.dx / corey.mobility(s);
    const double v = 1.0 / resistance;
    double dt = 0.45 * ref.dx / (speed * v);
    if (t + dt > t_end) dt = t_end - t;
    std::vector<double> next(ref.saturation);
    double upstream = corey.frac_flow(1.0);
    for (int i = 0; i < cells; ++i) {
      const double outflow = corey.frac_flow(ref.saturation[i]);
      next[i] += dt / ref.dx * v * (upstream - outflow);
      upstream = outflow;
    }
    ref.saturation.swap(next);
    t += dt;
  }
  return ref;
}

// Midpoint of the first cell below the half saturation level.
inline double front_position(const std::vector<double>& s, double dx) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] < 0.5) return (static_cast<double>(i) + 0.5) * dx;
  return 1.0;
}

// Area-weighted column averages of an element field on the uniform n x n
// grid over the unit square.
inline std::vector<double> column_average(const TriMesh& mesh, int n,
                                          const Eigen::VectorXd& field) {
  std::vector<double> avg(n, 0.0), area(n, 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    int col = static_cast<int>(tri.centroid.x() * n);
    if (col >= n) col = n - 1;
    avg[col] += field[t] * tri.area;
    area[col] += tri.area;
  }
  for (int i = 0; i < n; ++i) avg[i] /= area[i];
  return avg;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

#ifdef CFO_TOOL_PATH
struct ToolResult {
  int exit_code = -1;
  std::string output;
};

// Runs the command-line tool with `args`, capturing stdout+stderr.
inline ToolResult run_tool(const std::string& args) {
  static int counter = 0;
  const std::string capture = "tool_capture_" + std::to_string(counter++) + ".txt";
  const std::string cmd =
      std::string(CFO_TOOL_PATH) + " " + args + " > " + capture + " 2>&1";
  const int raw = std::system(cmd.c_str());
  ToolResult result;
  result.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
  result.output = read_file(capture);
  std::remove(capture.c_str());
  return result;
}
#endif

}  // namespace cfo::testing
