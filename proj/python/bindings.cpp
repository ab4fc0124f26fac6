#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cfo/analysis.hpp"
#include "cfo/twophase.hpp"

namespace py = pybind11;

namespace {

cfo::Test2Domain variant_of(const std::string& name) {
  if (name == "full") return cfo::Test2Domain::full;
  if (name == "shifted") return cfo::Test2Domain::shifted;
  throw std::invalid_argument("variant must be 'full' or 'shifted'");
}

py::dict report_dict(const cfo::ErrorReport& rep) {
  py::dict d;
  d["h"] = rep.h;
  d["k"] = rep.k;
  d["beta"] = rep.beta;
  d["L2"] = rep.l2_u;
  d["H1"] = rep.h1_u;
  d["flux"] = rep.flux;
  d["lambda"] = rep.l2_lambda;
  d["uRh_L2"] = rep.l2_u_ritz;
  d["uRh_H1"] = rep.h1_u_ritz;
  d["cons_residual"] = rep.cons_residual_max;
  return d;
}

}  // namespace

PYBIND11_MODULE(cfocore, m) {
  m.doc() = "Locally conservative flux-optimization finite elements";

  py::class_<cfo::TriMesh>(m, "TriMesh")
      .def_property_readonly("num_vertices", &cfo::TriMesh::num_vertices)
      .def_property_readonly("num_edges", &cfo::TriMesh::num_edges)
      .def_property_readonly("num_triangles", &cfo::TriMesh::num_triangles)
      .def_property_readonly("h", &cfo::TriMesh::h)
      .def("vertices",
           [](const cfo::TriMesh& mesh) {
             Eigen::MatrixXd v(mesh.num_vertices(), 2);
             for (int i = 0; i < mesh.num_vertices(); ++i) v.row(i) = mesh.vertex(i);
             return v;
           })
      .def("triangles",
           [](const cfo::TriMesh& mesh) {
             Eigen::MatrixXi t(mesh.num_triangles(), 3);
             for (int i = 0; i < mesh.num_triangles(); ++i)
               for (int j = 0; j < 3; ++j) t(i, j) = mesh.triangle(i).v[j];
             return t;
           })
      .def("centroids", [](const cfo::TriMesh& mesh) {
        Eigen::MatrixXd c(mesh.num_triangles(), 2);
        for (int i = 0; i < mesh.num_triangles(); ++i) c.row(i) = mesh.triangle(i).centroid;
        return c;
      });

  m.def(
      "build_uniform_mesh",
      [](double x0, double y0, double x1, double y1, int n) {
        return cfo::build_uniform_mesh({x0, y0, x1, y1}, n);
      },
      py::arg("x0"), py::arg("y0"), py::arg("x1"), py::arg("y1"), py::arg("n"));

  m.def("local_dof_count", &cfo::local_dof_count, py::arg("k"));

  m.def(
      "dof_counts",
      [](const cfo::TriMesh& mesh, int k) {
        cfo::DofLayout layout(mesh, k);
        return py::make_tuple(layout.n_u(), layout.n_q(), layout.n_lambda());
      },
      py::arg("mesh"), py::arg("k"));

  m.def(
      "solve",
      [](int case_id, int k, double beta, int n, const std::string& variant) {
        cfo::ProblemDefinition problem = cfo::problem_by_id(case_id, variant_of(variant));
        cfo::TriMesh mesh = cfo::build_uniform_mesh(problem.domain, n);
        cfo::DofLayout layout(mesh, k);
        cfo::CfoSolution sol = cfo::solve_cfo(mesh, layout, problem, beta);
        py::dict d = report_dict(cfo::compute_errors(mesh, layout, problem, sol));
        d["u"] = sol.u;
        d["q"] = sol.q;
        d["lambda_field"] = sol.lambda;
        return d;
      },
      py::arg("case_id"), py::arg("k"), py::arg("beta"), py::arg("n"),
      py::arg("variant") = "full");

  m.def(
      "convergence",
      [](int case_id, int k, double beta, const std::vector<int>& sizes,
         const std::string& variant) {
        cfo::ProblemDefinition problem = cfo::problem_by_id(case_id, variant_of(variant));
        cfo::ConvergenceTable table = cfo::convergence_study(problem, k, beta, sizes);
        py::list rows;
        for (const auto& rep : table.rows) rows.append(report_dict(rep));
        return rows;
      },
      py::arg("case_id"), py::arg("k"), py::arg("beta"), py::arg("sizes"),
      py::arg("variant") = "full");

  m.def(
      "run_twophase",
      [](int n, int k, double beta, double t_end, double mu_w, double mu_o,
         double perm_variance, std::uint64_t seed) {
        cfo::TwoPhaseConfig cfg;
        cfg.n = n;
        cfg.k = k;
        cfg.beta = beta;
        cfg.t_end = t_end;
        cfg.mu_w = mu_w;
        cfg.mu_o = mu_o;
        cfg.perm_variance = perm_variance;
        cfg.seed = seed;
        cfo::TriMesh mesh = cfo::build_uniform_mesh({0.0, 0.0, 1.0, 1.0}, cfg.n);
        cfo::DofLayout layout(mesh, cfg.k);
        cfo::SimulationResult result = cfo::run_simulation(mesh, layout, cfg);
        py::dict d;
        d["saturation"] = result.state.saturation;
        d["time"] = result.state.time;
        d["steps"] = result.steps;
        d["max_balance_error"] = result.max_balance_error;
        d["min_saturation"] = result.min_saturation;
        d["max_saturation"] = result.max_saturation;
        d["total_injected"] = result.total_injected;
        return d;
      },
      py::arg("n"), py::arg("k") = 1, py::arg("beta") = 1.0, py::arg("t_end") = 0.02,
      py::arg("mu_w") = 1.0, py::arg("mu_o") = 1.0, py::arg("perm_variance") = 3.4,
      py::arg("seed") = 1);
}
