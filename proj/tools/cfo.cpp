// Command line front end: mesh/dof info, single solves, convergence tables,
// error-indicator fields and the two-phase transport driver. All file output
// is deterministic (fixed formatting, no timestamps) so reruns are
// byte-identical.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "cfo/analysis.hpp"
#include "cfo/twophase.hpp"

namespace fs = std::filesystem;

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  std::ofstream os(dir / name);
  if (!os) throw std::invalid_argument("cannot write " + (dir / name).string());
  return os;
}

// manifest.txt records the tool version and every resolved option of the
// invocation, enough to replay it.
void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
  auto os = open_out(dir, "manifest.txt");
  os << "tool=cfo\n";
  os << "version=" << cfo::kVersion << "\n";
  os << "command=" << command << "\n";
  for (const auto& [key, value] : kv) os << key << "=" << value << "\n";
}

void write_report(std::ostream& os, const cfo::ErrorReport& rep) {
  os << "h=" << cfo::fmt_sci(rep.h) << "\n";
  os << "k=" << rep.k << "\n";
  os << "beta=" << fmt_g(rep.beta) << "\n";
  os << "L2=" << cfo::fmt_sci(rep.l2_u) << "\n";
  os << "H1=" << cfo::fmt_sci(rep.h1_u) << "\n";
  os << "flux=" << cfo::fmt_sci(rep.flux) << "\n";
  os << "lambda=" << cfo::fmt_sci(rep.l2_lambda) << "\n";
  os << "uRh_L2=" << cfo::fmt_sci(rep.l2_u_ritz) << "\n";
  os << "uRh_H1=" << cfo::fmt_sci(rep.h1_u_ritz) << "\n";
  os << "cons_residual=" << cfo::fmt_sci(rep.cons_residual_max) << "\n";
}

struct SolveOpts {
  int case_id = 1;
  std::string variant = "full";
  int k = 1;
  double beta = 1.0;
  int n = 8;
  std::string out = "out";
  bool dump_mesh = false;
  bool dump_system = false;
};

struct ConvergeOpts {
  int case_id = 1;
  std::string variant = "full";
  int k = 1;
  std::vector<double> betas;
  std::vector<int> sizes;
  std::string out = "out";
};

struct EstimatorOpts {
  int case_id = 1;
  std::string variant = "full";
  int k = 1;
  double beta = 1.0;
  int n = 8;
  std::string out = "out";
};

struct DofsOpts {
  int kmin = 1;
  int kmax = 3;
};

cfo::Test2Domain variant_of(const std::string& name) {
  if (name == "full") return cfo::Test2Domain::full;
  if (name == "shifted") return cfo::Test2Domain::shifted;
  throw std::invalid_argument("variant must be 'full' or 'shifted'");
}

std::string beta_tag(double beta) { return "beta" + fmt_g(beta); }

int run_dofs(const DofsOpts& o) {
  if (o.kmin < 1 || o.kmax < o.kmin)
    throw std::invalid_argument("dofs: need 1 <= kmin <= kmax");
  std::cout << "k cfo rt bdm\n";
  auto row = [](int k) {
    std::cout << k << " " << cfo::local_dof_count(k) << " " << (k + 1) * (k + 3) << " "
              << (k + 1) * (k + 2) << "\n";
  };
  for (int k = o.kmin; k <= o.kmax; ++k) row(k);
  if (o.kmax < 10) row(10);  // general-k formula sample
  return 0;
}

int run_solve(const SolveOpts& o) {
  cfo::ProblemDefinition problem = cfo::problem_by_id(o.case_id, variant_of(o.variant));
  cfo::TriMesh mesh = cfo::build_uniform_mesh(problem.domain, o.n);
  cfo::DofLayout layout(mesh, o.k);
  cfo::CfoSolution sol = cfo::solve_cfo(mesh, layout, problem, o.beta);
  cfo::ErrorReport rep = cfo::compute_errors(mesh, layout, problem, sol);

  fs::create_directories(o.out);
  {
    auto os = open_out(o.out, "report.txt");
    write_report(os, rep);
  }
  {
    auto os = open_out(o.out, "lambda.txt");
    cfo::write_element_field(os, sol.lambda);
  }
  {
    auto os = open_out(o.out, "u_nodes.txt");
    for (int dof = 0; dof < layout.n_u(); ++dof) {
      const cfo::Vec2& x = layout.s_node_position(dof);
      os << dof << " " << cfo::fmt_sci(x.x()) << " " << cfo::fmt_sci(x.y()) << " "
         << cfo::fmt_sci(sol.u[dof]) << "\n";
    }
  }
  {
    auto os = open_out(o.out, "q_modes.txt");
    for (int e = 0; e < mesh.num_edges(); ++e)
      for (int m = 0; m < o.k; ++m)
        os << e << " " << m << " " << cfo::fmt_sci(sol.q[layout.q_dof(e, m)]) << "\n";
  }
  if (o.dump_mesh) {
    auto os = open_out(o.out, "mesh.txt");
    mesh.dump(os);
  }
  if (o.dump_system) {
    auto os = open_out(o.out, "system.txt");
    cfo::assemble_cfo(mesh, layout, problem, o.beta).dump(os);
  }
  write_manifest(o.out, "solve",
                 {{"case", std::to_string(o.case_id)},
                  {"variant", o.variant},
                  {"k", std::to_string(o.k)},
                  {"beta", fmt_g(o.beta)},
                  {"n", std::to_string(o.n)},
                  {"dump_mesh", o.dump_mesh ? "1" : "0"},
                  {"dump_system", o.dump_system ? "1" : "0"},
                  {"out", o.out}});
  write_report(std::cout, rep);
  return 0;
}

int run_converge(const ConvergeOpts& o) {
  if (o.betas.empty()) throw std::invalid_argument("converge: need at least one --beta");
  if (o.sizes.empty()) throw std::invalid_argument("converge: need --sizes");
  cfo::ProblemDefinition problem = cfo::problem_by_id(o.case_id, variant_of(o.variant));

  fs::create_directories(o.out);
  std::vector<std::pair<std::string, std::string>> kv = {
      {"case", std::to_string(o.case_id)},
      {"variant", o.variant},
      {"k", std::to_string(o.k)},
      {"out", o.out}};
  std::string sizes_str;
  for (std::size_t i = 0; i < o.sizes.size(); ++i)
    sizes_str += (i ? "," : "") + std::to_string(o.sizes[i]);
  kv.emplace_back("sizes", sizes_str);

  for (double beta : o.betas) {
    cfo::ConvergenceTable table = cfo::convergence_study(problem, o.k, beta, o.sizes);
    std::string name = problem.name + "_k" + std::to_string(o.k) + "_" + beta_tag(beta) + ".csv";
    auto os = open_out(o.out, name);
    table.write_csv(os);
    std::cout << "wrote " << (fs::path(o.out) / name).string() << "\n";
    kv.emplace_back(beta_tag(beta), name);
  }
  write_manifest(o.out, "converge", kv);
  return 0;
}

int run_estimator(const EstimatorOpts& o) {
  cfo::ProblemDefinition problem = cfo::problem_by_id(o.case_id, variant_of(o.variant));
  cfo::TriMesh mesh = cfo::build_uniform_mesh(problem.domain, o.n);
  cfo::DofLayout layout(mesh, o.k);
  cfo::CfoSolution sol = cfo::solve_cfo(mesh, layout, problem, o.beta);
  cfo::EstimatorFields fields = cfo::estimator_fields(mesh, layout, problem, sol);

  fs::create_directories(o.out);
  {
    auto os = open_out(o.out, "lambda_sq.txt");
    cfo::write_element_field(os, fields.lambda_sq);
  }
  {
    auto os = open_out(o.out, "err_sq.txt");
    cfo::write_element_field(os, fields.err_sq);
  }
  {
    auto os = open_out(o.out, "mesh.txt");
    mesh.dump(os);
  }
  write_manifest(o.out, "estimator",
                 {{"case", std::to_string(o.case_id)},
                  {"variant", o.variant},
                  {"k", std::to_string(o.k)},
                  {"beta", fmt_g(o.beta)},
                  {"n", std::to_string(o.n)},
                  {"out", o.out}});
  std::cout << "correlation=" << cfo::fmt_sci(fields.correlation) << "\n";
  return 0;
}

int run_twophase(const cfo::TwoPhaseConfig& cfg, const std::string& out) {
  cfo::TriMesh mesh = cfo::build_uniform_mesh({0.0, 0.0, 1.0, 1.0}, cfg.n);
  cfo::DofLayout layout(mesh, cfg.k);
  cfo::SimulationResult result = cfo::run_simulation(mesh, layout, cfg);

  fs::create_directories(out);
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%03zu.txt", i);
    auto os = open_out(out, name);
    cfo::write_snapshot(os, result.snapshots[i]);
  }
  {
    auto os = open_out(out, "final_saturation.txt");
    cfo::write_element_field(os, result.state.saturation);
  }
  {
    cfo::PermeabilityField perm = cfo::permeability_from_config(cfg);
    auto os = open_out(out, "perm.txt");
    os << perm.nx << " " << perm.ny << "\n";
    for (int j = 0; j < perm.ny; ++j) {
      for (int i = 0; i < perm.nx; ++i)
        os << (i ? " " : "") << cfo::fmt_sci(perm.log_kappa[std::size_t(j) * perm.nx + i]);
      os << "\n";
    }
  }
  {
    auto os = open_out(out, "mesh.txt");
    mesh.dump(os);
  }
  {
    auto os = open_out(out, "summary.txt");
    os << "steps=" << result.steps << "\n";
    os << "final_time=" << cfo::fmt_sci(result.state.time) << "\n";
    os << "max_balance_error=" << cfo::fmt_sci(result.max_balance_error) << "\n";
    os << "min_saturation=" << cfo::fmt_sci(result.min_saturation) << "\n";
    os << "max_saturation=" << cfo::fmt_sci(result.max_saturation) << "\n";
    os << "total_injected=" << cfo::fmt_sci(result.total_injected) << "\n";
  }
  std::string snaps;
  for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i)
    snaps += (i ? "," : "") + fmt_g(cfg.snapshot_times[i]);
  write_manifest(out, "twophase",
                 {{"n", std::to_string(cfg.n)},
                  {"k", std::to_string(cfg.k)},
                  {"beta", fmt_g(cfg.beta)},
                  {"tend", fmt_g(cfg.t_end)},
                  {"snapshots", snaps},
                  {"mu_w", fmt_g(cfg.mu_w)},
                  {"mu_o", fmt_g(cfg.mu_o)},
                  {"initial_saturation", fmt_g(cfg.initial_saturation)},
                  {"pressure_stride", std::to_string(cfg.pressure_stride)},
                  {"cfl", fmt_g(cfg.cfl)},
                  {"perm_file", cfg.perm_file},
                  {"perm_nx", std::to_string(cfg.perm_nx)},
                  {"perm_ny", std::to_string(cfg.perm_ny)},
                  {"perm_mean", fmt_g(cfg.perm_mean)},
                  {"perm_variance", fmt_g(cfg.perm_variance)},
                  {"perm_corr_len", fmt_g(cfg.perm_corr_len)},
                  {"seed", std::to_string(cfg.seed)},
                  {"out", out}});
  std::cout << "steps=" << result.steps << "\n";
  std::cout << "max_balance_error=" << cfo::fmt_sci(result.max_balance_error) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally conservative flux-optimization finite element toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file (flags win)");
  app.allow_config_extras(false);

  DofsOpts dofs;
  CLI::App* cmd_dofs = app.add_subcommand("dofs", "Per-element unknown counts");
  cmd_dofs->add_option("--kmin", dofs.kmin, "Smallest degree");
  cmd_dofs->add_option("--kmax", dofs.kmax, "Largest degree");

  SolveOpts solve;
  CLI::App* cmd_solve = app.add_subcommand("solve", "Solve one benchmark configuration");
  cmd_solve->add_option("--case", solve.case_id, "Benchmark case 1..4")->required();
  cmd_solve->add_option("--variant", solve.variant, "Case 2 domain: full|shifted");
  cmd_solve->add_option("--k", solve.k, "Polynomial degree 1..3")->required();
  cmd_solve->add_option("--beta", solve.beta, "Penalty exponent")->required();
  cmd_solve->add_option("--n", solve.n, "Mesh subdivisions per side")->required();
  cmd_solve->add_option("--out", solve.out, "Output directory");
  cmd_solve->add_flag("--dump-mesh", solve.dump_mesh, "Also write mesh.txt");
  cmd_solve->add_flag("--dump-system", solve.dump_system, "Also write system.txt");

  ConvergeOpts conv;
  CLI::App* cmd_conv = app.add_subcommand("converge", "Convergence table over a mesh sequence");
  cmd_conv->add_option("--case", conv.case_id, "Benchmark case 1..4")->required();
  cmd_conv->add_option("--variant", conv.variant, "Case 2 domain: full|shifted");
  cmd_conv->add_option("--k", conv.k, "Polynomial degree 1..3")->required();
  cmd_conv->add_option("--beta", conv.betas, "Penalty exponents")->required()->delimiter(',');
  cmd_conv->add_option("--sizes", conv.sizes, "Halving sequence of mesh sizes")
      ->required()
      ->delimiter(',');
  cmd_conv->add_option("--out", conv.out, "Output directory");

  EstimatorOpts est;
  CLI::App* cmd_est = app.add_subcommand("estimator", "Multiplier field vs local error");
  cmd_est->add_option("--case", est.case_id, "Benchmark case 1..4")->required();
  cmd_est->add_option("--variant", est.variant, "Case 2 domain: full|shifted");
  cmd_est->add_option("--k", est.k, "Polynomial degree 1..3")->required();
  cmd_est->add_option("--beta", est.beta, "Penalty exponent")->required();
  cmd_est->add_option("--n", est.n, "Mesh subdivisions per side")->required();
  cmd_est->add_option("--out", est.out, "Output directory");

  cfo::TwoPhaseConfig tp;
  std::string tp_out = "out";
  std::string tp_perm_kind = "synthetic";
  CLI::App* cmd_tp = app.add_subcommand("twophase", "Incompressible two-phase displacement");
  cmd_tp->add_option("--n", tp.n, "Mesh subdivisions per side");
  cmd_tp->add_option("--k", tp.k, "Polynomial degree 1..3");
  cmd_tp->add_option("--beta", tp.beta, "Penalty exponent");
  cmd_tp->add_option("--tend", tp.t_end, "End time");
  cmd_tp->add_option("--snapshots", tp.snapshot_times, "Snapshot times")->delimiter(',');
  cmd_tp->add_option("--mu-w", tp.mu_w, "Water viscosity");
  cmd_tp->add_option("--mu-o", tp.mu_o, "Oil viscosity");
  cmd_tp->add_option("--initial-saturation", tp.initial_saturation, "Initial water saturation");
  cmd_tp->add_option("--pressure-stride", tp.pressure_stride,
                     "Transport steps per pressure solve");
  cmd_tp->add_option("--cfl", tp.cfl, "CFL safety factor");
  cmd_tp->add_option("--perm", tp_perm_kind, "Permeability source: synthetic|file");
  cmd_tp->add_option("--perm-file", tp.perm_file, "Log-permeability grid file");
  cmd_tp->add_option("--perm-nx", tp.perm_nx, "Synthetic grid cells in x");
  cmd_tp->add_option("--perm-ny", tp.perm_ny, "Synthetic grid cells in y");
  cmd_tp->add_option("--mean", tp.perm_mean, "Synthetic log-permeability mean");
  cmd_tp->add_option("--variance", tp.perm_variance, "Synthetic log-permeability variance");
  cmd_tp->add_option("--corrlen", tp.perm_corr_len, "Synthetic correlation length");
  cmd_tp->add_option("--seed", tp.seed, "Synthetic field seed");
  cmd_tp->add_option("--out", tp_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_dofs->parsed()) return run_dofs(dofs);
    if (cmd_solve->parsed()) return run_solve(solve);
    if (cmd_conv->parsed()) return run_converge(conv);
    if (cmd_est->parsed()) return run_estimator(est);
    if (cmd_tp->parsed()) {
      if (tp_perm_kind == "file") {
        if (tp.perm_file.empty())
          throw std::invalid_argument("twophase: --perm file requires --perm-file");
      } else if (tp_perm_kind == "synthetic") {
        tp.perm_file.clear();
      } else {
        throw std::invalid_argument("twophase: --perm must be 'synthetic' or 'file'");
      }
      return run_twophase(tp, tp_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cfo::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
