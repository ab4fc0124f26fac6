#include "cfo/twophase.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "cfo/solver.hpp"

namespace cfo {

namespace {

double clamp01(double s) { return std::clamp(s, 0.0, 1.0); }

}  // namespace

double PermeabilityField::kappa(const Vec2& x, const Rect& domain) const {
  int i = static_cast<int>((x.x() - domain.x0) / domain.width() * nx);
  int j = static_cast<int>((x.y() - domain.y0) / domain.height() * ny);
  i = std::clamp(i, 0, nx - 1);
  j = std::clamp(j, 0, ny - 1);
  return std::exp(log_kappa[static_cast<std::size_t>(j) * nx + i]);
}

double PermeabilityField::log_min() const {
  return *std::min_element(log_kappa.begin(), log_kappa.end());
}

double PermeabilityField::log_max() const {
  return *std::max_element(log_kappa.begin(), log_kappa.end());
}

PermeabilityField load_permeability(std::istream& in) {
  PermeabilityField field;
  if (!(in >> field.nx >> field.ny) || field.nx < 1 || field.ny < 1)
    throw std::invalid_argument("permeability: bad grid header");
  field.log_kappa.resize(static_cast<std::size_t>(field.nx) * field.ny);
  for (auto& v : field.log_kappa)
    if (!(in >> v)) throw std::invalid_argument("permeability: too few values");
  double extra;
  if (in >> extra) throw std::invalid_argument("permeability: trailing values");
  return field;
}

PermeabilityField synthetic_permeability(int nx, int ny, double mean,
                                         double variance, double corr_len,
                                         std::uint64_t seed) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("synthetic_permeability: bad grid");
  if (variance < 0.0) throw std::invalid_argument("synthetic_permeability: negative variance");

  PermeabilityField field;
  field.nx = nx;
  field.ny = ny;
  field.log_kappa.assign(static_cast<std::size_t>(nx) * ny, mean);
  if (variance == 0.0 || static_cast<std::size_t>(nx) * ny < 2) return field;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(field.log_kappa.size());
  for (auto& v : noise) v = gauss(rng);

  // Separable Gaussian smoothing, kernel width in cells, reflected at the
  // boundary; establishes the correlation length before rescaling.
  const double sigma = std::max(corr_len, 0.0) * std::max(nx, ny);
  std::vector<double> kernel;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  for (int r = -radius; r <= radius; ++r)
    kernel.push_back(sigma > 0 ? std::exp(-0.5 * r * r / (sigma * sigma)) : (r == 0));
  const double ksum = std::accumulate(kernel.begin(), kernel.end(), 0.0);
  for (auto& v : kernel) v /= ksum;

  auto reflect = [](int i, int n) {
    while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
    return i;
  };
  std::vector<double> tmp(noise.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double acc = 0.0;
      for (int r = -radius; r <= radius; ++r)
        acc += kernel[r + radius] * noise[static_cast<std::size_t>(j) * nx + reflect(i + r, nx)];
      tmp[static_cast<std::size_t>(j) * nx + i] = acc;
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double acc = 0.0;
      for (int r = -radius; r <= radius; ++r)
        acc += kernel[r + radius] * tmp[static_cast<std::size_t>(reflect(j + r, ny)) * nx + i];
      noise[static_cast<std::size_t>(j) * nx + i] = acc;
    }

  const double n = static_cast<double>(noise.size());
  const double m = std::accumulate(noise.begin(), noise.end(), 0.0) / n;
  double var = 0.0;
  for (double v : noise) var += (v - m) * (v - m);
  var /= n;
  const double scale = var > 0 ? std::sqrt(variance / var) : 0.0;
  for (std::size_t i = 0; i < noise.size(); ++i)
    field.log_kappa[i] = mean + scale * (noise[i] - m);
  return field;
}

double CoreyModel::mobility(double s) const {
  s = clamp01(s);
  return s * s / mu_w + (1.0 - s) * (1.0 - s) / mu_o;
}

double CoreyModel::frac_flow(double s) const {
  s = clamp01(s);
  return (s * s / mu_w) / mobility(s);
}

double CoreyModel::dfrac_flow(double s) const {
  s = clamp01(s);
  const double a = s * s / mu_w;
  const double b = (1.0 - s) * (1.0 - s) / mu_o;
  const double da = 2.0 * s / mu_w;
  const double db = -2.0 * (1.0 - s) / mu_o;
  const double lam = a + b;
  return (da * b - a * db) / (lam * lam);
}

double CoreyModel::max_wave_speed() const {
  double m = 0.0;
  const int samples = 2048;
  for (int i = 0; i <= samples; ++i)
    m = std::max(m, std::abs(dfrac_flow(double(i) / samples)));
  return m;
}

EssentialBc twophase_bc(const TriMesh& mesh, const DofLayout& layout) {
  const Rect& box = mesh.bounding_box();
  const double tol = 1e-10 * std::max(box.width(), box.height());
  EssentialBc bc;
  for (int dof : layout.boundary_s_dofs()) {
    const Vec2& x = layout.s_node_position(dof);
    if (std::abs(x.x() - box.x0) < tol) {
      bc.dofs.push_back(layout.u_index(dof));
      bc.values.push_back(1.0);
    } else if (std::abs(x.x() - box.x1) < tol) {
      bc.dofs.push_back(layout.u_index(dof));
      bc.values.push_back(0.0);
    }
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const EdgeInfo& ed = mesh.edge(e);
    if (!ed.boundary) continue;
    const double y0 = mesh.vertex(ed.v0).y();
    const double y1 = mesh.vertex(ed.v1).y();
    const bool bottom = std::abs(y0 - box.y0) < tol && std::abs(y1 - box.y0) < tol;
    const bool top = std::abs(y0 - box.y1) < tol && std::abs(y1 - box.y1) < tol;
    if (bottom || top) {
      for (int m = 0; m < layout.k(); ++m) {
        bc.dofs.push_back(layout.q_index(layout.q_dof(e, m)));
        bc.values.push_back(0.0);
      }
    }
  }
  return bc;
}

void pressure_step(const TriMesh& mesh, const DofLayout& layout,
                   const PermeabilityField& perm, const CoreyModel& corey,
                   double beta, TwoPhaseState& state) {
  const Rect& box = mesh.bounding_box();
  const Eigen::VectorXd& sat = state.saturation;
  ElementCoefficient coeff;
  coeff.alpha = [&](int t, const Vec2&) {
    const double m = corey.mobility(sat[t]) * perm.kappa(mesh.triangle(t).centroid, box);
    return (m * Mat2::Identity()).eval();
  };
  coeff.source = [](int, const Vec2&) { return 0.0; };

  SaddleSystem sys = assemble_cfo(mesh, layout, coeff, beta, twophase_bc(mesh, layout));
  Eigen::VectorXd full = sys.expand(solve_symmetric_indefinite(sys.matrix, sys.rhs));
  state.pressure = full.segment(0, layout.n_u());
  state.q = full.segment(layout.n_u(), layout.n_q());
  state.lambda = full.tail(layout.n_lambda());
}

Eigen::VectorXd edge_flux_integrals(const TriMesh& mesh, const DofLayout& layout,
                                    const Eigen::VectorXd& q) {
  EdgeBasis basis(layout.k() - 1);
  Eigen::VectorXd flux(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    double acc = 0.0;
    for (int m = 0; m < basis.size(); ++m)
      acc += q[layout.q_dof(e, m)] * basis.integral(m) * mesh.edge(e).length;
    flux[e] = acc;
  }
  return flux;
}

double cfl_dt(const TriMesh& mesh, const Eigen::VectorXd& flux_integrals,
              const CoreyModel& corey, double factor) {
  const double lf = corey.max_wave_speed();
  double dt = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleInfo& tri = mesh.triangle(t);
    double total = 0.0;
    for (int l = 0; l < 3; ++l) total += std::abs(flux_integrals[tri.edge[l]]);
    if (total > 0.0) dt = std::min(dt, factor * tri.area / (lf * total));
  }
  return dt;
}

TransportStats transport_step(const TriMesh& mesh, const DofLayout& layout,
                              const CoreyModel& corey,
                              const Eigen::VectorXd& flux_integrals, double dt,
                              double cfl_factor, Eigen::VectorXd& saturation) {
  if (dt <= 0.0) throw std::invalid_argument("transport_step: dt must be positive");
  const double limit = cfl_dt(mesh, flux_integrals, corey, cfl_factor);
  if (dt > limit * (1.0 + 1e-12))
    throw CflError("transport_step: dt " + std::to_string(dt) +
                       " exceeds stability limit, use dt <= " + std::to_string(limit),
                   limit);

  const Rect& box = mesh.bounding_box();
  const double tol = 1e-10 * std::max(box.width(), box.height());

  const Eigen::VectorXd old = saturation;
  TransportStats stats;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const EdgeInfo& ed = mesh.edge(e);
    const double qint = flux_integrals[e];
    if (qint == 0.0) continue;

    const int t0 = ed.tri[0];
    double sigma0 = 0.0;
    for (int l = 0; l < 3; ++l)
      if (mesh.triangle(t0).edge[l] == e) sigma0 = mesh.triangle(t0).sigma[l];

    double upwind;
    if (ed.boundary) {
      if (sigma0 * qint > 0.0) {
        upwind = old[t0];  // water leaves the domain
      } else {
        const bool inflow = std::abs(mesh.vertex(ed.v0).x() - box.x0) < tol &&
                            std::abs(mesh.vertex(ed.v1).x() - box.x0) < tol;
        upwind = inflow ? 1.0 : 0.0;
      }
    } else {
      // The donor element is the one the water leaves through this edge.
      upwind = sigma0 * qint > 0.0 ? old[t0] : old[ed.tri[1]];
    }

    const double water_flux = qint * corey.frac_flow(upwind);
    saturation[t0] -= dt / mesh.triangle(t0).area * sigma0 * water_flux;
    if (ed.boundary) {
      const double out = dt * sigma0 * water_flux;
      if (out >= 0.0)
        stats.boundary_outflow += out;
      else
        stats.boundary_inflow -= out;
    } else {
      saturation[ed.tri[1]] += dt / mesh.triangle(ed.tri[1]).area * sigma0 * water_flux;
    }
  }

  for (int t = 0; t < mesh.num_triangles(); ++t)
    stats.mass_change += mesh.triangle(t).area * (saturation[t] - old[t]);
  stats.balance_error =
      std::abs(stats.mass_change - stats.boundary_inflow + stats.boundary_outflow);
  return stats;
}

PermeabilityField permeability_from_config(const TwoPhaseConfig& cfg) {
  if (!cfg.perm_file.empty()) {
    std::ifstream in(cfg.perm_file);
    if (!in) throw std::invalid_argument("cannot open permeability file " + cfg.perm_file);
    return load_permeability(in);
  }
  return synthetic_permeability(cfg.perm_nx, cfg.perm_ny, cfg.perm_mean,
                                cfg.perm_variance, cfg.perm_corr_len, cfg.seed);
}

SimulationResult run_simulation(const TriMesh& mesh, const DofLayout& layout,
                                const TwoPhaseConfig& cfg) {
  if (cfg.t_end <= 0.0) throw std::invalid_argument("run_simulation: t_end must be positive");
  if (cfg.pressure_stride < 1)
    throw std::invalid_argument("run_simulation: pressure_stride must be >= 1");
  if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0)
    throw std::invalid_argument("run_simulation: cfl must be in (0, 1]");

  const PermeabilityField perm = permeability_from_config(cfg);
  const CoreyModel corey{cfg.mu_w, cfg.mu_o};

  SimulationResult result;
  TwoPhaseState& state = result.state;
  state.saturation = Eigen::VectorXd::Constant(mesh.num_triangles(), cfg.initial_saturation);
  result.min_saturation = result.max_saturation = cfg.initial_saturation;

  std::vector<double> events = cfg.snapshot_times;
  events.push_back(cfg.t_end);
  std::sort(events.begin(), events.end());
  std::size_t next_event = 0;

  Eigen::VectorXd flux;
  int steps_since_pressure = cfg.pressure_stride;  // force a solve first
  while (state.time < cfg.t_end * (1.0 - 1e-12)) {
    if (steps_since_pressure >= cfg.pressure_stride) {
      pressure_step(mesh, layout, perm, corey, cfg.beta, state);
      flux = edge_flux_integrals(mesh, layout, state.q);
      steps_since_pressure = 0;
    }

    double dt = cfl_dt(mesh, flux, corey, cfg.cfl);
    if (!std::isfinite(dt)) throw NumericError("run_simulation: zero flux field, no stable dt");
    while (next_event < events.size() && events[next_event] <= state.time * (1.0 + 1e-12))
      ++next_event;
    if (next_event < events.size()) dt = std::min(dt, events[next_event] - state.time);

    TransportStats stats =
        transport_step(mesh, layout, corey, flux, dt, cfg.cfl, state.saturation);
    state.time += dt;
    ++result.steps;
    ++steps_since_pressure;

    result.max_balance_error = std::max(result.max_balance_error, stats.balance_error);
    result.total_injected += stats.boundary_inflow - stats.boundary_outflow;
    result.min_saturation = std::min(result.min_saturation, state.saturation.minCoeff());
    result.max_saturation = std::max(result.max_saturation, state.saturation.maxCoeff());

    for (double ts : cfg.snapshot_times)
      if (std::abs(state.time - ts) <= 1e-12 * std::max(1.0, ts))
        result.snapshots.push_back({state.time, state.saturation});
  }
  return result;
}

void write_snapshot(std::ostream& os, const Snapshot& snap) {
  os << fmt_sci(snap.t) << "\n";
  for (int t = 0; t < snap.saturation.size(); ++t)
    os << t << " " << fmt_sci(snap.saturation[t]) << "\n";
}

}  // namespace cfo
