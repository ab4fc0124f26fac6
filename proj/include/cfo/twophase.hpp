#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "cfo/analysis.hpp"

namespace cfo {

// Cell-centered log-permeability raster stretched over the flow domain;
// elements look up their cell by centroid.
struct PermeabilityField {
  int nx = 1, ny = 1;
  std::vector<double> log_kappa;  // row-major, index j*nx + i

  double kappa(const Vec2& x, const Rect& domain) const;
  double log_min() const;
  double log_max() const;
};

// Text format: "nx ny" header, then ny rows of nx log-permeability values
// (bottom row first). Throws std::invalid_argument on malformed input.
PermeabilityField load_permeability(std::istream& in);

// Log-normal field: white noise smoothed by a separable Gaussian kernel of
// width `corr_len` (fraction of the domain), rescaled to the requested mean
// and variance of log kappa. Deterministic for a fixed seed; variance 0
// yields the constant field exp(mean).
PermeabilityField synthetic_permeability(int nx, int ny, double mean,
                                         double variance, double corr_len,
                                         std::uint64_t seed);

// Quadratic relative-permeability (Corey) model: total mobility
// lam(S) = S^2/mu_w + (1-S)^2/mu_o and water fractional flow
// f(S) = (S^2/mu_w) / lam(S), monotone increasing on [0,1].
struct CoreyModel {
  double mu_w = 1.0;
  double mu_o = 1.0;

  double mobility(double s) const;
  double frac_flow(double s) const;
  double dfrac_flow(double s) const;
  // max |f'| on [0,1], evaluated numerically on a fine sample.
  double max_wave_speed() const;
};

struct TwoPhaseState {
  double time = 0.0;
  Eigen::VectorXd saturation;  // per element
  Eigen::VectorXd pressure;    // scalar dofs, full length
  Eigen::VectorXd q;           // edge flux modes
  Eigen::VectorXd lambda;
};

// Pressure boundary conditions for left-to-right displacement: p = 1 on
// x = x0, p = 0 on x = x1 (nodal), zero prescribed flux modes on the top and
// bottom boundary edges.
EssentialBc twophase_bc(const TriMesh& mesh, const DofLayout& layout);

// Assembles and solves the pressure system with coefficient
// mobility(S_T) * kappa(T) * I and no source; fills pressure, q, lambda.
void pressure_step(const TriMesh& mesh, const DofLayout& layout,
                   const PermeabilityField& perm, const CoreyModel& corey,
                   double beta, TwoPhaseState& state);

// int_e q ds per edge (constant mode times length for the Legendre basis).
Eigen::VectorXd edge_flux_integrals(const TriMesh& mesh, const DofLayout& layout,
                                    const Eigen::VectorXd& q);

// Largest admissible explicit step
//   factor * min_T |T| / (Lf * sum_{e in dT} |int_e q|).
double cfl_dt(const TriMesh& mesh, const Eigen::VectorXd& flux_integrals,
              const CoreyModel& corey, double factor);

struct TransportStats {
  double mass_change = 0.0;     // sum_T |T| (S_new - S_old)
  double boundary_inflow = 0.0; // dt-integrated flux of water entering
  double boundary_outflow = 0.0;
  double balance_error = 0.0;   // |mass_change - inflow + outflow|
};

// One explicit upwind step S_T -= dt/|T| sum_e sigma (int_e q) f(S_upwind).
// Upstream values at boundary edges come from the inflow reservoir (S = 1)
// on x = x0, S = 0 elsewhere. Throws CflError when dt exceeds the limit.
TransportStats transport_step(const TriMesh& mesh, const DofLayout& layout,
                              const CoreyModel& corey,
                              const Eigen::VectorXd& flux_integrals, double dt,
                              double cfl_factor, Eigen::VectorXd& saturation);

struct TwoPhaseConfig {
  int n = 32;
  int k = 1;
  double beta = 1.0;
  double t_end = 0.02;
  std::vector<double> snapshot_times;
  double mu_w = 1.0;
  double mu_o = 1.0;
  double initial_saturation = 0.0;
  int pressure_stride = 1;  // transport steps per pressure solve
  double cfl = 0.9;
  // Permeability source: file wins when set, otherwise synthetic.
  std::string perm_file;
  int perm_nx = 32, perm_ny = 32;
  double perm_mean = 3.5;
  double perm_variance = 3.4;
  double perm_corr_len = 0.05;
  std::uint64_t seed = 1;
};

PermeabilityField permeability_from_config(const TwoPhaseConfig& cfg);

struct Snapshot {
  double t;
  Eigen::VectorXd saturation;
};

struct SimulationResult {
  TwoPhaseState state;
  std::vector<Snapshot> snapshots;
  int steps = 0;
  double max_balance_error = 0.0;
  double min_saturation = 0.0;
  double max_saturation = 0.0;
  double total_injected = 0.0;  // time-integrated inflow - outflow
};

SimulationResult run_simulation(const TriMesh& mesh, const DofLayout& layout,
                                const TwoPhaseConfig& cfg);

// "t" header then one "tri_id S" row per element.
void write_snapshot(std::ostream& os, const Snapshot& snap);

}  // namespace cfo
