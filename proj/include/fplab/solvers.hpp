#pragma once

// IMEX pseudospectral time steppers for the Fokker-Planck, transport-diffusion
// and viscous Hamilton-Jacobi equations on the torus.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fplab/drift.hpp"
#include "fplab/grid.hpp"
#include "fplab/hamiltonian.hpp"

namespace fplab {

enum class PDEKind {
  FokkerPlanck,                // d_t rho - eps Lap rho + div(b rho) = 0, initial data
  TransportDiffusion,          // d_t z - eps Lap z - b.Dz = f, initial data
  TransportDiffusionBackward,  // -d_t v - eps Lap v - b.Dv = f, terminal data
  HamiltonJacobi,              // -d_t u - eps Lap u + H(Du) = f, terminal data
};

enum class Scheme {
  ImexEuler,     // implicit Euler diffusion, explicit Euler transport at the step midpoint
  ImexMidpoint,  // implicit trapezoid diffusion, explicit midpoint transport
  ImexSsp3,      // Shu-Osher SSP-RK3 built from IMEX Euler stages
};

enum class TimeMeshKind { Uniform, Geometric };

std::string to_string(PDEKind kind);
std::string to_string(Scheme scheme);
PDEKind parse_pde_kind(const std::string& text);
Scheme parse_scheme(const std::string& text);

struct SolverConfig {
  double epsilon = 1.0;
  double dt = 1e-3;
  TimeMeshKind mesh = TimeMeshKind::Uniform;
  double t_start = 0.0;
  double t_end = 1.0;
  /// Ratio g of the geometric mesh t_k = t_start g^k.
  double geometric_ratio = 1.02;
  int record_every = 1;
  Scheme scheme = Scheme::ImexEuler;
  /// Advective CFL number: dt max|b| <= cfl h.
  double cfl = 0.5;
};

class CflViolation : public std::runtime_error {
 public:
  CflViolation(int step, double dt, double limit);
  [[nodiscard]] int step() const { return step_; }

 private:
  int step_;
};

class SolverBlowup : public NonFiniteError {
 public:
  explicit SolverBlowup(int step);
  [[nodiscard]] int step() const { return step_; }

 private:
  int step_;
};

/// Drift sampled on the solver grid at a physical time.
using DriftFn = std::function<VectorField(double)>;
/// Source sampled on the solver grid at a physical time.
using SourceFn = std::function<ScalarField(double)>;

DriftFn drift_fn(const DriftSpec& spec, const Grid& grid);
DriftFn zero_drift(const Grid& grid);
SourceFn constant_source(ScalarField f);

struct PdeCoefficients {
  DriftFn drift;                           // FP and transport kinds
  std::optional<Hamiltonian> hamiltonian;  // HJ
  SourceFn source;                         // optional; zero when empty
};

/// Physical mesh points t_0 < ... < t_K covering [t_start, t_end].
std::vector<double> time_mesh(const SolverConfig& cfg);

/// Data is the initial field for forward kinds and the terminal field for
/// backward kinds; it is projected onto the 2/3 band first. The returned
/// trajectory is in ascending physical time for every kind.
Trajectory solve(PDEKind kind, const PdeCoefficients& coeffs, const ScalarField& data, const SolverConfig& cfg);

Trajectory solve_fokker_planck(const DriftFn& drift, const ScalarField& rho0, const SolverConfig& cfg);
Trajectory solve_transport(const DriftFn& drift, const ScalarField& z0, const SourceFn& f, const SolverConfig& cfg);
Trajectory solve_transport_backward(const DriftFn& drift, const ScalarField& v_end, const SourceFn& f,
                                    const SolverConfig& cfg);
Trajectory solve_hamilton_jacobi(const Hamiltonian& h, const ScalarField& u_end, const SourceFn& f,
                                 const SolverConfig& cfg);

/// Sup-norm PDE residual at each interior snapshot, with centred time
/// differences. Needs at least three snapshots.
TimeSeries residual(PDEKind kind, const Trajectory& traj, const PdeCoefficients& coeffs, double epsilon);

}  // namespace fplab
