#pragma once

// Two HJ solutions, their difference, and the exact discrete adjoint
// Fokker-Planck run along the linearized drift.

#include <functional>

#include "fplab/grid.hpp"
#include "fplab/hamiltonian.hpp"
#include "fplab/linearized_drift.hpp"
#include "fplab/solvers.hpp"

namespace fplab {

struct HjData {
  ScalarField terminal;
  SourceFn source;  // empty means zero
};

struct AdjointPairConfig {
  SolverConfig solver;  // uniform mesh; scheme and record_every are overridden
  double tau = 0.0;     // start of the dual run, a mesh time
  int theta_nodes = 0;  // 0 selects default_theta_nodes
};

struct AdjointPairResult {
  Trajectory u1;
  Trajectory u2;
  Trajectory w;    // u1 - u2 on every mesh level
  Trajectory rho;  // dual density on [tau, T]
  /// P(t) = <w(t), rho(t)> on the dual mesh.
  TimeSeries pairing;
  /// S(t) = sum over dual steps from t to T of dt <f1 - f2, S rho>, aligned with pairing.
  std::vector<double> source_pairing;
  /// Mass of rho at each dual mesh time.
  TimeSeries mass;
  /// max over levels of |P(t) - P(T) - S(t)|.
  double identity_defect = 0.0;
  /// Scale of the terms entering the identity.
  double identity_scale = 0.0;
  /// max over levels and nodes of |b|.
  double max_drift = 0.0;
  /// max_x of -div b = int Tr(D2_pH D2 u_theta) at each level, ascending time.
  TimeSeries max_minus_divergence;
};

/// Solves both HJ problems with IMEX Euler, then the forward dual problem
///   rho_{k+1} = P(S rho_k + dt div(bt_{k+1} S rho_k)),  bt = int D_pH(Du_theta),
/// which is the exact adjoint of the difference scheme for w.
AdjointPairResult solve_adjoint_pair(const Hamiltonian& h, const HjData& first, const HjData& second,
                                     const ScalarField& rho_tau, const AdjointPairConfig& cfg);

/// Dual datum built from w(tau), e.g. a smoothed sign.
using DualDatumFn = std::function<ScalarField(const ScalarField& w_tau)>;

AdjointPairResult solve_adjoint_pair(const Hamiltonian& h, const HjData& first, const HjData& second,
                                     const DualDatumFn& dual_datum, const AdjointPairConfig& cfg);

}  // namespace fplab
