#pragma once

// Energy-method estimates for the Fokker-Planck equation with div b in a
// mixed Lebesgue class, and the dual transport-diffusion bound.

#include <vector>

#include "fplab/drift.hpp"
#include "fplab/grid.hpp"
#include "fplab/report.hpp"
#include "fplab/solvers.hpp"

namespace fplab {

struct GronwallConstants {
  double c1 = 1.0;
  double c2 = 0.0;
  /// X = int [(1-theta) C_S m^{1/(1-theta)} + C_S m] dt.
  double integrand_integral = 0.0;
  /// (X C1^2)/(1-theta), without the initial-energy term.
  double c2_without_initial = 0.0;
  /// C1 with the Young constant (1-theta)(C_S m)^{1/(1-theta)}.
  double c1_young = 1.0;
};

/// Constants of the L2 stability estimate from the series t -> ||div b(t)||_q.
/// Throws std::domain_error when the integrand is not integrable.
GronwallConstants gronwall_constant_L2(const TimeSeries& divb_qnorm, double c_s, double theta);

/// ||div b(t)||_q at the given times from the drift's closed form; zero for
/// divergence-free drifts. A singular sample at t = 0 carries leading_power.
TimeSeries divergence_norm_series(const DriftSpec& drift, const std::vector<double>& times);

/// Exponent q used for the GN step: the drift's tag, or q = n when div b = 0.
Exponent stability_exponent(const DriftSpec& drift, int dim);

/// Factor C(p) in sup_t ||rho(t)||_p <= C(p) ||rho_0||_p. For p >= 2 it is
/// exp(G/p), G = int [m^{1/(1-theta)} + C_S m]; for 1 < p < 2 it interpolates
/// between L1 contraction and p = 2.
double main2_constant(const TimeSeries& divb_qnorm, double c_s, double theta, double p);

/// Two reports: sup_t ||rho||_2 <= C1 ||rho_0||_2 and int int |D rho|^2 <= C2 ||rho_0||_2^2.
/// Requires epsilon = 1 and a drift tagged divb_LrLq or divergence-free.
std::vector<EstimateReport> check_thm_stability(const Trajectory& rho, const DriftSpec& drift, double epsilon);

/// sup_t ||rho(t)||_p <= C(p) ||rho_0||_p for a nonnegative run.
EstimateReport check_thm_main2(const Trajectory& rho, const DriftSpec& drift, double epsilon, double p);

/// Backward transport run v with terminal datum v(T) and a source that is
/// constant in time: sup_t ||v(t)||_p - C(p') (||v_T||_p + (T-t)||f||_p) <= 0.
EstimateReport check_cor_dual(const Trajectory& v, const ScalarField& source, const DriftSpec& drift,
                              double epsilon, double p);

}  // namespace fplab
