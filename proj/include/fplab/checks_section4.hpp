#pragma once

// Continuous dependence for viscous Hamilton-Jacobi equations via the
// adjoint Fokker-Planck problem along the linearized drift.

#include <vector>

#include "fplab/adjoint_pair.hpp"
#include "fplab/hamiltonian.hpp"
#include "fplab/report.hpp"

namespace fplab {

/// t -> ||P(f1 - f2)(t)||_p on the times of w.
TimeSeries source_difference_series(const Trajectory& w, const HjData& first, const HjData& second, double p);

/// sup_t ||w||_inf <= ||P(g1-g2)||_inf + int ||f1-f2||_inf. Records the dual
/// mass deviation and the relative duality defect. Throws std::runtime_error
/// when max|b| over the run exceeds `max_drift`.
EstimateReport check_thm_hjlip(const AdjointPairResult& res, const HjData& first, const HjData& second,
                               double max_drift = 1e3);

struct SemiconcaveBound {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Hypothesis: max eig D2 u_i(t) <= c1/(T-t) + c2. Then -div b <= n Lambda (c1/(T-t) + c2)^+
/// and the L-infinity conclusion (contraction, or exp(int F)(||g1-g2|| + 1)).
EstimateReport check_thm_semiconcave(const AdjointPairResult& res, const HjData& first, const HjData& second,
                                     const Hamiltonian& h, const SemiconcaveBound& bound);

/// H = (1+|p|^2)^{gamma/2}. Hypothesis: max_x Lap u_i <= laplacian_bound. Checks -div b <= K
/// with K from the branch formulas, then the L-infinity conclusion.
EstimateReport check_thm_superquadratic(const AdjointPairResult& res, const HjData& first, const HjData& second,
                                        const Hamiltonian& h, double laplacian_bound);

/// Branch constant K bounding -div b, given sup Lap u_i <= c and |Du_i| <= lipschitz.
double superquadratic_divergence_bound(double gamma, double c, double lipschitz);

struct GradientResult {
  /// sup_t ||Dw(t)||_2^2 <= ||Lap w||_{L1(Q_T)} (||g1-g2||_inf + int ||F||_inf).
  EstimateReport literal;
  /// Same with sup_t ||Lap w(t)||_1 in place of the space-time L1 norm.
  EstimateReport sup_time;
  /// max_t ||Dw(t)||_2^2 / (||w(t)||_inf ||Lap w(t)||_1) <= 1, over levels with
  /// ||w(t)||_inf above 1e-8 of its maximum.
  EstimateReport pointwise;
  /// max_t | ||Dw||^2 + <w, Lap w> | / max(1, ||Dw||^2).
  double ibp_defect = 0.0;
};

GradientResult check_cor_gradient(const AdjointPairResult& res, const HjData& first, const HjData& second);

/// w / sqrt(w^2 + delta^2).
ScalarField smoothed_sign(const ScalarField& w, double delta);

struct L1Result {
  /// sup over levels tau of ||w(tau)||_1 - exp(int_tau^T K)(||g1-g2||_1 + ||F||_{L1(Q_tau)}).
  EstimateReport main;
  /// sup_t ||rho(t)||_inf <= exp(int K) ||rho(tau)||_inf for the dual run.
  EstimateReport dual_bound;
  double delta = 0.0;
  /// delta * volume, the bound on ||w(tau)||_1 - <w(tau), sgn_delta(w(tau))>.
  double delta_error = 0.0;
  /// The measured value of that gap.
  double measured_gap = 0.0;
};

/// `res` must come from a dual run started at rho(tau) = sgn_delta(w(tau)).
L1Result check_thm_L1(const AdjointPairResult& res, const HjData& first, const HjData& second, double delta);

enum class DualityMode { DivLrLq, AronsonSerrin };

struct DualityOptions {
  /// GN exponent q for div_LrLq; the Q of the Aronson-Serrin range is 2q.
  Exponent q = Exponent(2);
  int theta_nodes = 0;
};

/// ||w(t)||_p <= C (||g1-g2||_p + int_t^T ||f1-f2||_p) with C the dual L^{p'} constant.
EstimateReport check_thm_ii_and_iii(const AdjointPairResult& res, const HjData& first, const HjData& second,
                                    const Hamiltonian& h, double epsilon, DualityMode mode, double p,
                                    const DualityOptions& opts = {});

}  // namespace fplab
