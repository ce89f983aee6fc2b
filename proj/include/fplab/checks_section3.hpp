#pragma once

// L-infinity continuous dependence for viscous transport with a one-sided
// divergence bound c1/t + c2 that is not integrable at t = 0.

#include <vector>

#include "fplab/drift.hpp"
#include "fplab/grid.hpp"
#include "fplab/report.hpp"

namespace fplab {

struct OneSidedInputs {
  double c1 = 0.0;
  double c2 = 0.0;
  /// Sources, constant in time. Equal fields select the contraction bound.
  ScalarField f1;
  ScalarField f2;
};

struct OneSidedResult {
  /// Contraction bound when f1 = f2, else the exp(int F)(||g1-g2|| + 1) bound.
  EstimateReport main;
  /// Intermediate L^p displays for the positive and negative parts.
  std::vector<EstimateReport> p_chain;
  std::vector<double> p_values;
  /// ||w(T)||_p for p in p_values, then ||w(T)||_inf last.
  std::vector<double> p_norms;
  /// Nondecreasing in p and below ||w||_inf + 1e-8 at every recorded time.
  bool p_sequence_ok = false;
};

/// u1, u2 solve d_t u - eps Lap u - b.Du = f_i from sigma = u1.time(0) > 0.
OneSidedResult check_thm_one_sided(const Trajectory& u1, const Trajectory& u2, const OneSidedInputs& in,
                                   const std::vector<double>& chain_p = {4.0, 16.0});

/// {2, 4, 8, 16, 32}.
std::vector<double> default_p_sequence();

}  // namespace fplab
