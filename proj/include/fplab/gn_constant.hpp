#pragma once

// Discrete Gagliardo-Nirenberg-Ladyzhenskaya constant on a periodic grid.

#include <cstdint>
#include <random>

#include "fplab/exponents.hpp"
#include "fplab/grid.hpp"

namespace fplab {

struct GNConstant {
  double value = 0.0;       // best ratio times the safety factor
  double best_ratio = 0.0;  // largest ratio found by the ascent
  double theta = 0.0;
  double exponent = 0.0;    // 2q', possibly +inf
  int restarts = 0;
  bool all_ascents_stationary = false;  // informational; the constant field is always included
  int validation_samples = 0;
  int validation_violations = 0;
};

/// ||f||_{2q'}^2 / (||Df||_2^{2 theta} ||f||_2^{2(1-theta)} + ||f||_2^2).
double gn_ratio(const ScalarField& f, const Exponent& q);

/// Maximizes gn_ratio over fields without Nyquist content by normalized
/// gradient ascent from `restarts` random starts, then inflates by 5% and
/// validates on fresh random fields. Results are memoized per (dim, N, q).
/// Throws InadmissibleExponent when gn_from_q rejects q.
const GNConstant& discrete_gn_constant(const Grid& grid, const Exponent& q);

/// Uncached variant with explicit search parameters.
GNConstant compute_gn_constant(const Grid& grid, const Exponent& q, int restarts, int validation_samples,
                               std::uint64_t seed);

/// Random field with Gaussian spectrum of random width, or a random bump.
ScalarField random_trial_field(const Grid& grid, std::mt19937_64& rng);

}  // namespace fplab
