#pragma once

// Drift of the equation satisfied by the difference of two HJ solutions:
// b = -int_0^1 D_pH(theta Du1 + (1-theta) Du2) dtheta.

#include <memory>
#include <vector>

#include "fplab/grid.hpp"
#include "fplab/hamiltonian.hpp"

namespace fplab {

struct QuadratureRule {
  std::vector<double> nodes;    // in [0,1]
  std::vector<double> weights;  // sum to 1
};

/// Gauss-Legendre rule on [0,1]; supported sizes 1..16 and 32.
QuadratureRule gauss_legendre(int points);

/// Default node count: 1 for quadratic H (exact), 8 otherwise.
int default_theta_nodes(const Hamiltonian& h);

/// int_0^1 D_pH(theta a + (1-theta) c) dtheta (without the minus sign).
VectorField averaged_hamiltonian_gradient(const Hamiltonian& h, const VectorField& du1, const VectorField& du2,
                                          const QuadratureRule& rule);

/// int_0^1 Tr(D2_pH(Du_theta) D2u_theta) dtheta, i.e. -div b for x-independent H.
ScalarField averaged_trace_term(const Hamiltonian& h, const ScalarField& u1, const ScalarField& u2,
                                const QuadratureRule& rule);

class LinearizedDrift {
 public:
  /// u1 and u2 must share grid and sample times.
  LinearizedDrift(Trajectory u1, Trajectory u2, Hamiltonian h, int theta_nodes = 0);

  [[nodiscard]] const QuadratureRule& rule() const { return rule_; }
  [[nodiscard]] const Hamiltonian& hamiltonian() const { return h_; }
  [[nodiscard]] const Trajectory& u1() const { return *u1_; }
  [[nodiscard]] const Trajectory& u2() const { return *u2_; }

  /// b(t); between samples the u_i are interpolated linearly in time.
  /// Throws std::out_of_range outside the sampled interval.
  [[nodiscard]] VectorField eval(double t) const;
  /// -div b(t) by the trace formula. Throws std::logic_error without a Hessian.
  [[nodiscard]] ScalarField minus_divergence(double t) const;
  /// -div b(t) by spectral differentiation of eval(t).
  [[nodiscard]] ScalarField minus_divergence_spectral(double t) const;

 private:
  [[nodiscard]] std::pair<ScalarField, ScalarField> fields_at(double t) const;

  std::shared_ptr<const Trajectory> u1_;
  std::shared_ptr<const Trajectory> u2_;
  Hamiltonian h_;
  QuadratureRule rule_;
};

}  // namespace fplab
