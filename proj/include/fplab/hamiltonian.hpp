#pragma once

// Hamiltonians H(p) with gradient and Hessian, evaluated pointwise and on fields.

#include <array>
#include <functional>
#include <string>

#include "fplab/grid.hpp"

namespace fplab {

enum class HamiltonianKind { Quadratic, PowerGamma, Custom };

using Hessian2 = std::array<double, 4>;  // row-major 2x2

class Hamiltonian {
 public:
  using ValueFn = std::function<double(const Point&)>;
  using GradientFn = std::function<Point(const Point&)>;
  using HessianFn = std::function<Hessian2(const Point&)>;

  /// |p|^2 / 2
  static Hamiltonian quadratic();
  /// (1 + |p|^2)^{gamma/2}, gamma > 1
  static Hamiltonian power(double gamma);
  /// Smooth user-supplied H; the Hessian is optional.
  static Hamiltonian custom(std::string name, ValueFn value, GradientFn gradient, HessianFn hessian = {});

  [[nodiscard]] HamiltonianKind kind() const { return kind_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] bool has_hessian() const { return static_cast<bool>(hessian_); }

  [[nodiscard]] double value(const Point& p) const { return value_(p); }
  [[nodiscard]] Point gradient(const Point& p) const { return gradient_(p); }
  /// Throws std::logic_error when no Hessian is available.
  [[nodiscard]] Hessian2 hessian(const Point& p) const;

  /// H(Du) at every node.
  [[nodiscard]] ScalarField apply(const VectorField& du) const;
  /// D_pH(Du) at every node.
  [[nodiscard]] VectorField apply_gradient(const VectorField& du) const;

 private:
  Hamiltonian() = default;
  HamiltonianKind kind_ = HamiltonianKind::Custom;
  double gamma_ = 2.0;
  std::string name_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
};

/// Point from the components of a vector field at node i (second entry 0 in 1D).
Point point_at(const VectorField& v, std::size_t i);

}  // namespace fplab
