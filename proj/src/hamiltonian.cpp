#include "fplab/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace fplab {

Hamiltonian Hamiltonian::quadratic() {
  Hamiltonian h;
  h.kind_ = HamiltonianKind::Quadratic;
  h.name_ = "quadratic";
  h.value_ = [](const Point& p) { return 0.5 * (p[0] * p[0] + p[1] * p[1]); };
  h.gradient_ = [](const Point& p) { return p; };
  h.hessian_ = [](const Point&) { return Hessian2{1.0, 0.0, 0.0, 1.0}; };
  return h;
}

Hamiltonian Hamiltonian::power(double gamma) {
  if (!(gamma > 1.0)) throw std::invalid_argument("Hamiltonian::power: gamma must exceed 1");
  Hamiltonian h;
  h.kind_ = HamiltonianKind::PowerGamma;
  h.gamma_ = gamma;
  h.name_ = "power_gamma";
  h.value_ = [gamma](const Point& p) { return std::pow(1.0 + p[0] * p[0] + p[1] * p[1], 0.5 * gamma); };
  h.gradient_ = [gamma](const Point& p) {
    const double s = gamma * std::pow(1.0 + p[0] * p[0] + p[1] * p[1], 0.5 * gamma - 1.0);
    return Point{s * p[0], s * p[1]};
  };
  h.hessian_ = [gamma](const Point& p) {
    const double m = 1.0 + p[0] * p[0] + p[1] * p[1];
    const double a = gamma * std::pow(m, 0.5 * gamma - 1.0);
    const double c = gamma * (gamma - 2.0) * std::pow(m, 0.5 * gamma - 2.0);
    return Hessian2{a + c * p[0] * p[0], c * p[0] * p[1], c * p[0] * p[1], a + c * p[1] * p[1]};
  };
  return h;
}

Hamiltonian Hamiltonian::custom(std::string name, ValueFn value, GradientFn gradient, HessianFn hessian) {
  if (!value || !gradient) throw std::invalid_argument("Hamiltonian::custom: value and gradient are required");
  Hamiltonian h;
  h.kind_ = HamiltonianKind::Custom;
  h.name_ = std::move(name);
  h.value_ = std::move(value);
  h.gradient_ = std::move(gradient);
  h.hessian_ = std::move(hessian);
  return h;
}

Hessian2 Hamiltonian::hessian(const Point& p) const {
  if (!hessian_) throw std::logic_error("Hamiltonian '" + name_ + "' has no Hessian");
  return hessian_(p);
}

Point point_at(const VectorField& v, std::size_t i) {
  return {v[0][i], v.size() > 1 ? v[1][i] : 0.0};
}

ScalarField Hamiltonian::apply(const VectorField& du) const {
  ScalarField out(du.front().grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value_(point_at(du, i));
  return out;
}

VectorField Hamiltonian::apply_gradient(const VectorField& du) const {
  VectorField out(du.size(), ScalarField(du.front().grid()));
  for (std::size_t i = 0; i < out.front().size(); ++i) {
    const Point g = gradient_(point_at(du, i));
    for (std::size_t c = 0; c < du.size(); ++c) out[c][i] = g[c];
  }
  return out;
}

}  // namespace fplab
