#include "fplab/linearized_drift.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <stdexcept>

namespace fplab {

namespace {

template <unsigned N>
QuadratureRule rule_from_boost() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  QuadratureRule r;
  // boost stores the nonnegative half; for odd N the first abscissa is 0
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool centre = (N % 2 == 1) && i == 0;
    r.nodes.push_back(0.5 * (1.0 + x[i]));
    r.weights.push_back(0.5 * w[i]);
    if (!centre) {
      r.nodes.push_back(0.5 * (1.0 - x[i]));
      r.weights.push_back(0.5 * w[i]);
    }
  }
  return r;
}

template <unsigned... Ns>
QuadratureRule dispatch(int points, std::integer_sequence<unsigned, Ns...>) {
  QuadratureRule out;
  const bool found = ((points == static_cast<int>(Ns) ? (out = rule_from_boost<Ns>(), true) : false) || ...);
  if (!found) throw std::invalid_argument("gauss_legendre: unsupported node count " + std::to_string(points));
  return out;
}

}  // namespace

QuadratureRule gauss_legendre(int points) {
  if (points == 1) return {{0.5}, {1.0}};
  return dispatch(points, std::integer_sequence<unsigned, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 32>{});
}

int default_theta_nodes(const Hamiltonian& h) { return h.kind() == HamiltonianKind::Quadratic ? 1 : 8; }

VectorField averaged_hamiltonian_gradient(const Hamiltonian& h, const VectorField& du1, const VectorField& du2,
                                          const QuadratureRule& rule) {
  const std::size_t dim = du1.size();
  VectorField out(dim, ScalarField(du1.front().grid()));
  const std::size_t n = du1.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = point_at(du1, i);
    const Point c = point_at(du2, i);
    Point acc{0.0, 0.0};
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double th = rule.nodes[q];
      const Point g = h.gradient({th * a[0] + (1 - th) * c[0], th * a[1] + (1 - th) * c[1]});
      acc[0] += rule.weights[q] * g[0];
      acc[1] += rule.weights[q] * g[1];
    }
    for (std::size_t c2 = 0; c2 < dim; ++c2) out[c2][i] = acc[c2];
  }
  return out;
}

ScalarField averaged_trace_term(const Hamiltonian& h, const ScalarField& u1, const ScalarField& u2,
                                const QuadratureRule& rule) {
  if (!h.has_hessian()) throw std::logic_error("averaged_trace_term: Hamiltonian has no Hessian");
  const Grid& grid = u1.grid();
  const int dim = grid.dim();
  const VectorField du1 = gradient(u1);
  const VectorField du2 = gradient(u2);
  const auto d2u1 = hessian(u1);
  const auto d2u2 = hessian(u2);
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point a = point_at(du1, i);
    const Point c = point_at(du2, i);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double th = rule.nodes[q];
      const Hessian2 hp = h.hessian({th * a[0] + (1 - th) * c[0], th * a[1] + (1 - th) * c[1]});
      double tr = 0.0;
      for (int r = 0; r < dim; ++r) {
        for (int s = 0; s < dim; ++s) {
          const std::size_t k = static_cast<std::size_t>(r * dim + s);
          const double d2 = th * d2u1[k][i] + (1 - th) * d2u2[k][i];
          tr += hp[static_cast<std::size_t>(s * 2 + r)] * d2;
        }
      }
      acc += rule.weights[q] * tr;
    }
    out[i] = acc;
  }
  return out;
}

LinearizedDrift::LinearizedDrift(Trajectory u1, Trajectory u2, Hamiltonian h, int theta_nodes)
    : u1_(std::make_shared<const Trajectory>(std::move(u1))),
      u2_(std::make_shared<const Trajectory>(std::move(u2))),
      h_(std::move(h)),
      rule_(gauss_legendre(theta_nodes > 0 ? theta_nodes : default_theta_nodes(h_))) {
  if (!(u1_->grid() == u2_->grid())) throw std::invalid_argument("LinearizedDrift: grid mismatch");
  if (u1_->times() != u2_->times()) throw std::invalid_argument("LinearizedDrift: sample times differ");
  if (u1_->empty()) throw std::invalid_argument("LinearizedDrift: empty trajectories");
}

std::pair<ScalarField, ScalarField> LinearizedDrift::fields_at(double t) const {
  const auto& ts = u1_->times();
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  if (t < ts.front() - tol || t > ts.back() + tol) throw std::out_of_range("LinearizedDrift: time outside range");
  if (auto k = u1_->find_time(t)) return {u1_->field(*k), u2_->field(*k)};
  const auto hi = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
  const std::size_t lo = hi - 1;
  const double s = (t - ts[lo]) / (ts[hi] - ts[lo]);
  return {(1 - s) * u1_->field(lo) + s * u1_->field(hi), (1 - s) * u2_->field(lo) + s * u2_->field(hi)};
}

VectorField LinearizedDrift::eval(double t) const {
  const auto [a, c] = fields_at(t);
  VectorField b = averaged_hamiltonian_gradient(h_, gradient(a), gradient(c), rule_);
  for (auto& comp : b) comp *= -1.0;
  return b;
}

ScalarField LinearizedDrift::minus_divergence(double t) const {
  const auto [a, c] = fields_at(t);
  return averaged_trace_term(h_, a, c, rule_);
}

ScalarField LinearizedDrift::minus_divergence_spectral(double t) const { return -1.0 * divergence(eval(t)); }

}  // namespace fplab
