#include "fplab/adjoint_pair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fplab {

namespace {

SolverConfig pair_solver_config(const AdjointPairConfig& cfg) {
  SolverConfig sc = cfg.solver;
  sc.scheme = Scheme::ImexEuler;
  sc.record_every = 1;
  if (sc.mesh != TimeMeshKind::Uniform) throw std::invalid_argument("solve_adjoint_pair: uniform mesh required");
  return sc;
}

AdjointPairResult solve_pair(const Hamiltonian& h, const HjData& first, const HjData& second, const SolverConfig& sc) {
  const Grid& grid = first.terminal.grid();
  AdjointPairResult out{solve_hamilton_jacobi(h, first.terminal, first.source, sc),
                        solve_hamilton_jacobi(h, second.terminal, second.source, sc),
                        Trajectory(grid), Trajectory(grid), {}, {}, {}, 0.0, 0.0, 0.0, {}};
  const auto& times = out.u1.times();
  for (std::size_t k = 0; k < times.size(); ++k) out.w.push_back(times[k], out.u1.field(k) - out.u2.field(k));
  return out;
}

void run_dual(AdjointPairResult& out, const Hamiltonian& h, const HjData& first, const HjData& second,
              const ScalarField& rho_tau, const SolverConfig& sc, const AdjointPairConfig& cfg) {
  const Grid& grid = rho_tau.grid();
  const auto& times = out.u1.times();
  const auto start = out.u1.find_time(cfg.tau);
  if (!start) throw std::invalid_argument("solve_adjoint_pair: tau is not a mesh time");
  const QuadratureRule rule = gauss_legendre(cfg.theta_nodes > 0 ? cfg.theta_nodes : default_theta_nodes(h));

  const double h_grid = grid.spacing();
  ScalarField rho = dealias(rho_tau);
  std::vector<double> step_source;  // dt <F_k, S rho_k>
  for (std::size_t k = *start; k < times.size(); ++k) {
    out.rho.push_back(times[k], rho);
    if (k + 1 == times.size()) break;
    const double dt = times[k + 1] - times[k];
    const double t_mid = 0.5 * (times[k] + times[k + 1]);
    const ScalarField s_rho = solve_helmholtz(rho, sc.epsilon * dt);
    const VectorField bt =
        averaged_hamiltonian_gradient(h, gradient(out.u1.field(k + 1)), gradient(out.u2.field(k + 1)), rule);
    double speed = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point p = point_at(bt, i);
      speed = std::max(speed, std::hypot(p[0], p[1]));
    }
    out.max_drift = std::max(out.max_drift, speed);
    if (speed > 0.0 && dt > sc.cfl * h_grid / speed * (1.0 + 1e-12)) {
      throw CflViolation(static_cast<int>(k + 1), dt, sc.cfl * h_grid / speed);
    }
    VectorField flux;
    for (const auto& c : bt) flux.push_back(pointwise_product(c, s_rho));
    rho = dealias(s_rho + dt * divergence(flux));
    if (!rho.all_finite()) throw SolverBlowup(static_cast<int>(k + 1));
    ScalarField diff(grid);
    if (first.source) diff += first.source(t_mid);
    if (second.source) diff -= second.source(t_mid);
    step_source.push_back(dt * inner(diff, s_rho));
  }

  const std::size_t levels = out.rho.size();
  out.source_pairing.assign(levels, 0.0);
  for (std::size_t j = levels - 1; j-- > 0;) out.source_pairing[j] = out.source_pairing[j + 1] + step_source[j];
  const double p_end = inner(out.w.field(*start + levels - 1), out.rho.field(levels - 1));
  for (std::size_t j = 0; j < levels; ++j) {
    const double t = out.rho.time(j);
    const double p = inner(out.w.field(*start + j), out.rho.field(j));
    out.pairing.times.push_back(t);
    out.pairing.values.push_back(p);
    out.mass.times.push_back(t);
    out.mass.values.push_back(integral(out.rho.field(j)));
    out.identity_defect = std::max(out.identity_defect, std::abs(p - p_end - out.source_pairing[j]));
    out.identity_scale = std::max({out.identity_scale, std::abs(p), std::abs(p_end), std::abs(out.source_pairing[j])});
  }

  if (h.has_hessian()) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      out.max_minus_divergence.times.push_back(times[k]);
      out.max_minus_divergence.values.push_back(
          averaged_trace_term(h, out.u1.field(k), out.u2.field(k), rule).max());
    }
  }
}

}  // namespace

AdjointPairResult solve_adjoint_pair(const Hamiltonian& h, const HjData& first, const HjData& second,
                                     const ScalarField& rho_tau, const AdjointPairConfig& cfg) {
  const SolverConfig sc = pair_solver_config(cfg);
  AdjointPairResult out = solve_pair(h, first, second, sc);
  run_dual(out, h, first, second, rho_tau, sc, cfg);
  return out;
}

AdjointPairResult solve_adjoint_pair(const Hamiltonian& h, const HjData& first, const HjData& second,
                                     const DualDatumFn& dual_datum, const AdjointPairConfig& cfg) {
  const SolverConfig sc = pair_solver_config(cfg);
  AdjointPairResult out = solve_pair(h, first, second, sc);
  const auto start = out.w.find_time(cfg.tau);
  if (!start) throw std::invalid_argument("solve_adjoint_pair: tau is not a mesh time");
  run_dual(out, h, first, second, dual_datum(out.w.field(*start)), sc, cfg);
  return out;
}

}  // namespace fplab
