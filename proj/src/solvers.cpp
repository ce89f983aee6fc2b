#include "fplab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fplab {

namespace {

double max_speed(const VectorField& b) {
  double m = 0.0;
  const std::size_t n = b.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = b.size() == 1 ? std::abs(b[0][i]) : std::hypot(b[0][i], b[1][i]);
    m = std::max(m, s);
  }
  return m;
}

/// Explicit part N(y, t) of d_s y = eps Lap y + N(y, t) in marching time s.
/// Writes the advective speed used for the CFL check.
using ExplicitOp = std::function<ScalarField(const ScalarField&, double, double&)>;

class Stepper {
 public:
  Stepper(ExplicitOp op, const SolverConfig& cfg) : op_(std::move(op)), cfg_(cfg) {}

  /// One step from physical time ta to tb (either direction).
  ScalarField step(const ScalarField& y0, double ta, double tb, int index) {
    const double h = std::abs(tb - ta);
    h_grid_ = y0.grid().spacing();
    index_ = index;
    auto at = [&](double c) { return ta + c * (tb - ta); };
    switch (cfg_.scheme) {
      case Scheme::ImexEuler:
        return euler(y0, h, at(0.5));
      case Scheme::ImexMidpoint: {
        const double half = 0.5 * h;
        const ScalarField yh = solve_helmholtz(y0 + half * eval(y0, at(0.0), h), cfg_.epsilon * half);
        const ScalarField rhs = apply_identity_plus_laplacian(y0, cfg_.epsilon * half) + h * eval(yh, at(0.5), h);
        return solve_helmholtz(rhs, cfg_.epsilon * half);
      }
      case Scheme::ImexSsp3: {
        const ScalarField y1 = euler(y0, h, at(0.0));
        const ScalarField y2 = 0.75 * y0 + 0.25 * euler(y1, h, at(1.0));
        return (1.0 / 3.0) * y0 + (2.0 / 3.0) * euler(y2, h, at(0.5));
      }
    }
    throw std::logic_error("unknown scheme");
  }

 private:
  ScalarField euler(const ScalarField& y, double h, double t) {
    return solve_helmholtz(y + h * eval(y, t, h), cfg_.epsilon * h);
  }

  ScalarField eval(const ScalarField& y, double t, double h) {
    double speed = 0.0;
    ScalarField n = op_(y, t, speed);
    const double limit = speed > 0.0 ? cfg_.cfl * h_grid_ / speed : std::numeric_limits<double>::infinity();
    if (!(h <= limit * (1.0 + 1e-12))) throw CflViolation(index_, h, limit);
    return n;
  }

  ExplicitOp op_;
  SolverConfig cfg_;
  double h_grid_ = 0.0;
  int index_ = 0;
};

void validate(const SolverConfig& cfg) {
  if (!(cfg.epsilon >= 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be >= 0");
  if (!(cfg.t_end > cfg.t_start) || cfg.t_start < 0.0) throw std::invalid_argument("SolverConfig: need 0 <= t_start < t_end");
  if (cfg.record_every < 1) throw std::invalid_argument("SolverConfig: record_every must be >= 1");
  if (!(cfg.cfl > 0.0)) throw std::invalid_argument("SolverConfig: cfl must be positive");
}

Trajectory march(ExplicitOp op, const ScalarField& data, const SolverConfig& cfg, bool backward) {
  validate(cfg);
  const auto mesh = time_mesh(cfg);
  const int steps = static_cast<int>(mesh.size()) - 1;
  Stepper stepper(std::move(op), cfg);
  ScalarField y = dealias(data);
  if (!y.all_finite()) throw SolverBlowup(0);
  std::vector<std::pair<double, ScalarField>> snaps;
  const std::size_t start = backward ? mesh.size() - 1 : 0;
  snaps.emplace_back(mesh[start], y);
  for (int k = 0; k < steps; ++k) {
    const std::size_t a = backward ? mesh.size() - 1 - static_cast<std::size_t>(k) : static_cast<std::size_t>(k);
    const std::size_t b = backward ? a - 1 : a + 1;
    y = stepper.step(y, mesh[a], mesh[b], k + 1);
    if (!y.all_finite()) throw SolverBlowup(k + 1);
    if ((k + 1) % cfg.record_every == 0 || k + 1 == steps) snaps.emplace_back(mesh[b], y);
  }
  if (backward) std::reverse(snaps.begin(), snaps.end());
  Trajectory traj(data.grid());
  for (auto& [t, f] : snaps) traj.push_back(t, std::move(f));
  return traj;
}

ScalarField source_at(const SourceFn& f, const Grid& grid, double t) {
  return f ? f(t) : ScalarField(grid);
}

ExplicitOp fokker_planck_op(DriftFn drift) {
  return [drift = std::move(drift)](const ScalarField& rho, double t, double& speed) {
    const VectorField b = drift(t);
    speed = max_speed(b);
    VectorField flux;
    flux.reserve(b.size());
    for (const auto& bc : b) flux.push_back(pointwise_product(bc, rho));
    return dealias(-1.0 * divergence(flux));
  };
}

ExplicitOp transport_op(DriftFn drift, SourceFn f) {
  return [drift = std::move(drift), f = std::move(f)](const ScalarField& z, double t, double& speed) {
    const VectorField b = drift(t);
    speed = max_speed(b);
    ScalarField n = dot(b, gradient(z));
    if (f) n += f(t);
    return dealias(n);
  };
}

ExplicitOp hamilton_jacobi_op(Hamiltonian h, SourceFn f) {
  return [h = std::move(h), f = std::move(f)](const ScalarField& u, double t, double& speed) {
    const VectorField du = gradient(u);
    speed = max_speed(h.apply_gradient(du));
    ScalarField n = source_at(f, u.grid(), t);
    n -= h.apply(du);
    return dealias(n);
  };
}

std::string step_message(const char* what, int step) {
  std::ostringstream os;
  os << what << " at step " << step;
  return os.str();
}

}  // namespace

CflViolation::CflViolation(int step, double dt, double limit)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "CFL violation at step " << step << ": dt = " << dt << " exceeds " << limit;
        return os.str();
      }()),
      step_(step) {}

SolverBlowup::SolverBlowup(int step) : NonFiniteError(step_message("non-finite value", step)), step_(step) {}

std::string to_string(PDEKind kind) {
  switch (kind) {
    case PDEKind::FokkerPlanck: return "fokker_planck";
    case PDEKind::TransportDiffusion: return "transport_diffusion";
    case PDEKind::TransportDiffusionBackward: return "transport_diffusion_backward";
    case PDEKind::HamiltonJacobi: return "hamilton_jacobi";
  }
  return "unknown";
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::ImexEuler: return "imex_euler";
    case Scheme::ImexMidpoint: return "imex_midpoint";
    case Scheme::ImexSsp3: return "imex_ssp3";
  }
  return "unknown";
}

PDEKind parse_pde_kind(const std::string& text) {
  for (auto k : {PDEKind::FokkerPlanck, PDEKind::TransportDiffusion, PDEKind::TransportDiffusionBackward,
                 PDEKind::HamiltonJacobi}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown PDE kind '" + text + "'");
}

Scheme parse_scheme(const std::string& text) {
  for (auto s : {Scheme::ImexEuler, Scheme::ImexMidpoint, Scheme::ImexSsp3}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown scheme '" + text + "'");
}

DriftFn drift_fn(const DriftSpec& spec, const Grid& grid) {
  auto sampled = std::make_shared<const SampledDrift>(spec, grid);
  return [sampled](double t) { return sampled->at(t); };
}

DriftFn zero_drift(const Grid& grid) {
  return [grid](double) { return VectorField(grid.dim(), ScalarField(grid)); };
}

SourceFn constant_source(ScalarField f) {
  return [f = std::move(f)](double) { return f; };
}

std::vector<double> time_mesh(const SolverConfig& cfg) {
  validate(cfg);
  std::vector<double> t;
  if (cfg.mesh == TimeMeshKind::Uniform) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
    const double span = cfg.t_end - cfg.t_start;
    const double ratio = span / cfg.dt;
    const auto n = static_cast<long>(std::abs(ratio - std::round(ratio)) < 1e-9 * ratio ? std::round(ratio)
                                                                                      : std::ceil(ratio));
    for (long k = 0; k < n; ++k) t.push_back(cfg.t_start + span * static_cast<double>(k) / static_cast<double>(n));
    t.push_back(cfg.t_end);
    return t;
  }
  if (!(cfg.t_start > 0.0)) throw std::invalid_argument("SolverConfig: geometric mesh requires t_start > 0");
  if (!(cfg.geometric_ratio > 1.0)) throw std::invalid_argument("SolverConfig: geometric ratio must exceed 1");
  for (long k = 0;; ++k) {
    const double tk = cfg.t_start * std::pow(cfg.geometric_ratio, static_cast<double>(k));
    if (tk >= cfg.t_end * (1.0 - 1e-12)) break;
    t.push_back(tk);
  }
  // fold a sliver of a last step into its predecessor
  if (t.size() >= 2 && cfg.t_end - t.back() < 0.1 * (t.back() - t[t.size() - 2])) t.pop_back();
  t.push_back(cfg.t_end);
  return t;
}

Trajectory solve(PDEKind kind, const PdeCoefficients& coeffs, const ScalarField& data, const SolverConfig& cfg) {
  switch (kind) {
    case PDEKind::FokkerPlanck:
      if (!coeffs.drift) throw std::invalid_argument("solve: Fokker-Planck needs a drift");
      return march(fokker_planck_op(coeffs.drift), data, cfg, false);
    case PDEKind::TransportDiffusion:
      if (!coeffs.drift) throw std::invalid_argument("solve: transport needs a drift");
      return march(transport_op(coeffs.drift, coeffs.source), data, cfg, false);
    case PDEKind::TransportDiffusionBackward:
      if (!coeffs.drift) throw std::invalid_argument("solve: transport needs a drift");
      return march(transport_op(coeffs.drift, coeffs.source), data, cfg, true);
    case PDEKind::HamiltonJacobi:
      if (!coeffs.hamiltonian) throw std::invalid_argument("solve: Hamilton-Jacobi needs a Hamiltonian");
      return march(hamilton_jacobi_op(*coeffs.hamiltonian, coeffs.source), data, cfg, true);
  }
  throw std::logic_error("unknown PDE kind");
}

Trajectory solve_fokker_planck(const DriftFn& drift, const ScalarField& rho0, const SolverConfig& cfg) {
  return solve(PDEKind::FokkerPlanck, {drift, std::nullopt, {}}, rho0, cfg);
}

Trajectory solve_transport(const DriftFn& drift, const ScalarField& z0, const SourceFn& f, const SolverConfig& cfg) {
  return solve(PDEKind::TransportDiffusion, {drift, std::nullopt, f}, z0, cfg);
}

Trajectory solve_transport_backward(const DriftFn& drift, const ScalarField& v_end, const SourceFn& f,
                                    const SolverConfig& cfg) {
  return solve(PDEKind::TransportDiffusionBackward, {drift, std::nullopt, f}, v_end, cfg);
}

Trajectory solve_hamilton_jacobi(const Hamiltonian& h, const ScalarField& u_end, const SourceFn& f,
                                 const SolverConfig& cfg) {
  return solve(PDEKind::HamiltonJacobi, {{}, h, f}, u_end, cfg);
}

TimeSeries residual(PDEKind kind, const Trajectory& traj, const PdeCoefficients& coeffs, double epsilon) {
  if (traj.size() < 3) throw std::invalid_argument("residual: need at least three snapshots");
  const Grid& grid = traj.grid();
  TimeSeries out;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const double t = traj.time(k);
    const ScalarField& y = traj.field(k);
    const ScalarField dydt = (1.0 / (traj.time(k + 1) - traj.time(k - 1))) * (traj.field(k + 1) - traj.field(k - 1));
    const ScalarField lap = laplacian(y);
    ScalarField r(grid);
    switch (kind) {
      case PDEKind::FokkerPlanck: {
        VectorField flux;
        for (const auto& bc : coeffs.drift(t)) flux.push_back(pointwise_product(bc, y));
        r = dydt - epsilon * lap + divergence(flux);
        break;
      }
      case PDEKind::TransportDiffusion:
        r = dydt - epsilon * lap - dot(coeffs.drift(t), gradient(y)) - source_at(coeffs.source, grid, t);
        break;
      case PDEKind::TransportDiffusionBackward:
        r = -1.0 * dydt - epsilon * lap - dot(coeffs.drift(t), gradient(y)) - source_at(coeffs.source, grid, t);
        break;
      case PDEKind::HamiltonJacobi:
        r = -1.0 * dydt - epsilon * lap + coeffs.hamiltonian->apply(gradient(y)) - source_at(coeffs.source, grid, t);
        break;
    }
    out.times.push_back(t);
    out.values.push_back(lp_norm(r, std::numeric_limits<double>::infinity()));
  }
  return out;
}

}  // namespace fplab
