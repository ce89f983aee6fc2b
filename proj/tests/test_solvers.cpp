#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fplab/adjoint_pair.hpp"
#include "fplab/drift.hpp"
#include "fplab/solvers.hpp"

using namespace fplab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sup(const ScalarField& f) { return lp_norm(f, kInf); }

ScalarField cosine_bump(const Grid& g) {
  return ScalarField::sample(g, [](const Point& x) { return 1.0 + std::cos(kTwoPi * x[0]); });
}

double heat_l2_error(Scheme scheme, double dt) {
  const Grid g(1, 64);
  SolverConfig cfg;
  cfg.epsilon = 1.0;
  cfg.dt = dt;
  cfg.t_end = 0.1;
  cfg.scheme = scheme;
  const Trajectory tr = solve_fokker_planck(zero_drift(g), cosine_bump(g), cfg);
  const double decay = std::exp(-4 * std::numbers::pi * std::numbers::pi * 0.1);
  const ScalarField exact =
      ScalarField::sample(g, [decay](const Point& x) { return 1.0 + decay * std::cos(kTwoPi * x[0]); });
  return lp_norm(tr.back() - exact, 2.0);
}

// Heat semigroup by explicit O(N^2) Fourier sums, independent of the FFT path.
ScalarField heat_by_sums(const ScalarField& f, double eps, double s) {
  const Grid& g = f.grid();
  const int n = g.points_per_axis();
  ScalarField out(g);
  for (int k = -n / 2 + 1; k < n / 2; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (int j = 0; j < n; ++j) {
      re += f[j] * std::cos(kTwoPi * k * j / n) / n;
      im -= f[j] * std::sin(kTwoPi * k * j / n) / n;
    }
    const double damp = std::exp(-eps * kTwoPi * kTwoPi * k * k * s);
    for (int j = 0; j < n; ++j) {
      out[j] += damp * (re * std::cos(kTwoPi * k * j / n) - im * std::sin(kTwoPi * k * j / n));
    }
  }
  return out;
}

}  // namespace

TEST(Solvers, NamesRoundTrip) {
  for (PDEKind k : {PDEKind::FokkerPlanck, PDEKind::TransportDiffusion, PDEKind::TransportDiffusionBackward,
                    PDEKind::HamiltonJacobi}) {
    EXPECT_EQ(parse_pde_kind(to_string(k)), k);
  }
  for (Scheme s : {Scheme::ImexEuler, Scheme::ImexMidpoint, Scheme::ImexSsp3}) EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_THROW(parse_scheme("rk4"), std::invalid_argument);
}

TEST(TimeMesh, UniformAndGeometric) {
  SolverConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 1.0;
  const auto u = time_mesh(cfg);
  ASSERT_EQ(u.size(), 11u);
  EXPECT_EQ(u.back(), 1.0);
  EXPECT_NEAR(u[3], 0.3, 1e-15);

  cfg.mesh = TimeMeshKind::Geometric;
  cfg.t_start = 1e-4;
  cfg.geometric_ratio = 1.1;
  const auto gm = time_mesh(cfg);
  EXPECT_EQ(gm.front(), 1e-4);
  EXPECT_EQ(gm.back(), 1.0);
  for (std::size_t k = 1; k + 1 < gm.size(); ++k) EXPECT_NEAR(gm[k] / gm[k - 1], 1.1, 1e-12);
  EXPECT_NEAR(static_cast<double>(gm.size() - 1), std::log(1e4) / std::log(1.1), 1.0);

  cfg.t_start = 0.0;
  EXPECT_THROW(time_mesh(cfg), std::invalid_argument);
}

TEST(Solvers, HeatDecayMatchesExactMode) {
  EXPECT_LE(heat_l2_error(Scheme::ImexMidpoint, 1e-4), 1e-4);
}

TEST(Solvers, ConvergenceOrders) {
  const double e1 = heat_l2_error(Scheme::ImexEuler, 2e-3);
  const double e2 = heat_l2_error(Scheme::ImexEuler, 1e-3);
  EXPECT_NEAR(std::log2(e1 / e2), 1.0, 0.1);
  const double m1 = heat_l2_error(Scheme::ImexMidpoint, 2e-3);
  const double m2 = heat_l2_error(Scheme::ImexMidpoint, 1e-3);
  EXPECT_NEAR(std::log2(m1 / m2), 2.0, 0.15);
}

TEST(Solvers, ColeHopfOracle) {
  const Grid g(1, 64);
  const ScalarField gT =
      ScalarField::sample(g, [](const Point& x) { return 0.2 * std::cos(kTwoPi * x[0]) + 0.1 * std::sin(2 * kTwoPi * x[0]); });
  for (double eps : {0.1, 1.0}) {
    SolverConfig cfg;
    cfg.epsilon = eps;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    cfg.scheme = Scheme::ImexMidpoint;
    const Trajectory u = solve_hamilton_jacobi(Hamiltonian::quadratic(), gT, {}, cfg);
    // u(t) = -2 eps log (heat_{eps (T-t)} exp(-g / (2 eps)))
    const ScalarField phiT = pointwise(gT, [eps](double v) { return std::exp(-v / (2 * eps)); });
    const ScalarField phi0 = heat_by_sums(phiT, eps, 0.5);
    const ScalarField exact = pointwise(phi0, [eps](double v) { return -2 * eps * std::log(v); });
    EXPECT_EQ(u.time(0), 0.0);
    EXPECT_LE(sup(u.field(0) - exact) / sup(exact), 1e-4) << "eps=" << eps;
  }
}

TEST(Solvers, PureTransportIsTranslation) {
  const Grid g(1, 64);
  const double c = 0.8;
  const auto z0fn = [](double x) { return std::sin(kTwoPi * x) + 0.3 * std::cos(3 * kTwoPi * x); };
  const ScalarField z0 = ScalarField::sample(g, [&](const Point& x) { return z0fn(x[0]); });
  SolverConfig cfg;
  cfg.epsilon = 0.0;
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  cfg.scheme = Scheme::ImexSsp3;
  const Trajectory z = solve_transport(drift_fn(make_constant_drift(1, {c, 0.0}), g), z0, {}, cfg);
  const double l2 = lp_norm(z0, 2.0);
  for (const auto& f : z.fields()) EXPECT_NEAR(lp_norm(f, 2.0), l2, 1e-6);
  // z_t = c z_x  =>  z(x, t) = z0(x + c t)
  const ScalarField exact = ScalarField::sample(g, [&](const Point& x) { return z0fn(x[0] + c * 0.5); });
  EXPECT_LE(sup(z.back() - exact), 1e-6);
}

TEST(Solvers, BackwardTransportEqualsReversedForward) {
  const Grid g(1, 32);
  const DriftSpec spec = make_LrLq_drift(g, Exponent(2), Exponent(2), 0.5, 3, {0.3, 2, true});
  const DriftFn b = drift_fn(spec, g);
  const ScalarField f = ScalarField::sample(g, [](const Point& x) { return 0.1 * std::cos(kTwoPi * x[0]); });
  const ScalarField vT = ScalarField::sample(g, [](const Point& x) { return std::sin(kTwoPi * x[0]); });
  SolverConfig cfg;
  cfg.epsilon = 0.5;
  cfg.dt = 0.01;
  cfg.t_end = 0.4;
  const Trajectory back = solve_transport_backward(b, vT, constant_source(f), cfg);
  const Trajectory fwd = solve_transport(b, vT, constant_source(f), cfg);
  ASSERT_EQ(back.size(), fwd.size());
  EXPECT_EQ(back.time(0), 0.0);
  for (std::size_t k = 0; k < back.size(); ++k) {
    EXPECT_LE(sup(back.field(k) - fwd.field(fwd.size() - 1 - k)), 1e-12);
  }
}

TEST(Solvers, FokkerPlanckConservesMass) {
  const Grid g(2, 32);
  const DriftSpec spec = make_LrLq_drift(g, Exponent(4), Exponent(4), 0.3, 8);
  const ScalarField rho0 =
      ScalarField::sample(g, [](const Point& x) { return 1.0 + 0.5 * std::cos(kTwoPi * x[0]) * std::sin(kTwoPi * x[1]); });
  SolverConfig cfg;
  cfg.mesh = TimeMeshKind::Geometric;
  cfg.t_start = 1e-3;
  cfg.geometric_ratio = 1.05;
  cfg.t_end = 0.2;
  const Trajectory rho = solve_fokker_planck(drift_fn(spec, g), rho0, cfg);
  const double m0 = integral(rho0);
  for (const auto& f : rho.fields()) EXPECT_LE(std::abs(integral(f) - m0), 1e-12);
  EXPECT_GE(rho.back().min(), -1e-6);
}

TEST(Solvers, ZeroEpsilonIsAllowed) {
  const Grid g(1, 16);
  SolverConfig cfg;
  cfg.epsilon = 0.0;
  cfg.dt = 0.01;
  cfg.t_end = 0.1;
  const Trajectory r = solve_fokker_planck(zero_drift(g), cosine_bump(g), cfg);
  EXPECT_LE(sup(r.back() - cosine_bump(g)), 1e-14);
  cfg.epsilon = -1.0;
  EXPECT_THROW(solve_fokker_planck(zero_drift(g), cosine_bump(g), cfg), std::invalid_argument);
}

TEST(Solvers, CflViolationReportsStep) {
  const Grid g(1, 32);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.1;
  try {
    solve_fokker_planck(drift_fn(make_constant_drift(1, {100.0, 0.0}), g), cosine_bump(g), cfg);
    FAIL() << "expected CflViolation";
  } catch (const CflViolation& e) {
    EXPECT_EQ(e.step(), 1);
  }
}

TEST(Solvers, NonFiniteDataAborts) {
  const Grid g(1, 16);
  ScalarField bad = cosine_bump(g);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.05;
  EXPECT_THROW(solve_fokker_planck(zero_drift(g), bad, cfg), NonFiniteError);
}

TEST(Solvers, GenericSolveDispatches) {
  const Grid g(1, 16);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.05;
  PdeCoefficients c;
  EXPECT_THROW(solve(PDEKind::FokkerPlanck, c, cosine_bump(g), cfg), std::invalid_argument);
  EXPECT_THROW(solve(PDEKind::HamiltonJacobi, c, cosine_bump(g), cfg), std::invalid_argument);
  c.drift = zero_drift(g);
  const Trajectory a = solve(PDEKind::FokkerPlanck, c, cosine_bump(g), cfg);
  const Trajectory b = solve_fokker_planck(zero_drift(g), cosine_bump(g), cfg);
  EXPECT_EQ(sup(a.back() - b.back()), 0.0);
}

// --- residual -------------------------------------------------------------

TEST(Residual, ExactHeatTrajectory) {
  const Grid g(1, 64);
  const double dt = 1e-4;
  for (double eps : {0.1, 1.0}) {
    const double lambda = eps * kTwoPi * kTwoPi;
    Trajectory tr(g);
    for (int k = 0; k <= 20; ++k) {
      const double t = k * dt;
      tr.push_back(t, ScalarField::sample(g, [&](const Point& x) { return 1 + std::exp(-lambda * t) * std::cos(kTwoPi * x[0]); }));
    }
    PdeCoefficients c;
    c.drift = zero_drift(g);
    const TimeSeries r = residual(PDEKind::FokkerPlanck, tr, c, eps);
    // centred difference truncation of e^{-lambda t}: lambda^3 dt^2 / 6
    const double predicted = std::pow(lambda, 3) * dt * dt / 6;
    EXPECT_NEAR(r.values.front(), predicted, 0.05 * predicted);
    if (eps == 0.1) EXPECT_LE(*std::max_element(r.values.begin(), r.values.end()), 1e-6);
  }
}

TEST(Residual, NonSolutionIsOrderOne) {
  const Grid g(1, 32);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Trajectory tr(g);
  for (int k = 0; k < 4; ++k) {
    ScalarField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = nd(rng);
    tr.push_back(0.1 * k, dealias(f));
  }
  PdeCoefficients c;
  c.drift = zero_drift(g);
  EXPECT_GE(residual(PDEKind::FokkerPlanck, tr, c, 1.0).values.front(), 1.0);
  Trajectory two(g);
  two.push_back(0.0, tr.field(0));
  two.push_back(1.0, tr.field(1));
  EXPECT_THROW(residual(PDEKind::FokkerPlanck, two, c, 1.0), std::invalid_argument);
}

TEST(Residual, FirstOrderUnderDtHalving) {
  const Grid g(1, 32);
  const DriftSpec spec = make_LrLq_drift(g, Exponent(2), Exponent(2), 0.5, 5, {0.3, 2, true});
  PdeCoefficients c;
  c.drift = drift_fn(spec, g);
  auto max_res = [&](double dt) {
    SolverConfig cfg;
    cfg.epsilon = 0.2;
    cfg.dt = dt;
    cfg.t_end = 0.2;
    const Trajectory tr = solve_fokker_planck(c.drift, cosine_bump(g), cfg);
    const TimeSeries r = residual(PDEKind::FokkerPlanck, tr, c, cfg.epsilon);
    return *std::max_element(r.values.begin(), r.values.end());
  };
  const double ratio = max_res(1e-3) / max_res(5e-4);
  EXPECT_GE(ratio, 1.8);
  EXPECT_LE(ratio, 2.2);
}

// --- adjoint pair ----------------------------------------------------------

TEST(AdjointPair, IdenticalProblemsGiveZeroPairing) {
  const Grid g(1, 32);
  const ScalarField gT = ScalarField::sample(g, [](const Point& x) { return 0.05 * std::cos(kTwoPi * x[0]); });
  AdjointPairConfig cfg;
  cfg.solver.epsilon = 0.1;
  cfg.solver.dt = 1e-2;
  cfg.solver.t_end = 0.5;
  const AdjointPairResult r =
      solve_adjoint_pair(Hamiltonian::quadratic(), {gT, {}}, {gT, {}}, ScalarField::constant(g, 1.0), cfg);
  for (const auto& w : r.w.fields()) EXPECT_EQ(sup(w), 0.0);
  for (double p : r.pairing.values) EXPECT_EQ(p, 0.0);
}

TEST(AdjointPair, DualityIdentityAndMass) {
  const Grid g(1, 64);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  auto smooth = [&](double amp) {
    const double a = nd(rng);
    const double b = nd(rng);
    const double c = nd(rng);
    return ScalarField::sample(g, [=](const Point& x) {
      return amp * (a * std::cos(kTwoPi * x[0]) + b * std::sin(kTwoPi * x[0]) + c * std::cos(2 * kTwoPi * x[0]));
    });
  };
  const HjData first{smooth(0.03), constant_source(smooth(0.05))};
  const HjData second{smooth(0.03), {}};
  const ScalarField rho = ScalarField::sample(g, [](const Point& x) { return 1 + 0.5 * std::sin(kTwoPi * x[0]); });
  AdjointPairConfig cfg;
  cfg.solver.epsilon = 0.1;
  cfg.solver.dt = 2e-3;
  cfg.solver.t_end = 1.0;
  const AdjointPairResult r = solve_adjoint_pair(Hamiltonian::quadratic(), first, second, rho, cfg);
  EXPECT_GT(r.identity_scale, 0.0);
  EXPECT_LE(r.identity_defect, 1e-5 * r.identity_scale);

  // independent evaluation of P(tau) - P(T) - S(tau)
  const double p_tau = inner(r.w.field(0), r.rho.field(0));
  const double p_end = inner(r.w.back(), r.rho.back());
  EXPECT_NEAR(r.pairing.values.front(), p_tau, 1e-14);
  EXPECT_NEAR(p_tau - p_end - r.source_pairing.front(), 0.0, 1e-5 * r.identity_scale);

  for (double m : r.mass.values) EXPECT_NEAR(m, 1.0, 1e-10);
}
