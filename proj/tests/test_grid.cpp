#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fplab/grid.hpp"

using namespace fplab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

ScalarField sine(const Grid& g, int k = 1) {
  return ScalarField::sample(g, [k](const Point& x) { return std::sin(kTwoPi * k * x[0]); });
}

// Random trigonometric polynomial with |k| < N/3 per axis.
ScalarField band_limited(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const int kmax = g.points_per_axis() / 3 - 1;
  struct Mode {
    int kx, ky;
    double a, b;
  };
  std::vector<Mode> modes;
  for (int i = 0; i < 6; ++i) {
    std::uniform_int_distribution<int> k(-kmax, kmax);
    modes.push_back({k(rng), g.dim() == 2 ? k(rng) : 0, nd(rng), nd(rng)});
  }
  return ScalarField::sample(g, [&](const Point& x) {
    double v = 0.0;
    for (const auto& m : modes) {
      const double ph = kTwoPi * (m.kx * x[0] + m.ky * x[1]);
      v += m.a * std::cos(ph) + m.b * std::sin(ph);
    }
    return v;
  });
}

}  // namespace

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid(3, 16), std::invalid_argument);
  EXPECT_THROW(Grid(1, 12), std::invalid_argument);
  EXPECT_NO_THROW(Grid(2, 16));
}

TEST(Grid, UnitVolumeQuadrature) {
  for (int dim : {1, 2}) {
    const Grid g(dim, 32);
    EXPECT_NEAR(integral(ScalarField::constant(g, 1.0)), 1.0, 1e-15);
  }
}

TEST(Grid, Wavenumbers) {
  const Grid g(1, 8);
  EXPECT_EQ(g.wavenumber(3), 3);
  EXPECT_EQ(g.wavenumber(4), 4);
  EXPECT_EQ(g.wavenumber(5), -3);
  EXPECT_EQ(g.derivative_wavenumber(4), 0);
}

TEST(LpNorm, ConstantOneIsOne) {
  const Grid g(2, 16);
  for (double p : {1.0, 2.0, 3.5, kInf}) EXPECT_NEAR(lp_norm(ScalarField::constant(g, 1.0), p), 1.0, 1e-14);
}

TEST(LpNorm, SineL2) { EXPECT_NEAR(lp_norm(sine(Grid(1, 64)), 2.0), 1.0 / std::sqrt(2.0), 1e-12); }

TEST(LpNorm, SineSupAtAlignedNodes) {
  EXPECT_EQ(lp_norm(sine(Grid(1, 64)), kInf), std::abs(std::sin(kTwoPi * 16 / 64.0)));
  EXPECT_NEAR(lp_norm(sine(Grid(1, 64)), kInf), 1.0, 1e-15);
}

TEST(LpNorm, RejectsSubunitExponent) { EXPECT_THROW(lp_norm(sine(Grid(1, 8)), 0.5), std::invalid_argument); }

TEST(MixedNorm, ConstantInTime) {
  const Grid g(1, 16);
  Trajectory traj(g);
  const double t_end = 2.0;
  for (int i = 0; i <= 20; ++i) traj.push_back(t_end * i / 20.0, ScalarField::constant(g, 1.0));
  EXPECT_NEAR(mixed_norm(traj, 2.0, 3.0), std::pow(t_end, 1.0 / 3.0), 1e-13);
}

TEST(MixedNorm, LinearAmplitude) {
  const Grid g(1, 16);
  Trajectory traj(g);
  const int k = 200;
  for (int i = 0; i <= k; ++i) traj.push_back(double(i) / k, ScalarField::constant(g, double(i) / k));
  // trapezoid error on t^2 is dt^2 / 6 over [0,1]
  const double dt = 1.0 / k;
  EXPECT_NEAR(mixed_norm(traj, kInf, 2.0), std::sqrt(1.0 / 3.0), dt * dt);
}

TEST(MixedNorm, SupInTimeIsMaxSample) {
  const Grid g(1, 16);
  Trajectory traj(g);
  traj.push_back(0.0, sine(g) * 0.5);
  traj.push_back(0.5, sine(g) * 3.0);
  traj.push_back(1.0, sine(g) * 1.0);
  EXPECT_DOUBLE_EQ(mixed_norm(traj, 2.0, kInf), lp_norm(sine(g) * 3.0, 2.0));
}

namespace {

TimeSeries inverse_sqrt(int k) {
  TimeSeries s;
  for (int i = 0; i <= k; ++i) {
    const double t = double(i) / k;
    s.times.push_back(t);
    s.values.push_back(i == 0 ? kInf : 1.0 / std::sqrt(t));
  }
  s.leading_power = 0.5;
  return s;
}

}  // namespace

TEST(TimeIntegral, SingularLeadingInterval) {
  // int_0^1 t^{-1/2} dt = 2
  const double coarse = std::abs(time_integral(inverse_sqrt(1000)) - 2.0);
  const double fine = std::abs(time_integral(inverse_sqrt(4000)) - 2.0);
  EXPECT_LT(fine, 1e-3);
  EXPECT_LT(fine, 0.6 * coarse);
  // t^{-1} is not integrable
  EXPECT_THROW(time_integral(inverse_sqrt(100), 2.0), std::domain_error);
}

TEST(Trajectory, RequiresIncreasingTimes) {
  Trajectory traj(Grid(1, 8));
  traj.push_back(0.0, ScalarField::constant(Grid(1, 8), 1.0));
  EXPECT_THROW(traj.push_back(0.0, ScalarField::constant(Grid(1, 8), 1.0)), std::invalid_argument);
  EXPECT_TRUE(traj.find_time(0.0).has_value());
}

TEST(Spectral, ConstantHasZeroDerivatives) {
  const Grid g(2, 16);
  const auto c = ScalarField::constant(g, 3.0);
  for (const auto& d : gradient(c)) EXPECT_LE(lp_norm(d, kInf), 1e-13);
  EXPECT_LE(lp_norm(laplacian(c), kInf), 1e-12);
}

TEST(Spectral, DerivativeOfSine) {
  const Grid g(1, 64);
  const auto expect = ScalarField::sample(g, [](const Point& x) { return kTwoPi * std::cos(kTwoPi * x[0]); });
  EXPECT_LE(lp_norm(gradient(sine(g))[0] - expect, kInf), 1e-10);
}

TEST(Spectral, LaplacianEigenfunction) {
  const Grid g(1, 64);
  EXPECT_LE(lp_norm(laplacian(sine(g)) + sine(g) * (kTwoPi * kTwoPi), kInf), 1e-9);
}

TEST(Spectral, PeriodicIntegrationByParts) {
  std::mt19937_64 rng(3);
  for (int dim : {1, 2}) {
    const Grid g(dim, 32);
    const auto f = band_limited(g, rng);
    const auto h = band_limited(g, rng);
    for (int axis = 0; axis < dim; ++axis) {
      EXPECT_NEAR(inner(f, gradient(h)[axis]) + inner(h, gradient(f)[axis]), 0.0, 1e-10);
    }
  }
}

TEST(Spectral, CurlFieldIsDivergenceFree) {
  const Grid g(2, 32);
  const auto psi = ScalarField::sample(g, [](const Point& x) {
    return std::sin(kTwoPi * (x[0] + 2 * x[1])) + 0.3 * std::cos(kTwoPi * 3 * x[1]);
  });
  const auto d = gradient(psi);
  const VectorField v{d[1], d[0] * -1.0};
  EXPECT_LE(lp_norm(divergence(v), kInf), 1e-10);
}

TEST(Spectral, HelmholtzInvertsIdentityMinusLaplacian) {
  std::mt19937_64 rng(5);
  const Grid g(2, 16);
  const auto f = band_limited(g, rng);
  const auto u = solve_helmholtz(f, 0.3);
  EXPECT_LE(lp_norm(u - laplacian(u) * 0.3 - f, kInf), 1e-10);
}

TEST(Spectral, DealiasKeepsBandLimitedFields) {
  std::mt19937_64 rng(8);
  const Grid g(1, 64);
  const auto f = band_limited(g, rng);
  EXPECT_TRUE(is_band_limited(f));
  EXPECT_LE(lp_norm(dealias(f) - f, kInf), 1e-12);
  EXPECT_FALSE(is_band_limited(sine(g, 30)));
}

TEST(Spectral, ParsevalEnergy) {
  const Grid g(1, 32);
  EXPECT_NEAR(spectral_energy(sine(g)), 0.5, 1e-13);
}

TEST(Spectral, HessianEigenvalueOfSeparableField) {
  const Grid g(2, 32);
  // f = cos(2 pi x) + cos(2 pi y): Hessian diag(-4pi^2 cos x, -4pi^2 cos y)
  const auto f = ScalarField::sample(g, [](const Point& x) { return std::cos(kTwoPi * x[0]) + std::cos(kTwoPi * x[1]); });
  const auto lam = max_hessian_eigenvalue(f);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.node(i);
    const double expect = -kTwoPi * kTwoPi * std::min(std::cos(kTwoPi * x[0]), std::cos(kTwoPi * x[1]));
    EXPECT_NEAR(lam[i], expect, 1e-8);
  }
}

TEST(ScalarField, NonFiniteDetection) {
  auto f = ScalarField::constant(Grid(1, 8), 1.0);
  EXPECT_TRUE(f.all_finite());
  f[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(f.all_finite());
}
