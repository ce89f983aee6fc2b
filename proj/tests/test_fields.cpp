#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>

#include "fplab/drift.hpp"
#include "fplab/field_io.hpp"
#include "fplab/gn_constant.hpp"
#include "fplab/hamiltonian.hpp"
#include "fplab/linearized_drift.hpp"

using namespace fplab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sup(const ScalarField& f) { return lp_norm(f, kInf); }

double max_abs_diff(const ScalarField& a, const ScalarField& b) { return sup(a - b); }

Trajectory smooth_trajectory(const Grid& g, double a, double phase) {
  Trajectory tr(g);
  for (int k = 0; k <= 4; ++k) {
    const double t = 0.25 * k;
    tr.push_back(t, ScalarField::sample(g, [&](const Point& x) {
                   return a * (1.0 + t) * std::sin(kTwoPi * x[0] + phase) + 0.1 * a * std::cos(2.0 * kTwoPi * x[0]);
                 }));
  }
  return tr;
}

}  // namespace

// --- profiles ------------------------------------------------------------

TEST(TrigProfile, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(7);
  const TrigProfile p = random_profile(2, 3, 0.01, rng);
  const double h = 1e-5;
  for (const Point x : {Point{0.13, 0.71}, Point{0.5, 0.02}, Point{0.9, 0.4}}) {
    const Point gr = p.gradient(x);
    const double dx = (p.value({x[0] + h, x[1]}) - p.value({x[0] - h, x[1]})) / (2 * h);
    const double dy = (p.value({x[0], x[1] + h}) - p.value({x[0], x[1] - h})) / (2 * h);
    EXPECT_NEAR(gr[0], dx, 1e-6 * (1 + std::abs(dx)));
    EXPECT_NEAR(gr[1], dy, 1e-6 * (1 + std::abs(dy)));
    const double lap = (p.value({x[0] + h, x[1]}) + p.value({x[0] - h, x[1]}) + p.value({x[0], x[1] + h}) +
                        p.value({x[0], x[1] - h}) - 4 * p.value(x)) /
                       (h * h);
    EXPECT_NEAR(p.laplacian(x), lap, 1e-3 * (1 + std::abs(lap)));
  }
}

TEST(TrigProfile, InverseLaplacianRoundTrip) {
  const TrigProfile p({{1, 0, 0.3, -0.2}, {2, 1, 0.0, 0.5}});
  const TrigProfile q = p.inverse_laplacian();
  for (const Point x : {Point{0.1, 0.2}, Point{0.77, 0.31}}) EXPECT_NEAR(q.laplacian(x), p.value(x), 1e-13);
  EXPECT_THROW(TrigProfile({{0, 0, 1.0, 0.0}}).inverse_laplacian(), std::exception);
}

TEST(TrigProfile, OneSidedBumpHasZeroMeanAndUnitPeak) {
  const TrigProfile chi = one_sided_bump(16, 0.3);
  const Grid g(1, 256);
  const ScalarField s = ScalarField::sample(g, [&](const Point& x) { return chi.value(x); });
  EXPECT_NEAR(integral(s), 0.0, 1e-12);
  EXPECT_NEAR(chi.value({0.3, 0.0}), 1.0, 1e-12);
  EXPECT_LE(s.max(), 1.0 + 1e-12);
}

// --- drifts --------------------------------------------------------------

TEST(Drift, StreamFunctionSinSinIsDivergenceFree) {
  const TrigProfile psi({{1, 1, -0.5, 0.0}, {1, -1, 0.5, 0.0}});  // sin(2 pi x) sin(2 pi y)
  const Point x0{0.21, 0.63};
  EXPECT_NEAR(psi.value(x0), std::sin(kTwoPi * x0[0]) * std::sin(kTwoPi * x0[1]), 1e-14);
  const DriftSpec b = make_stream_function_drift(psi, 1.0);
  const Point v = b.velocity(x0, 0.5);
  EXPECT_NEAR(v[0], kTwoPi * std::sin(kTwoPi * x0[0]) * std::cos(kTwoPi * x0[1]), 1e-12);
  EXPECT_NEAR(v[1], -kTwoPi * std::cos(kTwoPi * x0[0]) * std::sin(kTwoPi * x0[1]), 1e-12);

  const Grid g(2, 64);
  EXPECT_LE(sup(divergence(b.sample(g, 0.5))), 1e-10);
  EXPECT_TRUE(b.validation().passed);
  EXPECT_TRUE(b.tags().divergence_free);
}

TEST(Drift, ConstantDriftIn1D) {
  const Grid g(1, 32);
  const DriftSpec b = make_divfree_drift(g, 3, 0.7);
  EXPECT_TRUE(b.tags().divergence_free);
  const VectorField v = b.sample(g, 0.3);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(v[0][i], 0.7);
  EXPECT_EQ(sup(b.sample_divergence(g, 0.3)), 0.0);
}

TEST(Drift, SeedReproducibility) {
  const Grid g(2, 32);
  const DriftSpec a = make_divfree_drift(g, 42, 0.5);
  const DriftSpec b = make_divfree_drift(g, 42, 0.5);
  const DriftSpec c = make_divfree_drift(g, 43, 0.5);
  const VectorField va = a.sample(g, 0.2);
  const VectorField vb = b.sample(g, 0.2);
  const VectorField vc = c.sample(g, 0.2);
  for (int d = 0; d < 2; ++d) {
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(va[d][i], vb[d][i]);
  }
  EXPECT_GT(max_abs_diff(va[0], vc[0]), 1e-3);
  EXPECT_TRUE(a.validation().passed);
  EXPECT_LE(a.validation().max_divergence_error, 1e-8);
}

TEST(Drift, ClosedFormDivergenceMatchesSpectral) {
  const Grid g(2, 128);
  const DriftSpec b = make_LrLq_drift(g, Exponent(4), Exponent(2), 0.3, 11);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ut(0.01, 1.0);
  for (int k = 0; k < 5; ++k) {
    const double t = ut(rng);
    const ScalarField closed = b.sample_divergence(g, t);
    const ScalarField spectral = divergence(b.sample(g, t));
    EXPECT_LE(max_abs_diff(closed, spectral), 1e-8 * std::max(1.0, sup(closed)));
  }
  EXPECT_TRUE(b.validation().passed);
}

TEST(Drift, LrLqMixedNormMatchesPowerLawIntegral) {
  // margin 0.5, q = inf, r = 2: alpha = 1/4, int_0^1 t^{-1/2} dt = 2.
  const Grid g(1, 128);
  const DriftSpec b = make_LrLq_drift(g, Exponent::infinity(), Exponent(2), 0.5, 9);
  const ScalarField lap0 = b.sample_divergence(g, 1.0);
  const double expected = sup(lap0) * std::sqrt(2.0);
  EXPECT_NEAR(b.closed_form_mixed_norm(1.0), expected, 1e-12 * expected);

  TimeSeries s;
  s.leading_power = 0.25;
  for (int k = 0; k <= 2000; ++k) {
    const double t = k / 2000.0;
    s.times.push_back(t);
    s.values.push_back(k == 0 ? kInf : sup(b.sample_divergence(g, t)));
  }
  EXPECT_NEAR(time_lr_norm(s, 2.0), expected, 0.02 * expected);
  EXPECT_NEAR(b.divergence_norm(0.25), sup(lap0) * std::pow(0.25, -0.25), 1e-9 * sup(lap0));
}

TEST(Drift, AutonomousDriftMixedNormIsSeparable) {
  const Grid g(2, 64);
  LrLqOptions o;
  o.autonomous = true;
  const DriftSpec b = make_LrLq_drift(g, Exponent(2), Exponent(4), 0.0, 2, o);
  const double lap = lp_norm(b.sample_divergence(g, 0.7), 2.0);
  EXPECT_NEAR(b.closed_form_mixed_norm(0.5), std::pow(0.5, 0.25) * lap, 1e-12);
  Trajectory tr(g);
  for (int k = 0; k <= 10; ++k) tr.push_back(0.05 * k, b.sample_divergence(g, 0.05 * k + 1e-3));
  EXPECT_NEAR(mixed_norm(tr, 2.0, 4.0), std::pow(0.5, 0.25) * lap, 1e-12);
}

TEST(Drift, MixedNormGrowsAsMarginShrinks) {
  const Grid g(1, 64);
  double prev = 0.0;
  for (double margin : {0.8, 0.5, 0.2, 0.05, 0.01}) {
    const double m = make_LrLq_drift(g, Exponent(2), Exponent(2), margin, 4).closed_form_mixed_norm(1.0);
    EXPECT_GT(m, prev);
    prev = m;
  }
  EXPECT_EQ(make_LrLq_drift(g, Exponent(2), Exponent(2), 0.0, 4).closed_form_mixed_norm(1.0), kInf);
}

TEST(Drift, LrLqRejectsInadmissibleExponents) {
  EXPECT_THROW(make_LrLq_drift(Grid(1, 32), Exponent(2), Exponent(4), 0.1, 1), InadmissibleExponent);
  EXPECT_THROW(make_LrLq_drift(Grid(2, 32), Exponent(1), Exponent(2), 0.1, 1), InadmissibleExponent);
  EXPECT_THROW(make_LrLq_drift(Grid(1, 32), Exponent(2), Exponent(2), 1.0, 1), std::invalid_argument);
}

TEST(Drift, OneSidedZeroIsDivergenceFree) {
  const DriftSpec b = make_one_sided_singular_drift(Grid(1, 64), 0.0, 0.0, 1);
  EXPECT_TRUE(b.tags().divergence_free);
  EXPECT_TRUE(b.tags().bounded);
}

TEST(Drift, OneSidedBoundIsSharpAtBumpCentre) {
  const DriftSpec b = make_one_sided_singular_drift(Grid(1, 64), 0.7, 0.0, 17);
  const double c = b.params().at("center");
  for (double t : {1e-3, 0.1, 1.0}) EXPECT_NEAR(-b.divergence({c, 0.0}, t), 0.7 / t, 1e-10 / t);
  EXPECT_TRUE(b.validation().passed);
  EXPECT_LE(b.validation().one_sided_excess, 1e-8);

  const DriftSpec b2 = make_one_sided_singular_drift(Grid(1, 64), 0.7, 0.4, 17);
  EXPECT_TRUE(b2.validation().passed);
  EXPECT_FALSE(b2.tags().bounded);
}

TEST(Drift, OneSidedNegativePartIntegralGrowsLogarithmically) {
  const Grid g(1, 256);
  const DriftSpec b = make_one_sided_singular_drift(g, 1.0, 0.0, 5);
  const SampledDrift s(b, g);
  for (double sigma : {1e-2, 1e-3, 1e-4}) {
    // geometric trapezoid in log t
    const int n = 400;
    double acc = 0.0;
    double prev_t = sigma;
    double prev_v = negative_part(s.divergence_at(sigma)).max();
    for (int k = 1; k <= n; ++k) {
      const double t = sigma * std::pow(1.0 / sigma, double(k) / n);
      const double v = negative_part(s.divergence_at(t)).max();
      acc += 0.5 * (v + prev_v) * (t - prev_t);
      prev_t = t;
      prev_v = v;
    }
    EXPECT_GE(acc, 0.9 * std::log(1.0 / sigma));
  }
}

// --- Gagliardo-Nirenberg constant ------------------------------------------

TEST(GNConstant, ConstantFieldHasUnitRatio) {
  const Grid g(1, 32);
  EXPECT_NEAR(gn_ratio(ScalarField::constant(g, 3.0), Exponent(2)), 1.0, 1e-12);
}

TEST(GNConstant, BoundsSineAndValidates) {
  const Grid g(1, 32);
  const GNConstant c = compute_gn_constant(g, Exponent(2), 4, 50, 1);
  EXPECT_NEAR(c.theta, 0.25, 1e-15);
  EXPECT_EQ(c.exponent, 4.0);
  EXPECT_GE(c.best_ratio, 1.0);
  EXPECT_NEAR(c.value, 1.05 * c.best_ratio, 1e-12);
  EXPECT_EQ(c.validation_violations, 0);
  for (int k : {1, 3, 7}) {
    const ScalarField s = ScalarField::sample(g, [k](const Point& x) { return std::sin(kTwoPi * k * x[0]); });
    EXPECT_LE(gn_ratio(s, Exponent(2)), c.value);
  }
}

TEST(GNConstant, InadmissibleQThrows) {
  EXPECT_THROW(discrete_gn_constant(Grid(2, 16), Exponent(1)), InadmissibleExponent);
}

// --- Hamiltonians ----------------------------------------------------------

TEST(Hamiltonian, Quadratic) {
  const Hamiltonian h = Hamiltonian::quadratic();
  const Point p{0.3, -1.2};
  EXPECT_DOUBLE_EQ(h.value(p), 0.5 * (0.09 + 1.44));
  EXPECT_EQ(h.gradient(p), p);
  EXPECT_EQ(h.hessian(p), (Hessian2{1, 0, 0, 1}));
}

TEST(Hamiltonian, PowerGradientFormula) {
  const double gamma = 3.0;
  const Hamiltonian h = Hamiltonian::power(gamma);
  const Point p{0.4, 0.9};
  const double s = 1 + p[0] * p[0] + p[1] * p[1];
  const double f = gamma * std::pow(s, gamma / 2 - 1);
  EXPECT_NEAR(h.value(p), std::pow(s, 1.5), 1e-14);
  EXPECT_NEAR(h.gradient(p)[0], f * p[0], 1e-14);
  EXPECT_NEAR(h.gradient(p)[1], f * p[1], 1e-14);
  EXPECT_THROW(Hamiltonian::power(1.0), std::invalid_argument);
}

TEST(Hamiltonian, FiniteDifferenceErrorIsFirstOrder) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (const Hamiltonian& h : {Hamiltonian::quadratic(), Hamiltonian::power(1.5), Hamiltonian::power(3.0)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Point p{nd(rng), nd(rng)};
      Point e{nd(rng), nd(rng)};
      const double ne = std::hypot(e[0], e[1]);
      e = {e[0] / ne, e[1] / ne};
      const Point g = h.gradient(p);
      auto err = [&](double eps) {
        return std::abs((h.value({p[0] + eps * e[0], p[1] + eps * e[1]}) - h.value(p)) / eps -
                        (g[0] * e[0] + g[1] * e[1]));
      };
      const double e1 = err(1e-3);
      const double e2 = err(5e-4);
      EXPECT_LT(e1, 1e-2);
      EXPECT_NEAR(e1 / e2, 2.0, 0.1);
    }
  }
}

TEST(Hamiltonian, HessianMatchesFiniteDifferenceOfGradient) {
  const Hamiltonian h = Hamiltonian::power(2.5);
  const Point p{-0.6, 0.35};
  const double eps = 1e-6;
  const Hessian2 hs = h.hessian(p);
  for (int j = 0; j < 2; ++j) {
    Point pp = p;
    Point pm = p;
    pp[j] += eps;
    pm[j] -= eps;
    for (int i = 0; i < 2; ++i) {
      const double fd = (h.gradient(pp)[i] - h.gradient(pm)[i]) / (2 * eps);
      EXPECT_NEAR(hs[2 * i + j], fd, 1e-7);
    }
  }
}

TEST(Hamiltonian, CustomWithoutHessianThrows) {
  const Hamiltonian h = Hamiltonian::custom(
      "abs4", [](const Point& p) { return std::pow(p[0], 4); },
      [](const Point& p) { return Point{4 * std::pow(p[0], 3), 0.0}; });
  EXPECT_FALSE(h.has_hessian());
  EXPECT_THROW(h.hessian({1, 0}), std::logic_error);
  EXPECT_DOUBLE_EQ(h.gradient({0.5, 0})[0], 0.5);
}

TEST(Hamiltonian, AppliesOnFields) {
  const Grid g(1, 16);
  const ScalarField u = ScalarField::sample(g, [](const Point& x) { return std::sin(kTwoPi * x[0]); });
  const VectorField du = gradient(u);
  const ScalarField hv = Hamiltonian::quadratic().apply(du);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(hv[i], 0.5 * du[0][i] * du[0][i], 1e-14);
}

// --- linearized drift ------------------------------------------------------

TEST(Quadrature, GaussLegendreExactness) {
  for (int n : {1, 2, 4, 8, 16, 32}) {
    const QuadratureRule q = gauss_legendre(n);
    ASSERT_EQ(q.nodes.size(), static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += q.weights[i] * std::pow(q.nodes[i], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-13) << "n=" << n << " k=" << k;
    }
  }
  EXPECT_THROW(gauss_legendre(17), std::invalid_argument);
}

TEST(LinearizedDrift, QuadraticEqualSolutionsGiveMinusGradient) {
  const Grid g(1, 64);
  const Trajectory u = smooth_trajectory(g, 0.3, 0.1);
  const LinearizedDrift ld(u, u, Hamiltonian::quadratic());
  const VectorField b = ld.eval(0.5);
  const VectorField du = gradient(u.field(2));
  EXPECT_LE(max_abs_diff(b[0], -1.0 * du[0]), 1e-12);
}

TEST(LinearizedDrift, QuadraticIsExactAverage) {
  const Grid g(2, 32);
  Trajectory u1(g);
  Trajectory u2(g);
  for (int k = 0; k <= 2; ++k) {
    const double t = 0.5 * k;
    u1.push_back(t, ScalarField::sample(g, [t](const Point& x) { return (1 + t) * std::sin(kTwoPi * (x[0] + x[1])); }));
    u2.push_back(t, ScalarField::sample(g, [t](const Point& x) { return std::cos(kTwoPi * x[1]) - t; }));
  }
  const LinearizedDrift ld(u1, u2, Hamiltonian::quadratic(), 8);
  const VectorField b = ld.eval(1.0);
  const VectorField d1 = gradient(u1.field(2));
  const VectorField d2 = gradient(u2.field(2));
  for (int c = 0; c < 2; ++c) EXPECT_LE(max_abs_diff(b[c], -0.5 * (d1[c] + d2[c])), 1e-12);

  const ScalarField md = ld.minus_divergence(1.0);
  const ScalarField expect = 0.5 * (laplacian(u1.field(2)) + laplacian(u2.field(2)));
  EXPECT_LE(max_abs_diff(md, expect), 1e-12 * sup(expect));
}

TEST(LinearizedDrift, QuadratureRefinementForPowerHamiltonian) {
  const Grid g(1, 64);
  const Trajectory u1 = smooth_trajectory(g, 0.06, 0.0);
  const Trajectory u2 = smooth_trajectory(g, -0.04, 0.7);
  const Hamiltonian h = Hamiltonian::power(3.0);
  EXPECT_EQ(default_theta_nodes(h), 8);
  EXPECT_EQ(default_theta_nodes(Hamiltonian::quadratic()), 1);
  const LinearizedDrift a(u1, u2, h, 8);
  const LinearizedDrift b(u1, u2, h, 16);
  for (double t : {0.0, 0.4, 1.0}) EXPECT_LE(max_abs_diff(a.eval(t)[0], b.eval(t)[0]), 1e-9);
  const Trajectory v1 = smooth_trajectory(g, 0.03, 0.0);
  const Trajectory v2 = smooth_trajectory(g, -0.02, 0.7);
  const LinearizedDrift c(v1, v2, h, 8);
  const LinearizedDrift d(v1, v2, h, 16);
  for (double t : {0.0, 0.4, 1.0}) EXPECT_LE(max_abs_diff(c.eval(t)[0], d.eval(t)[0]), 1e-10);
}

TEST(LinearizedDrift, PowerDivergenceBoundedByGammaK) {
  const Grid g(1, 128);
  const Trajectory u1 = smooth_trajectory(g, 0.05, 0.0);
  const Trajectory u2 = smooth_trajectory(g, 0.08, 1.3);
  for (double gamma : {1.3, 1.7, 2.0}) {
    const LinearizedDrift ld(u1, u2, Hamiltonian::power(gamma));
    for (double t : {0.0, 0.6}) {
      const double k = std::max({0.0, laplacian(ld.u1().field(0)).max(), laplacian(ld.u2().field(0)).max(),
                                 laplacian(ld.u1().back()).max(), laplacian(ld.u2().back()).max()});
      const ScalarField md = ld.minus_divergence(t);
      EXPECT_LE(md.max(), gamma * k * (1 + 1e-12));
      EXPECT_LE(max_abs_diff(md, ld.minus_divergence_spectral(t)), 1e-8 * std::max(1.0, sup(md)));
    }
  }
}

TEST(LinearizedDrift, RejectsTimesOutsideRange) {
  const Grid g(1, 16);
  const Trajectory u = smooth_trajectory(g, 0.1, 0.0);
  const LinearizedDrift ld(u, u, Hamiltonian::quadratic());
  EXPECT_THROW(ld.eval(1.5), std::out_of_range);
  Trajectory v(g);
  v.push_back(0.0, u.field(0));
  EXPECT_THROW(LinearizedDrift(u, v, Hamiltonian::quadratic()), std::invalid_argument);
}

// --- serialization -------------------------------------------------------

TEST(FieldIo, EncodeDecodeRoundTrip) {
  for (int dim : {1, 2}) {
    const Grid g(dim, 8);
    const Trajectory tr = smooth_trajectory(g, 0.7, 0.2);
    const std::vector<char> bytes = encode_trajectory(tr);
    EXPECT_EQ(bytes.size(), 12 + 8 * tr.size() * (1 + g.size()));
    const Trajectory back = decode_trajectory(bytes);
    ASSERT_EQ(back.size(), tr.size());
    EXPECT_TRUE(back.grid() == g);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      EXPECT_EQ(back.time(k), tr.time(k));
      for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(back.field(k)[i], tr.field(k)[i]);
    }
  }
}

TEST(FieldIo, RejectsCorruptInput) {
  const Trajectory tr = smooth_trajectory(Grid(1, 8), 1.0, 0.0);
  std::vector<char> bytes = encode_trajectory(tr);
  std::vector<char> cut(bytes.begin(), bytes.end() - 3);
  EXPECT_THROW(decode_trajectory(cut), std::runtime_error);
  bytes.push_back(0);
  EXPECT_THROW(decode_trajectory(bytes), std::runtime_error);
}

TEST(FieldIo, FileRoundTripAndCsv) {
  const Grid g(1, 8);
  const Trajectory tr = smooth_trajectory(g, 0.5, 0.0);
  const auto path = std::filesystem::temp_directory_path() / "fplab_test_traj.bin";
  write_trajectory(tr, path);
  const Trajectory back = read_trajectory(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.back()[3], tr.back()[3]);

  const std::string csv = trajectory_csv(tr);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(1 + tr.size() * g.size()));
  EXPECT_THROW(trajectory_csv(Trajectory(Grid(2, 128))), std::invalid_argument);
}
