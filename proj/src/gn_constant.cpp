#include "fplab/gn_constant.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

namespace fplab {

namespace {

constexpr double kSafetyFactor = 1.05;
constexpr int kMaxIterations = 150;

struct RatioParts {
  double ratio;
  double log_ratio;
  std::vector<double> grad;  // gradient of log ratio w.r.t. nodal values, per unit weight
};

double target_exponent(const Exponent& q) { return 2.0 * q.conjugate().to_double(); }

ScalarField strip_nyquist(const ScalarField& f) {
  const Grid& g = f.grid();
  const int n = g.points_per_axis();
  auto c = to_spectral(f);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int jx = static_cast<int>(i % static_cast<std::size_t>(n));
    const int jy = static_cast<int>(i / static_cast<std::size_t>(n));
    if (jx == n / 2 || (g.dim() == 2 && jy == n / 2)) c[i] = 0.0;
  }
  return from_spectral(g, std::move(c));
}

RatioParts ratio_with_gradient(const ScalarField& f, double s, double theta) {
  const double w = f.grid().quadrature_weight();
  const ScalarField lap = laplacian(f);
  const double b = inner(f, f);
  const double e = std::max(-inner(f, lap), 0.0);
  std::vector<double> da(f.size(), 0.0);
  double a = 0.0;
  if (std::isinf(s)) {
    std::size_t arg = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (std::abs(f[i]) > std::abs(f[arg])) arg = i;
    }
    a = f[arg] * f[arg];
    da[arg] = 2.0 * f[arg] / w;
  } else {
    const double m = lp_norm(f, std::numeric_limits<double>::infinity());
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += std::pow(std::abs(f[i]) / m, s);
    sum *= w;
    a = m * m * std::pow(sum, 2.0 / s);
    const double pre = 2.0 * std::pow(sum, 2.0 / s - 1.0) * m * m;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double x = f[i] / m;
      da[i] = pre * std::pow(std::abs(x), s - 2.0) * x / m;
    }
  }
  const double et = e > 0.0 ? std::pow(e, theta) : 0.0;
  const double den = et * std::pow(b, 1.0 - theta) + b;
  RatioParts out;
  out.ratio = a / den;
  out.log_ratio = std::log(a) - std::log(den);
  out.grad.resize(f.size());
  const double d_de = e > 0.0 ? theta * std::pow(e, theta - 1.0) * std::pow(b, 1.0 - theta) : 0.0;
  const double d_db = (1.0 - theta) * et * std::pow(b, -theta) + 1.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double dden = d_de * (-2.0 * lap[i]) + d_db * (2.0 * f[i]);
    out.grad[i] = da[i] / a - dden / den;
  }
  return out;
}

ScalarField normalized(ScalarField f) {
  const double n2 = lp_norm(f, 2.0);
  if (n2 > 0.0) f *= 1.0 / n2;
  return f;
}

/// Normalized gradient ascent with an adaptive step; returns the best ratio.
std::pair<double, bool> ascend(ScalarField f, double s, double theta) {
  f = normalized(strip_nyquist(f));
  auto cur = ratio_with_gradient(f, s, theta);
  double step = 0.1;
  bool converged = false;
  for (int it = 0; it < kMaxIterations; ++it) {
    ScalarField g(f.grid(), cur.grad);
    g = strip_nyquist(g);
    const double gnorm = lp_norm(g, 2.0);
    if (gnorm < 1e-10) {
      converged = true;
      break;
    }
    bool improved = false;
    while (step > 1e-12) {
      ScalarField trial = normalized(f + (step / gnorm) * g);
      auto next = ratio_with_gradient(trial, s, theta);
      if (std::isfinite(next.log_ratio) && next.log_ratio > cur.log_ratio) {
        const double gain = next.log_ratio - cur.log_ratio;
        f = std::move(trial);
        cur = std::move(next);
        step *= 1.5;
        improved = true;
        if (gain < 1e-9) converged = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved || converged) {
      converged = true;
      break;
    }
  }
  return {cur.ratio, converged};
}

}  // namespace

double gn_ratio(const ScalarField& f, const Exponent& q) {
  const auto gn = gn_from_q(f.grid().dim(), q);
  const double theta = gn.theta.to_double();
  const double b = inner(f, f);
  if (b == 0.0) return 0.0;
  const double e = std::max(-inner(f, laplacian(f)), 0.0);
  const double a = std::pow(lp_norm(f, target_exponent(q)), 2.0);
  return a / (std::pow(e, theta) * std::pow(b, 1.0 - theta) + b);
}

ScalarField random_trial_field(const Grid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = grid.points_per_axis();
  if (unit(rng) < 0.5) {
    // periodized Gaussian bump of random width and center
    const double width = std::pow(10.0, -2.0 + 1.5 * unit(rng));
    const double cx = unit(rng);
    const double cy = unit(rng);
    const double offset = 0.5 * normal(rng);
    return ScalarField::sample(grid, [&](const Point& p) {
      double v = 0.0;
      for (int sx = -1; sx <= 1; ++sx) {
        const double dx = p[0] - cx + sx;
        if (grid.dim() == 1) {
          v += std::exp(-dx * dx / (2 * width * width));
          continue;
        }
        for (int sy = -1; sy <= 1; ++sy) {
          const double dy = p[1] - cy + sy;
          v += std::exp(-(dx * dx + dy * dy) / (2 * width * width));
        }
      }
      return v + offset;
    });
  }
  const double kappa = 1.0 + unit(rng) * (n / 2.0 - 1.0);
  std::vector<Complex> c(grid.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int kx = grid.wavenumber(static_cast<int>(i % static_cast<std::size_t>(n)));
    const int ky = grid.dim() == 2 ? grid.wavenumber(static_cast<int>(i / static_cast<std::size_t>(n))) : 0;
    const double amp = std::exp(-(kx * kx + ky * ky) / (2.0 * kappa * kappa));
    c[i] = Complex(normal(rng), normal(rng)) * amp;
  }
  // real part of the inverse transform is the Hermitian-symmetric projection
  return from_spectral(grid, std::move(c));
}

GNConstant compute_gn_constant(const Grid& grid, const Exponent& q, int restarts, int validation_samples,
                               std::uint64_t seed) {
  const auto gn = gn_from_q(grid.dim(), q);
  GNConstant out;
  out.theta = gn.theta.to_double();
  out.exponent = target_exponent(q);
  out.restarts = restarts;
  std::mt19937_64 rng(seed);
  out.all_ascents_stationary = true;
  auto consider = [&](const ScalarField& start) {
    const auto [ratio, ok] = ascend(start, out.exponent, out.theta);
    if (std::isfinite(ratio) && ratio > out.best_ratio) out.best_ratio = ratio;
    out.all_ascents_stationary = out.all_ascents_stationary && ok;
  };
  out.best_ratio = gn_ratio(ScalarField::constant(grid, 1.0), q);
  for (int k = 0; k < restarts; ++k) consider(random_trial_field(grid, rng));
  out.value = kSafetyFactor * out.best_ratio;
  out.validation_samples = validation_samples;
  for (int k = 0; k < validation_samples; ++k) {
    const ScalarField f = strip_nyquist(random_trial_field(grid, rng));
    if (gn_ratio(f, q) > out.value) ++out.validation_violations;
  }
  return out;
}

const GNConstant& discrete_gn_constant(const Grid& grid, const Exponent& q) {
  using Key = std::tuple<int, int, std::int64_t, std::int64_t, bool>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<GNConstant>> cache;
  const bool inf = q.is_infinite();
  const Key key{grid.dim(), grid.points_per_axis(), inf ? 0 : q.value().num(), inf ? 1 : q.value().den(), inf};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const std::uint64_t seed = 0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(grid.dim()) << 40) ^
                               (static_cast<std::uint64_t>(grid.points_per_axis()) << 20) ^
                               static_cast<std::uint64_t>(std::get<2>(key) * 1000 + std::get<3>(key));
    auto value = std::make_unique<GNConstant>(compute_gn_constant(grid, q, 200, 1000, seed));
    it = cache.emplace(key, std::move(value)).first;
  }
  return *it->second;
}

}  // namespace fplab
