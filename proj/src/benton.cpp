#include "fplab/benton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fplab {

double benton_u1(double, double) { return 0.0; }
double benton_u2(double x, double t) { return std::abs(x) + t; }
double benton_u3(double x, double t) { return std::max(t - std::abs(x), 0.0); }

namespace {

using Fn = double (*)(double, double);

// Residual by centred differences, skipping nodes within two cells of a kink.
double residual_off_kinks(Fn u, const std::vector<double>& kinks, double t, double h) {
  const double dt = 1e-3 * h;
  double worst = 0.0;
  const int points = static_cast<int>(std::lround(2.0 / h));
  for (int i = 0; i < points; ++i) {
    const double x = -1.0 + i * h;
    bool near = false;
    for (double k : kinks) near = near || std::abs(x - k) < 2.0 * h;
    if (near) continue;
    const double ut = (u(x, t + dt) - u(x, t - dt)) / (2.0 * dt);
    const double ux = (u(x + h, t) - u(x - h, t)) / (2.0 * h);
    worst = std::max(worst, std::abs(-ut + ux * ux));
  }
  return worst;
}

double max_second_difference(Fn u, double t, int points) {
  const double h = 2.0 / points;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double x = -1.0 + i * h;
    worst = std::max(worst, (u(x + h, t) - 2.0 * u(x, t) + u(x - h, t)) / (h * h));
  }
  return worst;
}

}  // namespace

BentonReport benton_demo(double time, const std::vector<int>& points) {
  if (!(time > 0.0 && time < 1.0)) throw std::invalid_argument("benton_demo: time must lie in (0,1)");
  if (points.size() < 2) throw std::invalid_argument("benton_demo: need at least two resolutions");
  BentonReport r;
  r.time = time;
  const int n = points.back();
  const double h = 2.0 / n;
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + i * h;
    r.initial_distance = std::max(r.initial_distance, std::abs(benton_u3(x, 0.0) - benton_u1(x, 0.0)));
    r.sup_distance = std::max(r.sup_distance, std::abs(benton_u3(x, time) - benton_u1(x, time)));
  }
  const double hr = 2.0 / points.front();
  r.residual_u1 = residual_off_kinks(benton_u1, {}, time, hr);
  r.residual_u2 = residual_off_kinks(benton_u2, {0.0}, time, hr);
  r.residual_u3 = residual_off_kinks(benton_u3, {-time, 0.0, time}, time, hr);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int p : points) {
    const double hp = 2.0 / p;
    const double lap = max_second_difference(benton_u3, time, p);
    r.spacings.push_back(hp);
    r.kink_laplacian.push_back(lap);
    const double lx = std::log(hp);
    const double ly = std::log(lap);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(points.size());
  r.kink_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  r.u1_laplacian = std::abs(max_second_difference(benton_u1, time, n));
  r.passed = r.initial_distance == 0.0 && r.sup_distance >= 0.4 && r.kink_slope >= -1.1 && r.kink_slope <= -0.9 &&
             std::max({r.residual_u1, r.residual_u2, r.residual_u3}) <= 1e-8 && r.u1_laplacian == 0.0;
  return r;
}

}  // namespace fplab
