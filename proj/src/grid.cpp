#include "fplab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fplab/spectral.hpp"

namespace fplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

/// Calls fn(flat_index, kx, ky) for every spectral bin; ky = 0 in 1D.
template <typename Fn>
void for_each_mode(const Grid& grid, Fn&& fn) {
  const int n = grid.points_per_axis();
  if (grid.dim() == 1) {
    for (int j = 0; j < n; ++j) fn(static_cast<std::size_t>(j), j, 0);
    return;
  }
  for (int jy = 0; jy < n; ++jy) {
    for (int jx = 0; jx < n; ++jx) fn(static_cast<std::size_t>(jx + n * jy), jx, jy);
  }
}

/// Multiplies the spectrum of f by m(kx_bin, ky_bin) and transforms back.
template <typename Multiplier>
ScalarField apply_multiplier(const ScalarField& f, Multiplier&& m) {
  const Grid& grid = f.grid();
  auto coeffs = to_spectral(f);
  for_each_mode(grid, [&](std::size_t idx, int jx, int jy) { coeffs[idx] *= m(jx, jy); });
  return from_spectral(grid, std::move(coeffs));
}

double squared_wavenumber(const Grid& g, int jx, int jy) {
  const double kx = g.derivative_wavenumber(jx);
  const double ky = g.dim() == 2 ? g.derivative_wavenumber(jy) : 0.0;
  return kx * kx + ky * ky;
}

}  // namespace

Grid::Grid(int dim, int points_per_axis) : dim_(dim), n_(points_per_axis) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
  if (points_per_axis < 4 || (points_per_axis & (points_per_axis - 1)) != 0) {
    throw std::invalid_argument("Grid: points per axis must be a power of two >= 4");
  }
  size_ = dim == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
  weight_ = 1.0 / static_cast<double>(size_);
}

Point Grid::node(std::size_t index) const {
  const double h = spacing();
  if (dim_ == 1) return {static_cast<double>(index) * h, 0.0};
  const auto ix = index % static_cast<std::size_t>(n_);
  const auto iy = index / static_cast<std::size_t>(n_);
  return {static_cast<double>(ix) * h, static_cast<double>(iy) * h};
}

ScalarField::ScalarField(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("ScalarField: size does not match grid");
}

ScalarField ScalarField::constant(const Grid& grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.size(), value));
}

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(const Point&)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i));
  return ScalarField(grid, std::move(v));
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise_product");
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

ScalarField pointwise(const ScalarField& a, const std::function<double(double)>& fn) {
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i]);
  return out;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  if (a.empty() || a.size() != b.size()) throw std::invalid_argument("dot: component count mismatch");
  ScalarField out(a.front().grid());
  for (std::size_t c = 0; c < a.size(); ++c) out += pointwise_product(a[c], b[c]);
  return out;
}

ScalarField positive_part(const ScalarField& f) {
  return pointwise(f, [](double v) { return v > 0.0 ? v : 0.0; });
}

ScalarField negative_part(const ScalarField& f) {
  return pointwise(f, [](double v) { return v < 0.0 ? -v : 0.0; });
}

void Trajectory::push_back(double time, ScalarField field) {
  require_same_grid(grid_, field.grid(), "Trajectory::push_back");
  if (!std::isfinite(time) || time < 0.0) throw std::invalid_argument("Trajectory: time must be finite and >= 0");
  if (!times_.empty() && !(time > times_.back())) {
    throw std::invalid_argument("Trajectory: times must be strictly increasing");
  }
  times_.push_back(time);
  fields_.push_back(std::move(field));
}

std::optional<std::size_t> Trajectory::find_time(double t) const {
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (std::abs(times_[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
  }
  return std::nullopt;
}

double time_integral(const TimeSeries& series, double power) {
  const auto& t = series.times;
  const auto& v = series.values;
  if (t.size() != v.size()) throw std::invalid_argument("time_integral: size mismatch");
  if (t.size() < 2) return 0.0;
  double total = 0.0;
  std::size_t start = 0;
  if (series.leading_power) {
    const double alpha = *series.leading_power * power;
    const double t0 = t[0];
    const double t1 = t[1];
    if (t0 == 0.0 && alpha >= 1.0) throw std::domain_error("time_integral: non-integrable singularity at t = 0");
    if (!std::isfinite(v[1])) throw std::domain_error("time_integral: non-finite sample");
    // v(t)^power = v1^power (t/t1)^{-alpha}
    const double c = std::pow(v[1], power) * std::pow(t1, alpha);
    if (std::abs(1.0 - alpha) < 1e-14) {
      total += c * std::log(t1 / t0);
    } else {
      total += c * (std::pow(t1, 1.0 - alpha) - std::pow(t0, 1.0 - alpha)) / (1.0 - alpha);
    }
    start = 1;
  }
  for (std::size_t k = start; k + 1 < t.size(); ++k) {
    if (!std::isfinite(v[k]) || !std::isfinite(v[k + 1])) {
      throw std::domain_error("time_integral: non-finite sample at index " + std::to_string(k));
    }
    const double a = std::pow(v[k], power);
    const double b = std::pow(v[k + 1], power);
    total += 0.5 * (t[k + 1] - t[k]) * (a + b);
  }
  return total;
}

double time_lr_norm(const TimeSeries& series, double r) {
  if (series.values.empty()) throw std::invalid_argument("time_lr_norm: empty series");
  if (r < 1.0) throw std::invalid_argument("time_lr_norm: r must be >= 1");
  if (std::isinf(r)) return *std::max_element(series.values.begin(), series.values.end());
  return std::pow(time_integral(series, r), 1.0 / r);
}

double integral(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().quadrature_weight();
}

double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.grid().quadrature_weight();
}

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  // Scale by the max to keep large p from overflowing.
  const double scale = lp_norm(f, std::numeric_limits<double>::infinity());
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(s * f.grid().quadrature_weight(), 1.0 / p);
}

TimeSeries spatial_norm_series(const Trajectory& traj, double q) {
  TimeSeries series;
  series.times = traj.times();
  series.values.reserve(traj.size());
  for (const auto& f : traj.fields()) series.values.push_back(lp_norm(f, q));
  return series;
}

double mixed_norm(const Trajectory& traj, double q, double r) {
  if (traj.empty()) throw std::invalid_argument("mixed_norm: empty trajectory");
  return time_lr_norm(spatial_norm_series(traj, q), r);
}

double spectral_energy(const ScalarField& f) {
  const auto coeffs = to_spectral(f);
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  const double n = static_cast<double>(f.size());
  return s / (n * n);
}

std::vector<Complex> to_spectral(const ScalarField& f) {
  return SpectralTransform::for_grid(f.grid()).forward(f.values());
}

ScalarField from_spectral(const Grid& grid, std::vector<Complex> coeffs) {
  if (coeffs.size() != grid.size()) throw std::invalid_argument("from_spectral: size mismatch");
  return ScalarField(grid, SpectralTransform::for_grid(grid).inverse(std::move(coeffs)));
}

VectorField gradient(const ScalarField& f) {
  const Grid& grid = f.grid();
  const auto coeffs = to_spectral(f);
  VectorField out;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    auto d = coeffs;
    for_each_mode(grid, [&](std::size_t idx, int jx, int jy) {
      const int k = grid.derivative_wavenumber(axis == 0 ? jx : jy);
      d[idx] *= Complex(0.0, kTwoPi * k);
    });
    out.push_back(from_spectral(grid, std::move(d)));
  }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](int jx, int jy) { return -kTwoPi * kTwoPi * squared_wavenumber(g, jx, jy); });
}

ScalarField divergence(const VectorField& v) {
  if (v.empty()) throw std::invalid_argument("divergence: empty vector field");
  const Grid& grid = v.front().grid();
  if (static_cast<int>(v.size()) != grid.dim()) throw std::invalid_argument("divergence: component count != dim");
  std::vector<Complex> total(grid.size(), Complex(0.0, 0.0));
  for (int axis = 0; axis < grid.dim(); ++axis) {
    require_same_grid(grid, v[axis].grid(), "divergence");
    const auto c = to_spectral(v[axis]);
    for_each_mode(grid, [&](std::size_t idx, int jx, int jy) {
      const int k = grid.derivative_wavenumber(axis == 0 ? jx : jy);
      total[idx] += c[idx] * Complex(0.0, kTwoPi * k);
    });
  }
  return from_spectral(grid, std::move(total));
}

std::vector<ScalarField> hessian(const ScalarField& f) {
  const Grid& grid = f.grid();
  const auto coeffs = to_spectral(f);
  const int d = grid.dim();
  std::vector<ScalarField> out;
  out.reserve(static_cast<std::size_t>(d * d));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      auto c = coeffs;
      for_each_mode(grid, [&](std::size_t idx, int jx, int jy) {
        const double ka = grid.derivative_wavenumber(a == 0 ? jx : jy);
        const double kb = grid.derivative_wavenumber(b == 0 ? jx : jy);
        c[idx] *= -kTwoPi * kTwoPi * ka * kb;
      });
      out.push_back(from_spectral(grid, std::move(c)));
    }
  }
  return out;
}

ScalarField max_hessian_eigenvalue(const ScalarField& f) {
  const auto h = hessian(f);
  if (f.grid().dim() == 1) return h[0];
  ScalarField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = h[0][i];
    const double b = 0.5 * (h[1][i] + h[2][i]);
    const double c = h[3][i];
    out[i] = 0.5 * (a + c) + std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  }
  return out;
}

ScalarField dealias(const ScalarField& f) {
  const Grid& g = f.grid();
  const int cutoff = g.dealias_cutoff();
  const int nyq = g.points_per_axis() / 2;
  return apply_multiplier(f, [&](int jx, int jy) {
    const bool keep_x = jx != nyq && std::abs(g.wavenumber(jx)) <= cutoff;
    const bool keep_y = g.dim() == 1 || (jy != nyq && std::abs(g.wavenumber(jy)) <= cutoff);
    return keep_x && keep_y ? 1.0 : 0.0;
  });
}

ScalarField solve_helmholtz(const ScalarField& f, double c) {
  if (c < 0.0) throw std::invalid_argument("solve_helmholtz: c must be >= 0");
  if (c == 0.0) return f;
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](int jx, int jy) {
    return 1.0 / (1.0 + c * kTwoPi * kTwoPi * squared_wavenumber(g, jx, jy));
  });
}

ScalarField apply_identity_plus_laplacian(const ScalarField& f, double c) {
  if (c == 0.0) return f;
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](int jx, int jy) { return 1.0 - c * kTwoPi * kTwoPi * squared_wavenumber(g, jx, jy); });
}

bool is_band_limited(const ScalarField& f, double tol) {
  const Grid& g = f.grid();
  const auto coeffs = to_spectral(f);
  const int cutoff = g.dealias_cutoff();
  const int nyq = g.points_per_axis() / 2;
  double total = 0.0;
  double outside = 0.0;
  for_each_mode(g, [&](std::size_t idx, int jx, int jy) {
    const double a = std::abs(coeffs[idx]);
    total = std::max(total, a);
    const bool in_x = jx != nyq && std::abs(g.wavenumber(jx)) <= cutoff;
    const bool in_y = g.dim() == 1 || (jy != nyq && std::abs(g.wavenumber(jy)) <= cutoff);
    if (!(in_x && in_y)) outside = std::max(outside, a);
  });
  return outside <= tol * std::max(total, 1e-300);
}

}  // namespace fplab
