#pragma once

// Periodic Fourier discretization of the unit torus in one or two
// dimensions, spectral calculus, and the spatial / space-time norms used
// by the estimate checks.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fplab {

using Point = std::array<double, 2>;
using Complex = std::complex<double>;

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform grid on [0,1)^dim with N points per axis, N a power of two.
class Grid {
 public:
  Grid(int dim, int points_per_axis);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int points_per_axis() const { return n_; }
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] double spacing() const { return 1.0 / n_; }
  [[nodiscard]] double quadrature_weight() const { return weight_; }

  /// Node coordinates for flat index ix + N*iy (x fastest).
  [[nodiscard]] Point node(std::size_t index) const;

  /// Signed integer frequency of FFT bin j (Nyquist reported as +N/2).
  [[nodiscard]] int wavenumber(int j) const { return j <= n_ / 2 ? j : j - n_; }
  /// Frequency used by odd-order derivatives (Nyquist bin mapped to 0).
  [[nodiscard]] int derivative_wavenumber(int j) const { return j == n_ / 2 ? 0 : wavenumber(j); }
  /// Largest |k| per axis kept by the 2/3 rule.
  [[nodiscard]] int dealias_cutoff() const { return n_ / 3; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dim_;
  int n_;
  std::size_t size_;
  double weight_;
};

/// Real-valued grid function.
class ScalarField {
 public:
  explicit ScalarField(Grid grid);
  ScalarField(Grid grid, std::vector<double> values);

  static ScalarField constant(const Grid& grid, double value);
  static ScalarField sample(const Grid& grid, const std::function<double(const Point&)>& fn);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  [[nodiscard]] bool all_finite() const;
  [[nodiscard]] double max() const;
  [[nodiscard]] double min() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(ScalarField a, double s) { return a *= s; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

using VectorField = std::vector<ScalarField>;

/// Pointwise product without dealiasing.
ScalarField pointwise_product(const ScalarField& a, const ScalarField& b);
ScalarField pointwise(const ScalarField& a, const std::function<double(double)>& fn);
/// Sum_i a_i b_i pointwise.
ScalarField dot(const VectorField& a, const VectorField& b);
ScalarField positive_part(const ScalarField& f);
ScalarField negative_part(const ScalarField& f);

/// Time-indexed snapshots on a shared grid with strictly increasing times.
class Trajectory {
 public:
  explicit Trajectory(Grid grid) : grid_(grid) {}

  void push_back(double time, ScalarField field);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] std::size_t size() const { return times_.size(); }
  [[nodiscard]] bool empty() const { return times_.empty(); }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const std::vector<ScalarField>& fields() const { return fields_; }
  [[nodiscard]] const ScalarField& field(std::size_t i) const { return fields_.at(i); }
  [[nodiscard]] double time(std::size_t i) const { return times_.at(i); }
  [[nodiscard]] const ScalarField& back() const { return fields_.back(); }
  /// Index of the sample whose time matches t within 1e-12 relative.
  [[nodiscard]] std::optional<std::size_t> find_time(double t) const;

 private:
  Grid grid_;
  std::vector<double> times_;
  std::vector<ScalarField> fields_;
};

/// A sampled nonnegative function of time. `leading_power`, when set, states
/// that v(t) ~ c t^{-alpha} on the first interval, where the sample at t_0
/// may be infinite; that interval is then integrated in closed form.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::optional<double> leading_power;
};

/// Integral over the series' time range of v(t)^power (trapezoid rule).
/// Throws std::domain_error when the integral diverges.
double time_integral(const TimeSeries& series, double power = 1.0);
/// Temporal L^r norm of the series; sup over samples for r = inf.
double time_lr_norm(const TimeSeries& series, double r);

// --- norms and quadrature -------------------------------------------------

double integral(const ScalarField& f);
double inner(const ScalarField& f, const ScalarField& g);
/// (sum |f_i|^p h^dim)^{1/p}; max |f_i| for p = inf. Throws for p < 1.
double lp_norm(const ScalarField& f, double p);
/// ||f(t)||_{L^q_x} sampled on the trajectory times.
TimeSeries spatial_norm_series(const Trajectory& traj, double q);
/// Temporal L^r (trapezoid) of t -> ||f(t)||_q; sup over samples for r = inf.
double mixed_norm(const Trajectory& traj, double q, double r);
/// Sum |f_hat(k)|^2 with the unitary normalization (Parseval side).
double spectral_energy(const ScalarField& f);

// --- spectral calculus ----------------------------------------------------

std::vector<Complex> to_spectral(const ScalarField& f);
ScalarField from_spectral(const Grid& grid, std::vector<Complex> coeffs);

VectorField gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
ScalarField divergence(const VectorField& v);
/// Row-major dim x dim second derivatives.
std::vector<ScalarField> hessian(const ScalarField& f);
/// Largest eigenvalue of the spectral Hessian at each node.
ScalarField max_hessian_eigenvalue(const ScalarField& f);
/// Zeroes every mode with |k_axis| > N/3 and the Nyquist bins.
ScalarField dealias(const ScalarField& f);
/// Exact solve of (I - c Laplacian) u = f, c >= 0.
ScalarField solve_helmholtz(const ScalarField& f, double c);
/// (I + c Laplacian) f.
ScalarField apply_identity_plus_laplacian(const ScalarField& f, double c);
/// True when every mode outside the 2/3 band vanishes to `tol` (relative).
bool is_band_limited(const ScalarField& f, double tol = 1e-12);

}  // namespace fplab
