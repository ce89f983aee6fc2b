#pragma once

// Analytic, time-dependent drift fields with closed-form divergence.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fplab/exponents.hpp"
#include "fplab/grid.hpp"

namespace fplab {

/// Real trigonometric polynomial sum_k a_k cos(2 pi k.x) + b_k sin(2 pi k.x).
struct TrigMode {
  int kx = 0;
  int ky = 0;
  double a_cos = 0.0;
  double a_sin = 0.0;
};

class TrigProfile {
 public:
  TrigProfile() = default;
  explicit TrigProfile(std::vector<TrigMode> modes) : modes_(std::move(modes)) {}

  [[nodiscard]] double value(const Point& x) const;
  [[nodiscard]] Point gradient(const Point& x) const;
  [[nodiscard]] double laplacian(const Point& x) const;
  [[nodiscard]] const std::vector<TrigMode>& modes() const { return modes_; }
  [[nodiscard]] int max_wavenumber() const;
  [[nodiscard]] TrigProfile scaled(double s) const;
  /// Profile whose Laplacian is this one; throws if a k = 0 mode is present.
  [[nodiscard]] TrigProfile inverse_laplacian() const;

 private:
  std::vector<TrigMode> modes_;
};

/// Smooth random profile with modes |k| <= kmax, each damped by
/// exp(-(2 pi |k| mollifier)^2 / 2).
TrigProfile random_profile(int dim, int kmax, double mollifier, std::mt19937_64& rng);

/// One separable contribution a(t) V(x) to a drift.
struct DriftTerm {
  std::function<double(double)> time_factor;
  std::function<Point(const Point&)> velocity;
  std::function<double(const Point&)> divergence;
};

struct LrLqTag {
  Exponent q = Exponent(1);
  Exponent r = Exponent(1);
  double margin = 0.0;
  /// Singular power alpha in a(t) = t^{-alpha}.
  double time_power = 0.0;
  /// ||div b(t)||_q = time factor * spatial_norm.
  double spatial_norm = 0.0;
};

struct OneSidedTag {
  double c1 = 0.0;
  double c2 = 0.0;
};

struct DriftTags {
  bool divergence_free = false;
  bool bounded = false;
  std::optional<LrLqTag> divb_lrlq;
  std::optional<OneSidedTag> one_sided;
};

struct DriftValidation {
  int validation_points = 0;
  int time_samples = 0;
  double max_divergence_error = 0.0;
  /// max over samples of [div b]^- - (c1/t + c2); only for one-sided drifts.
  double one_sided_excess = 0.0;
  bool passed = false;
};

class DriftSpec {
 public:
  DriftSpec(std::string kind, int dim, std::vector<DriftTerm> terms, DriftTags tags,
            std::map<std::string, double> params);

  [[nodiscard]] const std::string& kind() const { return kind_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const DriftTags& tags() const { return tags_; }
  [[nodiscard]] const std::map<std::string, double>& params() const { return params_; }
  [[nodiscard]] const std::vector<DriftTerm>& terms() const { return terms_; }
  [[nodiscard]] const DriftValidation& validation() const { return validation_; }

  [[nodiscard]] Point velocity(const Point& x, double t) const;
  [[nodiscard]] double divergence(const Point& x, double t) const;
  [[nodiscard]] VectorField sample(const Grid& grid, double t) const;
  [[nodiscard]] ScalarField sample_divergence(const Grid& grid, double t) const;

  /// ||div b(t)||_q from the closed form; requires the divb_LrLq tag.
  [[nodiscard]] double divergence_norm(double t) const;
  /// Closed-form ||div b||_{L^r(0,T; L^q)}; requires the divb_LrLq tag.
  [[nodiscard]] double closed_form_mixed_norm(double t_end) const;

  /// Checks the closed-form divergence against the spectral divergence of
  /// the sampled components and the one-sided bound, on an N=128 grid at
  /// 64 geometric time samples in [1e-4, 1].
  [[nodiscard]] DriftValidation validate() const;

 private:
  std::string kind_;
  int dim_;
  std::vector<DriftTerm> terms_;
  DriftTags tags_;
  std::map<std::string, double> params_;
  DriftValidation validation_;
};

/// Precomputed spatial samples of every term; b(t) is then a cheap sum.
class SampledDrift {
 public:
  SampledDrift(const DriftSpec& spec, const Grid& grid);

  [[nodiscard]] VectorField at(double t) const;
  [[nodiscard]] ScalarField divergence_at(double t) const;
  [[nodiscard]] double max_speed(double t) const;
  [[nodiscard]] const Grid& grid() const { return grid_; }

 private:
  struct Term {
    std::function<double(double)> time_factor;
    VectorField velocity;
    ScalarField divergence;
  };
  Grid grid_;
  std::vector<Term> terms_;
};

/// Divergence-free control drift: a random stream function in 2D, a
/// constant velocity in 1D.
DriftSpec make_divfree_drift(const Grid& grid, std::uint64_t seed, double amplitude);
/// b = amplitude (d_y psi, -d_x psi) for a given stream function (2D only).
DriftSpec make_stream_function_drift(TrigProfile psi, double amplitude);
DriftSpec make_constant_drift(int dim, Point velocity);

struct LrLqOptions {
  double amplitude = 0.3;   // sup |D psi|
  int max_mode = 3;
  bool autonomous = false;  // a(t) = 1
};

/// b = a(t) D psi with a(t) = t^{-(1-margin)/r}; div b = a(t) Laplacian(psi).
DriftSpec make_LrLq_drift(const Grid& grid, const Exponent& q, const Exponent& r, double margin,
                          std::uint64_t seed, const LrLqOptions& opts = {});

struct OneSidedOptions {
  int sharpness = 16;           // power m in the bump profile
  double background_speed = 0;  // additional constant velocity
};

/// 1D drift b = -(c1/t) D Phi1 - c2 D Phi2 (+ constant), Laplacian(Phi_i) = chi_i
/// where chi_i is a zero-mean bump with max 1 at its centre. The centre of chi1
/// is drawn from the seed and stored as param "center"; chi2 is centred
/// half a period away.
DriftSpec make_one_sided_singular_drift(const Grid& grid, double c1, double c2, std::uint64_t seed,
                                        const OneSidedOptions& opts = {});

/// Zero-mean bump chi(x) = (E(x-c) - mean E)/(1 - mean E), E = ((1+cos 2 pi x)/2)^m.
TrigProfile one_sided_bump(int sharpness, double center);

}  // namespace fplab
