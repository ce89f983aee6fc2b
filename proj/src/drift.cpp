#include "fplab/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phase(const TrigMode& m, const Point& x) { return kTwoPi * (m.kx * x[0] + m.ky * x[1]); }

/// sup |D psi| sampled on a fine grid.
double max_gradient(const TrigProfile& psi, int dim) {
  const Grid fine(dim, dim == 1 ? 512 : 128);
  double m = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const Point g = psi.gradient(fine.node(i));
    m = std::max(m, std::hypot(g[0], g[1]));
  }
  return m;
}

DriftTerm steady_term(std::function<Point(const Point&)> v, std::function<double(const Point&)> div) {
  return {[](double) { return 1.0; }, std::move(v), std::move(div)};
}

}  // namespace

double TrigProfile::value(const Point& x) const {
  double s = 0.0;
  for (const auto& m : modes_) {
    const double ph = phase(m, x);
    s += m.a_cos * std::cos(ph) + m.a_sin * std::sin(ph);
  }
  return s;
}

Point TrigProfile::gradient(const Point& x) const {
  Point g{0.0, 0.0};
  for (const auto& m : modes_) {
    const double ph = phase(m, x);
    const double d = kTwoPi * (-m.a_cos * std::sin(ph) + m.a_sin * std::cos(ph));
    g[0] += m.kx * d;
    g[1] += m.ky * d;
  }
  return g;
}

double TrigProfile::laplacian(const Point& x) const {
  double s = 0.0;
  for (const auto& m : modes_) {
    const double ph = phase(m, x);
    const double k2 = kTwoPi * kTwoPi * (m.kx * m.kx + m.ky * m.ky);
    s -= k2 * (m.a_cos * std::cos(ph) + m.a_sin * std::sin(ph));
  }
  return s;
}

int TrigProfile::max_wavenumber() const {
  int k = 0;
  for (const auto& m : modes_) k = std::max({k, std::abs(m.kx), std::abs(m.ky)});
  return k;
}

TrigProfile TrigProfile::scaled(double s) const {
  auto modes = modes_;
  for (auto& m : modes) {
    m.a_cos *= s;
    m.a_sin *= s;
  }
  return TrigProfile(std::move(modes));
}

TrigProfile TrigProfile::inverse_laplacian() const {
  auto modes = modes_;
  for (auto& m : modes) {
    const double k2 = kTwoPi * kTwoPi * (m.kx * m.kx + m.ky * m.ky);
    if (k2 == 0.0) throw std::domain_error("inverse_laplacian: profile has a mean");
    m.a_cos /= -k2;
    m.a_sin /= -k2;
  }
  return TrigProfile(std::move(modes));
}

TrigProfile random_profile(int dim, int kmax, double mollifier, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<TrigMode> modes;
  for (int ky = 0; ky <= (dim == 2 ? kmax : 0); ++ky) {
    for (int kx = -kmax; kx <= kmax; ++kx) {
      if (ky == 0 && kx <= 0) continue;  // one representative per +-k pair
      const double k2 = kx * kx + ky * ky;
      if (k2 > kmax * kmax) continue;
      const double damp = std::exp(-0.5 * kTwoPi * kTwoPi * k2 * mollifier * mollifier);
      const double a = normal(rng) * damp;
      const double b = normal(rng) * damp;
      modes.push_back({kx, ky, a, b});
    }
  }
  return TrigProfile(std::move(modes));
}

TrigProfile one_sided_bump(int sharpness, double center) {
  if (sharpness < 1) throw std::invalid_argument("one_sided_bump: sharpness must be >= 1");
  const int m = sharpness;
  // ((1+cos y)/2)^m = 4^{-m} [C(2m,m) + 2 sum_k C(2m,m-k) cos(k y)]
  std::vector<double> binom(2 * m + 1, 1.0);
  for (int j = 1; j <= 2 * m; ++j) binom[j] = binom[j - 1] * (2.0 * m - j + 1) / j;
  const double scale = std::pow(4.0, -m);
  const double mean = scale * binom[m];
  std::vector<TrigMode> modes;
  for (int k = 1; k <= m; ++k) {
    const double c = 2.0 * scale * binom[m - k] / (1.0 - mean);
    // cos(2 pi k (x - c0)) = cos(2 pi k x) cos(2 pi k c0) + sin(2 pi k x) sin(2 pi k c0)
    modes.push_back({k, 0, c * std::cos(kTwoPi * k * center), c * std::sin(kTwoPi * k * center)});
  }
  return TrigProfile(std::move(modes));
}

DriftSpec::DriftSpec(std::string kind, int dim, std::vector<DriftTerm> terms, DriftTags tags,
                     std::map<std::string, double> params)
    : kind_(std::move(kind)), dim_(dim), terms_(std::move(terms)), tags_(std::move(tags)), params_(std::move(params)) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("DriftSpec: dim must be 1 or 2");
  validation_ = validate();
  if (!validation_.passed) throw std::logic_error("DriftSpec '" + kind_ + "' failed its class-tag validation");
}

Point DriftSpec::velocity(const Point& x, double t) const {
  Point v{0.0, 0.0};
  for (const auto& term : terms_) {
    const double a = term.time_factor(t);
    const Point w = term.velocity(x);
    v[0] += a * w[0];
    v[1] += a * w[1];
  }
  return v;
}

double DriftSpec::divergence(const Point& x, double t) const {
  double d = 0.0;
  for (const auto& term : terms_) d += term.time_factor(t) * term.divergence(x);
  return d;
}

VectorField DriftSpec::sample(const Grid& grid, double t) const { return SampledDrift(*this, grid).at(t); }

ScalarField DriftSpec::sample_divergence(const Grid& grid, double t) const {
  return SampledDrift(*this, grid).divergence_at(t);
}

double DriftSpec::divergence_norm(double t) const {
  if (!tags_.divb_lrlq) throw std::logic_error("divergence_norm: drift is not tagged divb_LrLq");
  const auto& tag = *tags_.divb_lrlq;
  return std::pow(t, -tag.time_power) * tag.spatial_norm;
}

double DriftSpec::closed_form_mixed_norm(double t_end) const {
  if (!tags_.divb_lrlq) throw std::logic_error("closed_form_mixed_norm: drift is not tagged divb_LrLq");
  const auto& tag = *tags_.divb_lrlq;
  if (tag.r.is_infinite()) {
    return tag.time_power > 0.0 ? std::numeric_limits<double>::infinity() : tag.spatial_norm;
  }
  const double r = tag.r.to_double();
  const double e = 1.0 - tag.time_power * r;
  if (e <= 0.0) return std::numeric_limits<double>::infinity();
  return tag.spatial_norm * std::pow(std::pow(t_end, e) / e, 1.0 / r);
}

DriftValidation DriftSpec::validate() const {
  DriftValidation out;
  const Grid grid(dim_, 128);
  const SampledDrift sampled(*this, grid);
  out.validation_points = static_cast<int>(grid.size());
  out.time_samples = 64;
  out.passed = true;
  for (int k = 0; k < out.time_samples; ++k) {
    const double t = 1e-4 * std::pow(1e4, k / (out.time_samples - 1.0));
    const ScalarField closed = sampled.divergence_at(t);
    const ScalarField spectral = fplab::divergence(sampled.at(t));
    const double scale = std::max(1.0, lp_norm(closed, std::numeric_limits<double>::infinity()));
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(closed[i] - spectral[i]));
    out.max_divergence_error = std::max(out.max_divergence_error, err / scale);
    if (tags_.divergence_free && err > 1e-8) out.passed = false;
    if (tags_.one_sided) {
      const double bound = tags_.one_sided->c1 / t + tags_.one_sided->c2;
      const double neg = negative_part(closed).max();
      const double excess = (neg - bound) / std::max(1.0, bound);
      out.one_sided_excess = k == 0 ? excess : std::max(out.one_sided_excess, excess);
      if (excess > 1e-8) out.passed = false;
    }
  }
  if (out.max_divergence_error > 1e-8) out.passed = false;
  return out;
}

SampledDrift::SampledDrift(const DriftSpec& spec, const Grid& grid) : grid_(grid) {
  if (spec.dim() != grid.dim()) throw std::invalid_argument("SampledDrift: dimension mismatch");
  for (const auto& term : spec.terms()) {
    Term t{term.time_factor, VectorField(grid.dim(), ScalarField(grid)), ScalarField(grid)};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point x = grid.node(i);
      const Point v = term.velocity(x);
      for (int c = 0; c < grid.dim(); ++c) t.velocity[c][i] = v[c];
      t.divergence[i] = term.divergence(x);
    }
    terms_.push_back(std::move(t));
  }
}

VectorField SampledDrift::at(double t) const {
  VectorField out(grid_.dim(), ScalarField(grid_));
  for (const auto& term : terms_) {
    const double a = term.time_factor(t);
    for (int c = 0; c < grid_.dim(); ++c) out[c] += a * term.velocity[c];
  }
  return out;
}

ScalarField SampledDrift::divergence_at(double t) const {
  ScalarField out(grid_);
  for (const auto& term : terms_) out += term.time_factor(t) * term.divergence;
  return out;
}

double SampledDrift::max_speed(double t) const {
  const VectorField b = at(t);
  double m = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double s = grid_.dim() == 1 ? std::abs(b[0][i]) : std::hypot(b[0][i], b[1][i]);
    m = std::max(m, s);
  }
  return m;
}

DriftSpec make_constant_drift(int dim, Point velocity) {
  if (dim == 1) velocity[1] = 0.0;
  DriftTags tags;
  tags.divergence_free = true;
  tags.bounded = true;
  return DriftSpec("constant", dim, {steady_term([velocity](const Point&) { return velocity; },
                                                 [](const Point&) { return 0.0; })},
                   tags, {{"vx", velocity[0]}, {"vy", velocity[1]}});
}

DriftSpec make_stream_function_drift(TrigProfile psi, double amplitude) {
  const TrigProfile p = psi.scaled(amplitude);
  DriftTags tags;
  tags.divergence_free = true;
  tags.bounded = true;
  return DriftSpec("stream_function", 2,
                   {steady_term(
                       [p](const Point& x) {
                         const Point g = p.gradient(x);
                         return Point{g[1], -g[0]};
                       },
                       [](const Point&) { return 0.0; })},
                   tags, {{"amplitude", amplitude}});
}

DriftSpec make_divfree_drift(const Grid& grid, std::uint64_t seed, double amplitude) {
  if (grid.dim() == 1) return make_constant_drift(1, {amplitude, 0.0});
  std::mt19937_64 rng(seed);
  const TrigProfile psi = random_profile(2, 3, 4.0 * grid.spacing(), rng);
  const double g = max_gradient(psi, 2);
  auto spec = make_stream_function_drift(psi.scaled(1.0 / g), amplitude);
  return spec;
}

DriftSpec make_LrLq_drift(const Grid& grid, const Exponent& q, const Exponent& r, double margin,
                          std::uint64_t seed, const LrLqOptions& opts) {
  const auto adm = check_divb_admissible({grid.dim(), q, r});
  if (!adm.admissible) throw InadmissibleExponent("make_LrLq_drift: " + adm.diagnostic);
  if (!(margin >= 0.0 && margin < 1.0)) throw std::invalid_argument("make_LrLq_drift: margin must lie in [0,1)");
  std::mt19937_64 rng(seed);
  TrigProfile psi = random_profile(grid.dim(), opts.max_mode, 4.0 * grid.spacing(), rng);
  psi = psi.scaled(opts.amplitude / max_gradient(psi, grid.dim()));
  const double alpha = opts.autonomous ? 0.0 : (1.0 - margin) * r.reciprocal().to_double();

  LrLqTag tag{q, r, margin, alpha, 0.0};
  const ScalarField lap = ScalarField::sample(grid, [&](const Point& x) { return psi.laplacian(x); });
  tag.spatial_norm = lp_norm(lap, q.to_double());

  DriftTags tags;
  tags.divb_lrlq = tag;
  DriftTerm term{[alpha](double t) { return alpha == 0.0 ? 1.0 : std::pow(t, -alpha); },
                 [psi](const Point& x) { return psi.gradient(x); },
                 [psi](const Point& x) { return psi.laplacian(x); }};
  return DriftSpec("divb_LrLq", grid.dim(), {std::move(term)}, tags,
                   {{"q", q.to_double()},
                    {"r", r.to_double()},
                    {"margin", margin},
                    {"time_power", alpha},
                    {"amplitude", opts.amplitude},
                    {"seed", static_cast<double>(seed)},
                    {"divb_spatial_norm", tag.spatial_norm}});
}

DriftSpec make_one_sided_singular_drift(const Grid& grid, double c1, double c2, std::uint64_t seed,
                                        const OneSidedOptions& opts) {
  if (grid.dim() != 1) throw std::invalid_argument("make_one_sided_singular_drift: 1D only");
  if (!(c1 >= 0.0)) throw std::invalid_argument("make_one_sided_singular_drift: c1 must be >= 0");
  std::mt19937_64 rng(seed);
  const double center = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::vector<DriftTerm> terms;
  auto bump_term = [&](std::function<double(double)> a, double c) {
    const TrigProfile chi = one_sided_bump(opts.sharpness, c);
    const TrigProfile phi = chi.inverse_laplacian();
    terms.push_back({std::move(a), [phi](const Point& x) { return phi.gradient(x); },
                     [chi](const Point& x) { return chi.value(x); }});
  };
  if (c1 != 0.0) bump_term([c1](double t) { return -c1 / t; }, center);
  if (c2 != 0.0) bump_term([c2](double) { return -c2; }, std::fmod(center + 0.5, 1.0));
  if (opts.background_speed != 0.0) {
    const double s = opts.background_speed;
    terms.push_back(steady_term([s](const Point&) { return Point{s, 0.0}; }, [](const Point&) { return 0.0; }));
  }
  DriftTags tags;
  tags.one_sided = OneSidedTag{c1, std::max(c2, 0.0)};
  tags.divergence_free = c1 == 0.0 && c2 == 0.0;
  tags.bounded = c1 == 0.0;
  return DriftSpec("one_sided_1_over_t", 1, std::move(terms), tags,
                   {{"c1", c1},
                    {"c2", c2},
                    {"center", center},
                    {"sharpness", opts.sharpness},
                    {"background_speed", opts.background_speed},
                    {"seed", static_cast<double>(seed)}});
}

}  // namespace fplab
