#include "fplab/checks_section4.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fplab/exponents.hpp"
#include "fplab/gn_constant.hpp"
#include "fplab/linearized_drift.hpp"

namespace fplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double data_norm(const HjData& first, const HjData& second, double p) {
  return lp_norm(dealias(first.terminal - second.terminal), p);
}

// S_k = int_{t_k}^{T} v dt by the trapezoid rule.
std::vector<double> suffix_integrals(const TimeSeries& s) {
  std::vector<double> out(s.times.size(), 0.0);
  for (std::size_t k = s.times.size() - 1; k-- > 0;) {
    out[k] = out[k + 1] + 0.5 * (s.times[k + 1] - s.times[k]) * (s.values[k] + s.values[k + 1]);
  }
  return out;
}

TimeSeries positive_values(TimeSeries s) {
  for (auto& v : s.values) v = std::max(v, 0.0);
  return s;
}

// Largest time-local gap lhs_k - rhs_k, returned as (lhs, rhs).
struct Worst {
  double gap = -kInf;
  double lhs = 0.0;
  double rhs = 0.0;
  void add(double l, double r) {
    if (l - r > gap) {
      gap = l - r;
      lhs = l;
      rhs = r;
    }
  }
};

// Contraction bound when f1 = f2, else exp(int_t^T F)(||g1-g2||_inf + 1).
Worst linf_conclusion(const Trajectory& w, const TimeSeries& f_sup, double data, bool equal_sources) {
  const auto tail = suffix_integrals(f_sup);
  Worst worst;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double rhs = equal_sources ? data : std::exp(tail[k]) * (data + 1.0);
    worst.add(lp_norm(w.field(k), kInf), rhs);
  }
  return worst;
}

bool sources_equal(const TimeSeries& f_sup) {
  return std::all_of(f_sup.values.begin(), f_sup.values.end(), [](double v) { return v == 0.0; });
}

double max_of(const TimeSeries& s) {
  double m = -kInf;
  for (double v : s.values) m = std::max(m, v);
  return m;
}

double max_gradient_norm(const Trajectory& u) {
  double m = 0.0;
  for (const auto& f : u.fields()) {
    const VectorField d = gradient(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Point p = point_at(d, i);
      m = std::max(m, std::hypot(p[0], p[1]));
    }
  }
  return m;
}

double max_hessian_eig_sym(const Hessian2& a, int dim) {
  if (dim == 1) return a[0];
  const double tr = a[0] + a[3];
  const double det = a[0] * a[3] - a[1] * a[2];
  return 0.5 * tr + std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
}

// Largest eigenvalue of D2_pH along the segments between Du1 and Du2.
double measured_ellipticity(const AdjointPairResult& res, const Hamiltonian& h, const QuadratureRule& rule) {
  const int dim = res.u1.grid().dim();
  double m = -kInf;
  for (std::size_t k = 0; k < res.u1.size(); ++k) {
    const VectorField d1 = gradient(res.u1.field(k));
    const VectorField d2 = gradient(res.u2.field(k));
    for (std::size_t i = 0; i < res.u1.grid().size(); ++i) {
      const Point a = point_at(d1, i);
      const Point b = point_at(d2, i);
      for (double th : rule.nodes) {
        const Point p{th * a[0] + (1 - th) * b[0], th * a[1] + (1 - th) * b[1]};
        m = std::max(m, max_hessian_eig_sym(h.hessian(p), dim));
      }
    }
  }
  return m;
}

}  // namespace

TimeSeries source_difference_series(const Trajectory& w, const HjData& first, const HjData& second, double p) {
  TimeSeries s;
  s.times = w.times();
  for (double t : s.times) {
    ScalarField diff(w.grid());
    if (first.source) diff += first.source(t);
    if (second.source) diff -= second.source(t);
    s.values.push_back(lp_norm(dealias(diff), p));
  }
  return s;
}

EstimateReport check_thm_hjlip(const AdjointPairResult& res, const HjData& first, const HjData& second,
                               double max_drift) {
  if (res.max_drift > max_drift) throw std::runtime_error("check_thm_hjlip: linearized drift exceeds threshold");
  const double data = data_norm(first, second, kInf);
  const TimeSeries f_sup = source_difference_series(res.w, first, second, kInf);
  const double rhs = data + time_integral(f_sup);
  double lhs = 0.0;
  for (const auto& f : res.w.fields()) lhs = std::max(lhs, lp_norm(f, kInf));
  double mass_dev = 0.0;
  for (double m : res.mass.values) mass_dev = std::max(mass_dev, std::abs(m - res.mass.values.front()));
  const double rel_defect = res.identity_scale > 0.0 ? res.identity_defect / res.identity_scale : 0.0;
  return make_report(TheoremId::ThmHjlipCd, "linf", lhs, rhs,
                     {{"g_diff_sup", data},
                      {"F_integral", rhs - data},
                      {"dual_mass", res.mass.values.front()},
                      {"mass_deviation", mass_dev},
                      {"duality_defect_relative", rel_defect},
                      {"max_drift", res.max_drift}});
}

EstimateReport check_thm_semiconcave(const AdjointPairResult& res, const HjData& first, const HjData& second,
                                     const Hamiltonian& h, const SemiconcaveBound& bound) {
  if (res.max_minus_divergence.values.empty()) throw std::logic_error("check_thm_semiconcave: needs a Hessian");
  const int n = res.u1.grid().dim();
  const double t_end = res.u1.times().back();
  const QuadratureRule rule = gauss_legendre(default_theta_nodes(h));
  const double lambda_max = measured_ellipticity(res, h, rule);

  double hyp_excess = -kInf;
  double div_excess = -kInf;
  double max_eig = -kInf;
  for (std::size_t k = 0; k < res.u1.size(); ++k) {
    const double s = t_end - res.u1.time(k);
    if (s <= 0.0 && bound.c1 > 0.0) continue;
    const double c = (bound.c1 > 0.0 ? bound.c1 / s : 0.0) + bound.c2;
    const double eig = std::max(max_hessian_eigenvalue(res.u1.field(k)).max(),
                                max_hessian_eigenvalue(res.u2.field(k)).max());
    max_eig = std::max(max_eig, eig);
    hyp_excess = std::max(hyp_excess, eig - c);
    div_excess = std::max(div_excess, res.max_minus_divergence.values[k] - n * lambda_max * std::max(c, 0.0));
  }

  const double data = data_norm(first, second, kInf);
  const TimeSeries f_sup = source_difference_series(res.w, first, second, kInf);
  const bool equal = sources_equal(f_sup);
  const Worst worst = linf_conclusion(res.w, f_sup, data, equal);
  std::vector<NamedValue> constants = {{"c1", bound.c1},
                                       {"c2", bound.c2},
                                       {"Lambda", lambda_max},
                                       {"max_hessian_eigenvalue", max_eig},
                                       {"divergence_bound_excess", div_excess},
                                       {"g_diff_sup", data}};
  const std::string label = equal ? "contraction" : "f_distinct";
  if (hyp_excess > 1e-8) {
    return hypothesis_failure(TheoremId::ThmSemiconcaveCd, label, worst.lhs, worst.rhs, std::move(constants),
                              "semiconcavity bound violated by the run");
  }
  auto r = make_report(TheoremId::ThmSemiconcaveCd, label, worst.lhs, worst.rhs, std::move(constants));
  if (div_excess > 1e-8) {
    r.status = ReportStatus::EstimateFailed;
    r.note = "-div b exceeds n Lambda (c1/t + c2)";
  }
  return r;
}

double superquadratic_divergence_bound(double gamma, double c, double lipschitz) {
  if (!(gamma > 1.0)) throw std::domain_error("superquadratic_divergence_bound: gamma must exceed 1");
  const double cp = std::max(c, 0.0);
  if (gamma <= 2.0) return gamma * cp;
  const double s = 1.0 + lipschitz * lipschitz;
  return gamma * std::pow(s, gamma / 2.0 - 1.0) * cp +
         gamma * (gamma - 2.0) * std::pow(s, gamma / 2.0 - 2.0) * lipschitz * lipschitz * cp;
}

EstimateReport check_thm_superquadratic(const AdjointPairResult& res, const HjData& first, const HjData& second,
                                        const Hamiltonian& h, double laplacian_bound) {
  if (h.kind() != HamiltonianKind::PowerGamma) throw std::invalid_argument("check_thm_superquadratic: power H");
  if (res.max_minus_divergence.values.empty()) throw std::logic_error("check_thm_superquadratic: needs a Hessian");
  double max_lap = -kInf;
  for (const auto* u : {&res.u1, &res.u2}) {
    for (const auto& f : u->fields()) max_lap = std::max(max_lap, laplacian(f).max());
  }
  const double lipschitz = std::max(max_gradient_norm(res.u1), max_gradient_norm(res.u2));
  const double k = superquadratic_divergence_bound(h.gamma(), laplacian_bound, lipschitz);
  const double max_div = max_of(res.max_minus_divergence);

  const double data = data_norm(first, second, kInf);
  const TimeSeries f_sup = source_difference_series(res.w, first, second, kInf);
  const bool equal = sources_equal(f_sup);
  const Worst worst = linf_conclusion(res.w, f_sup, data, equal);
  std::vector<NamedValue> constants = {{"gamma", h.gamma()},
                                       {"C", laplacian_bound},
                                       {"max_laplacian", max_lap},
                                       {"lipschitz", lipschitz},
                                       {"K", k},
                                       {"max_minus_divergence", max_div},
                                       {"g_diff_sup", data}};
  const std::string label = "gamma=" + format_number(h.gamma()) + (equal ? " contraction" : " f_distinct");
  if (max_lap > laplacian_bound) {
    return hypothesis_failure(TheoremId::ThmSuperquadraticCd, label, worst.lhs, worst.rhs, std::move(constants),
                              "Lap u exceeds the configured bound C");
  }
  auto r = make_report(TheoremId::ThmSuperquadraticCd, label, worst.lhs, worst.rhs, std::move(constants));
  if (max_div > k * (1.0 + 1e-12) + 1e-12) {
    r.status = ReportStatus::EstimateFailed;
    r.note = "-div b exceeds K";
  }
  return r;
}

GradientResult check_cor_gradient(const AdjointPairResult& res, const HjData& first, const HjData& second) {
  GradientResult out;
  TimeSeries lap_l1;
  lap_l1.times = res.w.times();
  double max_grad2 = 0.0;
  double w_scale = 0.0;
  for (const auto& w : res.w.fields()) w_scale = std::max(w_scale, lp_norm(w, kInf));
  // levels below the roundoff floor of u1 - u2 carry no information
  const double floor = 1e-8 * w_scale;
  double max_ratio = 0.0;
  for (const auto& w : res.w.fields()) {
    double grad2 = 0.0;
    for (const auto& d : gradient(w)) grad2 += inner(d, d);
    const ScalarField lap = laplacian(w);
    const double lap1 = lp_norm(lap, 1.0);
    lap_l1.values.push_back(lap1);
    max_grad2 = std::max(max_grad2, grad2);
    const double sup = lp_norm(w, kInf);
    if (sup > floor && lap1 > 0.0) max_ratio = std::max(max_ratio, grad2 / (sup * lap1));
    out.ibp_defect = std::max(out.ibp_defect, std::abs(grad2 + inner(w, lap)) / std::max(1.0, grad2));
  }
  const double data = data_norm(first, second, kInf);
  const double f_int = time_integral(source_difference_series(res.w, first, second, kInf));
  const double lap_q = time_integral(lap_l1);
  out.literal = make_report(TheoremId::CorGradientCd, "literal", max_grad2, lap_q * (data + f_int),
                            {{"lap_w_L1_QT", lap_q},
                             {"g_diff_sup", data},
                             {"F_integral", f_int},
                             {"ibp_defect", out.ibp_defect}});
  out.sup_time = make_report(TheoremId::CorGradientCd, "sup_time", max_grad2, max_of(lap_l1) * (data + f_int),
                             {{"lap_w_sup_L1", max_of(lap_l1)}, {"g_diff_sup", data}, {"F_integral", f_int}});
  out.pointwise = make_report(TheoremId::CorGradientCd, "pointwise", max_ratio, 1.0,
                              {{"ibp_defect", out.ibp_defect}, {"w_floor", floor}});
  return out;
}

ScalarField smoothed_sign(const ScalarField& w, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("smoothed_sign: delta must be positive");
  return pointwise(w, [delta](double v) { return v / std::sqrt(v * v + delta * delta); });
}

L1Result check_thm_L1(const AdjointPairResult& res, const HjData& first, const HjData& second, double delta) {
  if (res.max_minus_divergence.values.empty()) throw std::logic_error("check_thm_L1: needs a Hessian");
  L1Result out;
  out.delta = delta;
  out.delta_error = delta;  // unit volume
  const TimeSeries k_series = positive_values(res.max_minus_divergence);
  const auto k_tail = suffix_integrals(k_series);
  const auto f_tail = suffix_integrals(source_difference_series(res.w, first, second, 1.0));
  const double data = data_norm(first, second, 1.0);

  Worst main;
  for (std::size_t k = 0; k < res.w.size(); ++k) {
    main.add(lp_norm(res.w.field(k), 1.0), std::exp(k_tail[k]) * (data + f_tail[k]));
  }
  const std::size_t start = res.w.size() - res.rho.size();
  const ScalarField& w_tau = res.w.field(start);
  out.measured_gap = lp_norm(w_tau, 1.0) - inner(w_tau, smoothed_sign(w_tau, delta));
  out.main = make_report(TheoremId::ThmL1Cd, "L1", main.lhs, main.rhs,
                         {{"g_diff_L1", data},
                          {"K_integral", k_tail[0]},
                          {"delta", delta},
                          {"delta_error", out.delta_error},
                          {"measured_gap", out.measured_gap}});

  Worst dual;
  const double rho0 = lp_norm(res.rho.field(0), kInf);
  for (std::size_t j = 0; j < res.rho.size(); ++j) {
    dual.add(lp_norm(res.rho.field(j), kInf), std::exp(k_tail[start] - k_tail[start + j]) * rho0);
  }
  out.dual_bound = make_report(TheoremId::ThmL1Cd, "dual_linf", dual.lhs, dual.rhs,
                               {{"rho_tau_sup", rho0}, {"K_integral", k_tail[start]}});
  return out;
}

EstimateReport check_thm_ii_and_iii(const AdjointPairResult& res, const HjData& first, const HjData& second,
                                    const Hamiltonian& h, double epsilon, DualityMode mode, double p,
                                    const DualityOptions& opts) {
  if (!(epsilon > 0.0)) throw std::domain_error("check_thm_ii_and_iii: epsilon must be positive");
  if (!(p >= 2.0)) throw std::domain_error("check_thm_ii_and_iii: p must be >= 2");
  const Grid& grid = res.w.grid();
  const int n = grid.dim();
  const GNExponents gn = gn_from_q(n, opts.q);
  const double theta = gn.theta.to_double();
  const double c_s = discrete_gn_constant(grid, opts.q).value;
  const double q = opts.q.to_double();
  const QuadratureRule rule = gauss_legendre(opts.theta_nodes > 0 ? opts.theta_nodes : default_theta_nodes(h));

  const std::size_t start = res.w.size() - res.rho.size();
  TimeSeries m;
  for (std::size_t k = start; k < res.w.size(); ++k) {
    m.times.push_back(res.w.time(k));
    if (mode == DualityMode::DivLrLq) {
      m.values.push_back(lp_norm(positive_part(averaged_trace_term(h, res.u1.field(k), res.u2.field(k), rule)), q));
    } else {
      const VectorField b =
          averaged_hamiltonian_gradient(h, gradient(res.u1.field(k)), gradient(res.u2.field(k)), rule);
      const ScalarField speed = pointwise(dot(b, b), [](double v) { return std::sqrt(v); });
      const double bq = lp_norm(speed, 2.0 * q);
      m.values.push_back(bq * bq / epsilon);
    }
  }
  const double power = 1.0 / (1.0 - theta);
  const double g = (1.0 - theta) * std::pow(epsilon, -theta / (1.0 - theta)) * std::pow(c_s, power) *
                       time_integral(m, power) +
                   c_s * time_integral(m);
  const double c2 = std::exp(0.5 * g);
  const double c = std::pow(c2, 2.0 / p);  // Riesz-Thorin with L1 contraction at p' = p/(p-1)

  const auto f_tail = suffix_integrals(source_difference_series(res.w, first, second, p));
  const double data = data_norm(first, second, p);
  Worst worst;
  for (std::size_t k = start; k < res.w.size(); ++k) {
    worst.add(lp_norm(res.w.field(k), p), c * (data + f_tail[k]));
  }
  const bool as = mode == DualityMode::AronsonSerrin;
  const std::vector<NamedValue> constants = {{"p", p},
                                             {"theta", theta},
                                             {"C_S", c_s},
                                             {as ? "Q" : "q", as ? 2.0 * q : q},
                                             {"gronwall_integral", g},
                                             {"C2", c2},
                                             {"C", c},
                                             {"mixed_norm", time_lr_norm(m, power)}};
  return make_report(as ? TheoremId::ThmIiiAsCd : TheoremId::ThmIiLpCd, "p=" + format_number(p), worst.lhs,
                     worst.rhs, constants);
}

}  // namespace fplab
