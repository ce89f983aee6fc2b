#include "fplab/checks_section2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fplab/gn_constant.hpp"

namespace fplab {

namespace {

struct GnSetup {
  Exponent q = Exponent(1);
  double theta = 0.0;
  double c_s = 0.0;
};

GnSetup gn_setup(const DriftSpec& drift, const Grid& grid) {
  GnSetup s;
  s.q = stability_exponent(drift, grid.dim());
  const GNExponents gn = gn_from_q(grid.dim(), s.q);
  s.theta = gn.theta.to_double();
  s.c_s = discrete_gn_constant(grid, s.q).value;
  return s;
}

// Largest GN ratio over the snapshots; the estimate needs it below C_S.
double max_gn_ratio(const Trajectory& traj, const Exponent& q) {
  double worst = 0.0;
  for (const auto& f : traj.fields()) worst = std::max(worst, gn_ratio(f, q));
  return worst;
}

double squared_gradient_norm(const ScalarField& f) {
  double s = 0.0;
  for (const auto& d : gradient(f)) s += inner(d, d);
  return s;
}

double max_lp(const Trajectory& traj, double p) {
  double m = 0.0;
  for (const auto& f : traj.fields()) m = std::max(m, lp_norm(f, p));
  return m;
}

void require_stability_drift(const DriftSpec& drift) {
  if (!drift.tags().divb_lrlq && !drift.tags().divergence_free) {
    throw std::invalid_argument("drift is neither divergence-free nor tagged divb_LrLq");
  }
}

}  // namespace

GronwallConstants gronwall_constant_L2(const TimeSeries& divb_qnorm, double c_s, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("gronwall_constant_L2: theta outside (0,1)");
  const double power = 1.0 / (1.0 - theta);
  const double i_power = time_integral(divb_qnorm, power);
  const double i_linear = time_integral(divb_qnorm, 1.0);
  GronwallConstants out;
  out.integrand_integral = (1.0 - theta) * c_s * i_power + c_s * i_linear;
  out.c1 = std::exp(0.5 * out.integrand_integral);
  out.c2_without_initial = out.integrand_integral * out.c1 * out.c1 / (1.0 - theta);
  out.c2 = (1.0 + out.integrand_integral * out.c1 * out.c1) / (1.0 - theta);
  const double young = (1.0 - theta) * std::pow(c_s, power) * i_power + c_s * i_linear;
  out.c1_young = std::exp(0.5 * young);
  return out;
}

TimeSeries divergence_norm_series(const DriftSpec& drift, const std::vector<double>& times) {
  TimeSeries s;
  s.times = times;
  s.values.reserve(times.size());
  if (!drift.tags().divb_lrlq) {
    if (!drift.tags().divergence_free) throw std::invalid_argument("divergence_norm_series: untagged drift");
    s.values.assign(times.size(), 0.0);
    return s;
  }
  const double alpha = drift.tags().divb_lrlq->time_power;
  for (double t : times) {
    s.values.push_back(t == 0.0 && alpha > 0.0 ? std::numeric_limits<double>::infinity() : drift.divergence_norm(t));
  }
  if (alpha > 0.0) s.leading_power = alpha;
  return s;
}

Exponent stability_exponent(const DriftSpec& drift, int dim) {
  if (drift.tags().divb_lrlq) return drift.tags().divb_lrlq->q;
  return Exponent(dim);
}

double main2_constant(const TimeSeries& divb_qnorm, double c_s, double theta, double p) {
  if (!(p > 1.0)) throw std::domain_error("main2_constant: p must exceed 1");
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("main2_constant: theta outside (0,1)");
  const double g = time_integral(divb_qnorm, 1.0 / (1.0 - theta)) + c_s * time_integral(divb_qnorm, 1.0);
  if (p >= 2.0) return std::exp(g / p);
  // ||T||_{p->p} <= ||T||_{1->1}^{1-s} ||T||_{2->2}^s with 1/p = 1 - s/2
  const double s = 2.0 * (1.0 - 1.0 / p);
  return std::pow(std::exp(g / 2.0), s);
}

std::vector<EstimateReport> check_thm_stability(const Trajectory& rho, const DriftSpec& drift, double epsilon) {
  require_stability_drift(drift);
  if (epsilon != 1.0) throw std::invalid_argument("check_thm_stability: requires epsilon = 1");
  if (rho.size() < 2) throw std::invalid_argument("check_thm_stability: need at least two snapshots");
  const GnSetup gn = gn_setup(drift, rho.grid());
  const GronwallConstants k = gronwall_constant_L2(divergence_norm_series(drift, rho.times()), gn.c_s, gn.theta);

  const double rho0 = lp_norm(rho.field(0), 2.0);
  const double lhs1 = max_lp(rho, 2.0);
  TimeSeries grad;
  grad.times = rho.times();
  for (const auto& f : rho.fields()) grad.values.push_back(squared_gradient_norm(f));
  const double lhs2 = time_integral(grad);

  const std::vector<NamedValue> common = {{"C_S", gn.c_s},
                                          {"theta", gn.theta},
                                          {"q", gn.q.to_double()},
                                          {"gronwall_integral", k.integrand_integral},
                                          {"C1", k.c1},
                                          {"C1_young", k.c1_young},
                                          {"rho0_L2", rho0}};
  auto with = [&](std::vector<NamedValue> extra) {
    std::vector<NamedValue> all = common;
    all.insert(all.end(), extra.begin(), extra.end());
    return all;
  };
  const double ratio = max_gn_ratio(rho, gn.q);
  std::vector<EstimateReport> out;
  out.push_back(make_report(TheoremId::ThmStabilityL2, "L2", lhs1, k.c1 * rho0, with({{"max_gn_ratio", ratio}})));
  out.push_back(make_report(TheoremId::ThmStabilityGrad, "grad_squared", lhs2, k.c2 * rho0 * rho0,
                            with({{"C2", k.c2},
                                  {"C2_without_initial", k.c2_without_initial},
                                  {"rhs_unsquared", k.c2 * rho0},
                                  {"max_gn_ratio", ratio}})));
  if (ratio > gn.c_s) {
    for (auto& r : out) {
      r.status = ReportStatus::HypothesisFailed;
      r.note = "snapshot GN ratio exceeds the discrete constant";
    }
  }
  return out;
}

EstimateReport check_thm_main2(const Trajectory& rho, const DriftSpec& drift, double epsilon, double p) {
  require_stability_drift(drift);
  if (epsilon != 1.0) throw std::invalid_argument("check_thm_main2: requires epsilon = 1");
  const ScalarField& rho0 = rho.field(0);
  const double scale = lp_norm(rho0, std::numeric_limits<double>::infinity());
  if (rho0.min() < -1e-12 * std::max(scale, 1.0)) {
    throw std::invalid_argument("check_thm_main2: initial density has negative values");
  }
  const GnSetup gn = gn_setup(drift, rho.grid());
  const double c = main2_constant(divergence_norm_series(drift, rho.times()), gn.c_s, gn.theta, p);
  double min_rho = std::numeric_limits<double>::infinity();
  for (const auto& f : rho.fields()) min_rho = std::min(min_rho, f.min());
  const double rho0_p = lp_norm(rho0, p);
  auto r = make_report(TheoremId::ThmMain2Lp, "p=" + format_number(p), max_lp(rho, p), c * rho0_p,
                       {{"p", p},
                        {"C", c},
                        {"C_S", gn.c_s},
                        {"theta", gn.theta},
                        {"rho0_Lp", rho0_p},
                        {"rho0_mass", integral(rho0)},
                        {"min_rho", min_rho}});
  if (min_rho < -1e-6) {
    r.status = ReportStatus::HypothesisFailed;
    r.note = "density undershoot below -1e-6";
  }
  return r;
}

EstimateReport check_cor_dual(const Trajectory& v, const ScalarField& source, const DriftSpec& drift,
                              double epsilon, double p) {
  require_stability_drift(drift);
  if (epsilon != 1.0) throw std::invalid_argument("check_cor_dual: requires epsilon = 1");
  if (!(p > 1.0)) throw std::domain_error("check_cor_dual: p must exceed 1");
  const double p_conj = std::isinf(p) ? 1.0 : p / (p - 1.0);
  if (!(p_conj > 1.0)) throw std::domain_error("check_cor_dual: p = inf has no admissible dual exponent");
  const GnSetup gn = gn_setup(drift, v.grid());
  const double c = main2_constant(divergence_norm_series(drift, v.times()), gn.c_s, gn.theta, p_conj);
  const double vt = lp_norm(v.back(), p);
  const double fp = lp_norm(dealias(source), p);
  const double t_end = v.times().back();
  double worst = -std::numeric_limits<double>::infinity();
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double l = lp_norm(v.field(i), p);
    const double b = c * (vt + (t_end - v.time(i)) * fp);
    if (l - b > worst) {
      worst = l - b;
      lhs = l;
      rhs = b;
    }
  }
  return make_report(TheoremId::CorDivLrLqDual, "p=" + format_number(p), lhs, rhs,
                     {{"p", p}, {"p_conj", p_conj}, {"C", c}, {"vT_Lp", vt}, {"f_Lp", fp}});
}

}  // namespace fplab
