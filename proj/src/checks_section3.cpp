#include "fplab/checks_section3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_field(const ScalarField& a, const ScalarField& b) {
  return std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end());
}

}  // namespace

std::vector<double> default_p_sequence() { return {2.0, 4.0, 8.0, 16.0, 32.0}; }

OneSidedResult check_thm_one_sided(const Trajectory& u1, const Trajectory& u2, const OneSidedInputs& in,
                                   const std::vector<double>& chain_p) {
  if (u1.size() != u2.size() || u1.size() < 2) throw std::invalid_argument("check_thm_one_sided: mismatched runs");
  const double sigma = u1.time(0);
  if (!(sigma > 0.0)) throw std::invalid_argument("check_thm_one_sided: sigma must be positive");
  if (!(in.c1 >= 0.0)) throw std::invalid_argument("check_thm_one_sided: c1 must be >= 0");

  Trajectory w(u1.grid());
  for (std::size_t k = 0; k < u1.size(); ++k) w.push_back(u1.time(k), u1.field(k) - u2.field(k));
  const double data = lp_norm(w.field(0), kInf);
  const bool equal_sources = same_field(in.f1, in.f2);
  const double f_sup = lp_norm(dealias(in.f1 - in.f2), kInf);

  OneSidedResult out;
  // Worst time for the sup-norm bound.
  double lhs = 0.0;
  double rhs = 0.0;
  double worst = -kInf;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double l = lp_norm(w.field(k), kInf);
    const double b = equal_sources ? data : std::exp(f_sup * (w.time(k) - sigma)) * (data + 1.0);
    if (l - b > worst) {
      worst = l - b;
      lhs = l;
      rhs = b;
    }
  }
  out.main = make_report(TheoremId::ThmOneSidedLinf, equal_sources ? "contraction" : "f_distinct", lhs, rhs,
                         {{"c1", in.c1}, {"c2", in.c2}, {"sigma", sigma}, {"g_diff_sup", data}, {"F_sup", f_sup}});

  const double t_end = w.times().back();
  for (double p : chain_p) {
    for (int sign : {1, -1}) {
      auto part = [&](const ScalarField& f) { return sign > 0 ? positive_part(f) : negative_part(f); };
      const double start = lp_norm(part(w.field(0)), p);
      double l_worst = 0.0;
      double r_worst = 0.0;
      double gap = -kInf;
      for (std::size_t k = 0; k < w.size(); ++k) {
        const double tau = w.time(k);
        const double int_f = f_sup * (tau - sigma);
        const double factor = std::pow(tau / sigma, in.c1 / p) * std::exp(in.c2 * t_end / p) *
                              std::pow(std::exp((p - 1.0) * int_f), 1.0 / p);
        const double l = lp_norm(part(w.field(k)), p);
        const double b = factor * (start + std::pow(int_f, 1.0 / p));
        if (l - b > gap) {
          gap = l - b;
          l_worst = l;
          r_worst = b;
        }
      }
      out.p_chain.push_back(make_report(TheoremId::ThmOneSidedLinf,
                                        std::string("p_chain ") + (sign > 0 ? "w+" : "w-") + " p=" + format_number(p),
                                        l_worst, r_worst, {{"p", p}, {"c1", in.c1}, {"c2", in.c2}, {"sigma", sigma}}));
    }
  }

  out.p_values = default_p_sequence();
  out.p_sequence_ok = true;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double sup = lp_norm(w.field(k), kInf);
    double prev = 0.0;
    for (double p : out.p_values) {
      const double v = lp_norm(w.field(k), p);
      if (v < prev * (1.0 - 1e-12) || v > sup + 1e-8) out.p_sequence_ok = false;
      prev = v;
      if (k + 1 == w.size()) out.p_norms.push_back(v);
    }
    if (k + 1 == w.size()) out.p_norms.push_back(sup);
  }
  return out;
}

}  // namespace fplab
