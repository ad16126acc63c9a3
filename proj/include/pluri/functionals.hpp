#pragma once

// Integral functionals of radial profiles on the unit ball: the p-energy and
// its chi-weighted generalization, mixed energies, L^q and sup norms, and the
// exponential integrals of the Moser-Trudinger side.
//
// The master definition of every energy is the Stieltjes form against the
// Monge-Ampere mass dF (kinked profiles carry atoms, which the smooth
// density formula misses); the smooth formula and the closed forms are kept
// as cross-check routes.  All values are reported in unnormalized Lebesgue
// units, with the (2 pi)^n and 2 pi^n/(n-1)! radial prefactors applied
// exactly once here.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pluri/constants.hpp"
#include "pluri/quadrature.hpp"
#include "pluri/radial.hpp"

namespace pluri {

struct EnergyReport {
  double value = 0.0;  // >= 0; +inf once divergent
  bool divergent = false;
  enum class Method { stieltjes, smooth_formula, closed_form } method =
      Method::stieltjes;
  double abs_error_estimate = 0.0;
  double log_value = kNegInf;  // stays finite when value overflows a double
  std::string note;
};

namespace detail {

// The quadrature tolerance is absolute-or-relative; energies of small
// magnitude need a second pass with the tolerance scaled to the first
// estimate to come out relatively accurate.
inline QuadratureResult stieltjes_rel(const std::function<double(double)>& g,
                                      const MassFunction& F, double tol) {
  QuadratureResult r = stieltjes(g, F, tol);
  const double scale = std::fabs(r.value);
  if (!r.divergent && std::isfinite(scale) && scale > 0.0 && scale < 1.0) {
    QuadratureResult fine = stieltjes(g, F, std::max(tol * scale, 1e-290));
    if (!fine.divergent) return fine;
  }
  return r;
}

inline QuadratureResult integrate_rel(const std::function<double(double)>& f,
                                      double tol,
                                      const std::vector<double>& breakpoints) {
  QuadratureResult r = integrate(f, tol, true, breakpoints);
  const double scale = std::fabs(r.value);
  if (!r.divergent && std::isfinite(scale) && scale > 0.0 && scale < 1.0) {
    QuadratureResult fine =
        integrate(f, std::max(tol * scale, 1e-290), true, breakpoints);
    if (!fine.divergent) return fine;
  }
  return r;
}

inline EnergyReport divergent_report(EnergyReport::Method m, std::string note = {}) {
  EnergyReport r;
  r.value = std::numeric_limits<double>::infinity();
  r.divergent = true;
  r.method = m;
  r.log_value = std::numeric_limits<double>::infinity();
  r.note = std::move(note);
  return r;
}

inline EnergyReport finite_report(double value, double err,
                                  EnergyReport::Method m) {
  EnergyReport r;
  r.value = value;
  r.abs_error_estimate = err;
  r.method = m;
  r.log_value = value > 0.0 ? std::log(value) : kNegInf;
  return r;
}

}  // namespace detail

// e_p(u) = int (-u)^p (dd^c u)^n = (2 pi)^n int (-u)^p dF.
inline EnergyReport energy_p(const RadialProfile& u, double p, int n,
                             double tol = 1e-10) {
  if (!(p > 0.0)) throw std::domain_error("energy_p: p must be > 0");
  const MaDistribution d = ma_distribution(u, n);
  double origin_term = 0.0;
  if (d.mass.origin_mass > 0.0) {
    const double u0 = eval(u, 0.0);
    if (u0 == kNegInf) {
      return detail::divergent_report(EnergyReport::Method::stieltjes,
                                      "unbounded profile with origin mass");
    }
    origin_term = std::pow(-u0, p) * d.mass.origin_mass;
  }
  auto g = [&u, p](double t) { return std::pow(std::max(0.0, -eval(u, t)), p); };
  const QuadratureResult s = detail::stieltjes_rel(g, d.mass, tol);
  if (s.divergent) return detail::divergent_report(EnergyReport::Method::stieltjes);
  const double pref = two_pi_pow(n);
  return detail::finite_report(pref * (s.value + origin_term),
                               pref * s.abs_error_estimate,
                               EnergyReport::Method::stieltjes);
}

// Smooth-profile cross check:
//   e_p(u) = (2 pi)^n p int_0^1 (-u)^{p-1} u'(t)^{n+1} t^n dt.
// Valid for kink-free profiles only (atoms are invisible to it).
inline EnergyReport energy_p_smooth(const RadialProfile& u, double p, int n,
                                    double tol = 1e-10) {
  if (!(p > 0.0)) throw std::domain_error("energy_p_smooth: p must be > 0");
  auto f = [&u, p, n](double t) {
    const double mu = std::max(0.0, -eval(u, t));
    const double du = left_derivative(u, t);
    return std::pow(mu, p - 1.0) * std::pow(du, n + 1.0) * std::pow(t, n);
  };
  const QuadratureResult q = detail::integrate_rel(f, tol, profile_kinks(u));
  if (q.divergent) {
    return detail::divergent_report(EnergyReport::Method::smooth_formula);
  }
  const double pref = two_pi_pow(n) * p;
  return detail::finite_report(pref * q.value, pref * q.abs_error_estimate,
                               EnergyReport::Method::smooth_formula);
}

// Closed forms where the family admits one.
inline std::optional<double> energy_p_closed(const RadialProfile& u, double p,
                                             int n) {
  if (const auto* pw = std::get_if<PowerLaw>(&u)) {
    return std::pow(pw->k, n + p) * n * std::pow(4.0 * M_PI, n) *
           std::pow(pw->alpha, n) * beta_fn(p + 1.0, n);
  }
  if (const auto* qb = std::get_if<QuadraticBall>(&u)) {
    return std::pow(qb->a, n + p) * n * std::pow(4.0 * M_PI, n) *
           beta_fn(p + 1.0, n);
  }
  if (const auto* tl = std::get_if<TruncatedLog>(&u)) {
    return two_pi_pow(n) * std::pow(tl->c, n) * std::pow(-tl->c * tl->beta, p);
  }
  return std::nullopt;
}

// e_chi(u) = int -chi(u) (dd^c u)^n for nondecreasing chi <= 0.
inline EnergyReport energy_chi(const RadialProfile& u,
                               const std::function<double(double)>& chi, int n,
                               double tol = 1e-10) {
  std::string note;
  if (std::fabs(chi(0.0)) > 1e-12) note = "chi(0) != 0";
  const MaDistribution d = ma_distribution(u, n);
  double origin_term = 0.0;
  if (d.mass.origin_mass > 0.0) {
    const double u0 = eval(u, 0.0);
    if (u0 == kNegInf) {
      return detail::divergent_report(EnergyReport::Method::stieltjes,
                                      "unbounded profile with origin mass");
    }
    origin_term = -chi(u0) * d.mass.origin_mass;
  }
  auto g = [&u, &chi](double t) { return -chi(eval(u, t)); };
  const QuadratureResult s = detail::stieltjes_rel(g, d.mass, tol);
  if (s.divergent) return detail::divergent_report(EnergyReport::Method::stieltjes);
  const double pref = two_pi_pow(n);
  EnergyReport r = detail::finite_report(pref * (s.value + origin_term),
                                         pref * s.abs_error_estimate,
                                         EnergyReport::Method::stieltjes);
  r.note = std::move(note);
  return r;
}

// Mixed energy int (-v)^p dd^c u_1 ^ ... ^ dd^c u_n via the radial mixed
// mass t^n prod_i u_i'(t).
inline EnergyReport mixed_energy(const RadialProfile& v,
                                 const std::vector<RadialProfile>& us, double p,
                                 int n, double tol = 1e-10) {
  if (static_cast<int>(us.size()) != n) {
    throw std::invalid_argument("mixed_energy: need exactly n factor profiles");
  }
  if (!(p >= 0.0)) throw std::domain_error("mixed_energy: p must be >= 0");
  const MassFunction mass = mixed_mass(us);
  double origin_term = 0.0;
  if (mass.origin_mass > 0.0) {
    const double v0 = eval(v, 0.0);
    if (v0 == kNegInf) {
      return detail::divergent_report(EnergyReport::Method::stieltjes,
                                      "unbounded weight with origin mass");
    }
    origin_term = std::pow(-v0, p) * mass.origin_mass;
  }
  auto g = [&v, p](double t) { return std::pow(std::max(0.0, -eval(v, t)), p); };
  const QuadratureResult s = detail::stieltjes_rel(g, mass, tol);
  if (s.divergent) return detail::divergent_report(EnergyReport::Method::stieltjes);
  const double pref = two_pi_pow(n);
  return detail::finite_report(pref * (s.value + origin_term),
                               pref * s.abs_error_estimate,
                               EnergyReport::Method::stieltjes);
}

// ||u||_{L^q} with ||u||^q = (2 pi^n/(n-1)!) int_0^1 (-u)^q t^{2n-1} dt.
// For deeply truncated logs the integral has an asymptotic closed form
// (the clamp contribution is below machine noise once |beta| is large).
inline EnergyReport lq_norm(const RadialProfile& u, double q, int n,
                            double tol = 1e-10) {
  if (!(q > 0.0)) throw std::domain_error("lq_norm: q must be > 0");
  if (const auto* tl = std::get_if<TruncatedLog>(&u); tl && tl->beta <= -60.0) {
    const double log_iq = std::log(sphere_factor(n)) + q * std::log(tl->c) +
                          log_gamma(q + 1.0) -
                          (q + 1.0) * std::log(2.0 * static_cast<double>(n));
    EnergyReport r;
    r.value = std::exp(log_iq / q);
    r.method = EnergyReport::Method::closed_form;
    r.log_value = log_iq / q;
    r.abs_error_estimate = 1e-13 * r.value;
    return r;
  }
  auto f = [&u, q, n](double t) {
    return std::pow(std::max(0.0, -eval(u, t)), q) * std::pow(t, 2 * n - 1);
  };
  const QuadratureResult res = detail::integrate_rel(f, tol, profile_kinks(u));
  if (res.divergent) {
    return detail::divergent_report(EnergyReport::Method::smooth_formula);
  }
  const double iq = sphere_factor(n) * res.value;
  EnergyReport r;
  r.value = iq > 0.0 ? std::pow(iq, 1.0 / q) : 0.0;
  r.method = EnergyReport::Method::smooth_formula;
  r.log_value = iq > 0.0 ? std::log(iq) / q : kNegInf;
  r.abs_error_estimate =
      iq > 0.0 ? sphere_factor(n) * res.abs_error_estimate * r.value / (q * iq) : 0.0;
  return r;
}

// ||u||_{L^infty} = -u(0); +inf for profiles with a pole.
inline double sup_norm(const RadialProfile& u) {
  const double u0 = eval(u, 0.0);
  return u0 == kNegInf ? std::numeric_limits<double>::infinity() : -u0;
}

// int_B e^{-u} dlambda = (2 pi^n/(n-1)!) int_0^1 e^{-u(s)} s^{2n-1} ds.
// Truncated logs use the exact piecewise antiderivative, evaluated in log
// space so extreme truncation depths keep a finite log_value even when the
// value itself overflows.
inline EnergyReport exp_integral(const RadialProfile& u, int n,
                                 double tol = 1e-10,
                                 bool force_quadrature = false) {
  if (n < 2) throw std::domain_error("exp_integral: n must be >= 2");
  if (const auto* tl = std::get_if<TruncatedLog>(&u);
      tl != nullptr && !force_quadrature) {
    const double c = tl->c, beta = tl->beta;
    const double m = 2.0 * n;
    double log_inner;
    if (c == m) {
      log_inner = std::log(1.0 / m - beta);
    } else if (c < m) {
      const double e = std::exp((m - c) * beta);  // in (0, 1)
      log_inner = std::log(e / m + (1.0 - e) / (m - c));
    } else {
      // inner = e^{E} (1/m + 1/(c-m)) - 1/(c-m), E = (c-m)(-beta) > 0
      const double E = (c - m) * (-beta);
      const double s = 1.0 / m + 1.0 / (c - m);
      log_inner = E + std::log(s) + std::log1p(-std::exp(-E) / ((c - m) * s));
    }
    EnergyReport r;
    r.log_value = std::log(sphere_factor(n)) + log_inner;
    r.value = std::exp(r.log_value);  // may overflow to +inf; log_value stands
    r.method = EnergyReport::Method::closed_form;
    r.abs_error_estimate = std::isfinite(r.value) ? 4e-16 * r.value : 0.0;
    return r;
  }
  auto f = [&u, n](double s) {
    return std::exp(-eval(u, s)) * std::pow(s, 2 * n - 1);
  };
  const QuadratureResult res = detail::integrate_rel(f, tol, profile_kinks(u));
  if (res.divergent) {
    return detail::divergent_report(EnergyReport::Method::smooth_formula);
  }
  EnergyReport r = detail::finite_report(sphere_factor(n) * res.value,
                                         sphere_factor(n) * res.abs_error_estimate,
                                         EnergyReport::Method::smooth_formula);
  return r;
}

// int_B exp(alpha(p,n) (-u)^{(n+p)/n} e_p(u)^{-1/n}) dlambda; finite for
// admissible profiles with positive finite energy.
inline EnergyReport exp_alpha_integral(const RadialProfile& u, double p, int n,
                                       double tol = 1e-10) {
  const EnergyReport ep = energy_p(u, p, n, tol);
  if (ep.divergent || !(ep.value > 0.0)) {
    throw std::domain_error(
        "exp_alpha_integral: requires finite positive energy e_p(u)");
  }
  const double kappa = alpha_exponent(p, n) * std::pow(ep.value, -1.0 / n);
  const double expo = (n + p) / static_cast<double>(n);
  auto f = [&u, kappa, expo, n](double s) {
    return std::exp(kappa * std::pow(std::max(0.0, -eval(u, s)), expo)) *
           std::pow(s, 2 * n - 1);
  };
  const QuadratureResult res = detail::integrate_rel(f, tol, profile_kinks(u));
  if (res.divergent) {
    return detail::divergent_report(EnergyReport::Method::smooth_formula);
  }
  return detail::finite_report(sphere_factor(n) * res.value,
                               sphere_factor(n) * res.abs_error_estimate,
                               EnergyReport::Method::smooth_formula);
}

}  // namespace pluri
