#pragma once

// Radial plurisubharmonic candidate profiles on the unit ball, their
// admissibility checks, Monge-Ampere mass distributions and the radial
// Monge-Ampere solver.
//
// A radial profile is u(t) on [0, 1), nondecreasing and convex in x = log t,
// with u <= 0.  Its normalized Monge-Ampere mass function is
//     F(t) = t^n u'(t)^n = sigma(t)^n,   sigma(t) = t u'(t),
// where u' is the left derivative; sigma is the slope in log coordinates, so
// kinks of u carry point masses of F.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pluri/quadrature.hpp"
#include "pluri/report.hpp"

namespace pluri {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// u(t) = c * max(log t, beta); the extremal truncated-Green family.
struct TruncatedLog {
  double c = 1.0;     // > 0
  double beta = -1.0; // < 0
};

// u(t) = k (t^{2 alpha} - 1).
struct PowerLaw {
  double alpha = 1.0; // > 0
  double k = 1.0;     // > 0
};

// u(t) = a (t^2 - 1); with a = 1/(4 (n!)^{1/n}) its Monge-Ampere measure is
// Lebesgue measure on the ball.
struct QuadraticBall {
  double a = 1.0; // > 0
};

// Piecewise linear in log t between knots.  Below the first knot the first
// segment is continued with its slope and clipped at the floor
// `value_at_zero` (a -inf floor means a logarithmic pole at the origin);
// above the last knot the last segment is continued.
struct GridProfile {
  std::vector<double> knots;   // strictly increasing, in (0, 1]
  std::vector<double> values;  // u(knots[i]) <= 0
  double value_at_zero = 0.0;  // floor; may be -inf
};

using RadialProfile = std::variant<TruncatedLog, PowerLaw, QuadraticBall, GridProfile>;

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Coefficient a of the quadratic profile whose Monge-Ampere measure is
// Lebesgue measure: a = 1/(4 (n!)^{1/n}).
inline double lebesgue_quadratic_coefficient(int n) {
  return 1.0 / (4.0 * std::pow(factorial(n), 1.0 / n));
}

inline RadialProfile phi0_profile(int n) {
  return QuadraticBall{lebesgue_quadratic_coefficient(n)};
}

inline RadialProfile zero_profile() { return GridProfile{{1.0}, {0.0}, 0.0}; }

namespace detail {

inline void fail_param(const std::string& what) {
  throw std::invalid_argument("radial profile: " + what);
}

}  // namespace detail

inline void validate_profile(const RadialProfile& u) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TruncatedLog>) {
          if (!(v.c > 0.0)) detail::fail_param("truncated-log needs c > 0");
          if (!(v.beta < 0.0)) detail::fail_param("truncated-log needs beta < 0");
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          if (!(v.alpha > 0.0)) detail::fail_param("power needs alpha > 0");
          if (!(v.k > 0.0)) detail::fail_param("power needs k > 0");
        } else if constexpr (std::is_same_v<T, QuadraticBall>) {
          if (!(v.a > 0.0)) detail::fail_param("quadratic needs a > 0");
        } else {
          if (v.knots.empty()) detail::fail_param("grid needs at least one knot");
          if (v.knots.size() != v.values.size())
            detail::fail_param("grid knot/value count mismatch");
          double prev = 0.0;
          for (double t : v.knots) {
            if (!(t > prev) || !(t <= 1.0))
              detail::fail_param("grid knots must increase within (0, 1]");
            prev = t;
          }
          for (double val : v.values) {
            if (!std::isfinite(val) || val > 1e-9)
              detail::fail_param("grid values must be finite and <= 0");
          }
          if (std::isnan(v.value_at_zero) ||
              v.value_at_zero > v.values.front() + 1e-12)
            detail::fail_param("grid value at zero must be <= first knot value");
        }
      },
      u);
}

// ---------------------------------------------------------------------------
// Evaluation

inline double eval(const GridProfile& g, double t) {
  const std::size_t m = g.knots.size();
  if (t >= g.knots.back()) {
    if (m == 1 || t == g.knots.back()) return g.values.back();
    const double x1 = std::log(g.knots[m - 1]);
    const double x0 = std::log(g.knots[m - 2]);
    const double s = (g.values[m - 1] - g.values[m - 2]) / (x1 - x0);
    return g.values[m - 1] + s * (std::log(t) - x1);
  }
  if (t < g.knots.front()) {
    if (m == 1) return std::max(g.value_at_zero, g.values.front());
    const double x0 = std::log(g.knots[0]);
    const double x1 = std::log(g.knots[1]);
    const double s = (g.values[1] - g.values[0]) / (x1 - x0);
    if (t == 0.0) return s > 0.0 ? g.value_at_zero : g.values.front();
    return std::max(g.value_at_zero, g.values[0] + s * (std::log(t) - x0));
  }
  const std::size_t hi = static_cast<std::size_t>(
      std::upper_bound(g.knots.begin(), g.knots.end(), t) - g.knots.begin());
  const std::size_t i = std::min(hi, m - 1) - 1;
  const double xa = std::log(g.knots[i]);
  const double xb = std::log(g.knots[i + 1]);
  const double w = (std::log(t) - xa) / (xb - xa);
  return g.values[i] + w * (g.values[i + 1] - g.values[i]);
}

// Profile value at t in [0, 1]; -inf is allowed at t = 0.
inline double eval(const RadialProfile& u, double t) {
  if (!(t >= 0.0) || !(t <= 1.0)) {
    throw std::domain_error("eval: t must lie in [0, 1], got " + std::to_string(t));
  }
  return std::visit(
      [t](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TruncatedLog>) {
          if (t == 0.0) return v.c * v.beta;
          return v.c * std::max(std::log(t), v.beta);
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return v.k * (std::pow(t, 2.0 * v.alpha) - 1.0);
        } else if constexpr (std::is_same_v<T, QuadraticBall>) {
          return v.a * (t * t - 1.0);
        } else {
          return eval(v, t);
        }
      },
      u);
}

namespace detail {

// sigma(t) = t u'(t), the slope of u in log coordinates; `side` < 0 takes the
// left limit (the convention under which F(t) = sigma(t)^n is
// left-continuous), `side` > 0 the right limit.
inline double grid_sigma(const GridProfile& g, double t, int side) {
  const std::size_t m = g.knots.size();
  if (m == 1) return 0.0;
  auto seg_slope = [&](std::size_t i) {
    return (g.values[i + 1] - g.values[i]) /
           (std::log(g.knots[i + 1]) - std::log(g.knots[i]));
  };
  if (t < g.knots.front() || (t == g.knots.front() && side < 0)) {
    // continuation of the first segment, clipped at the value floor
    const double s_in = seg_slope(0);
    if (!(s_in > 0.0)) return std::max(s_in, 0.0);
    if (g.value_at_zero == kNegInf) return s_in;
    const double x_clamp =
        std::log(g.knots.front()) - (g.values.front() - g.value_at_zero) / s_in;
    const double x = t > 0.0 ? std::log(t) : kNegInf;
    if (x < x_clamp || (x == x_clamp && side < 0)) return 0.0;
    return s_in;
  }
  if (t >= g.knots.back()) return seg_slope(m - 2);
  const std::size_t hi = static_cast<std::size_t>(
      std::upper_bound(g.knots.begin(), g.knots.end(), t) - g.knots.begin());
  std::size_t i = std::min(hi, m - 1) - 1;
  if (side < 0 && t == g.knots[i] && i > 0) --i;
  return seg_slope(i);
}

}  // namespace detail

inline double log_slope(const RadialProfile& u, double t, int side) {
  return std::visit(
      [t, side](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TruncatedLog>) {
          const double a = std::exp(v.beta);
          if (side < 0) return t <= a ? 0.0 : v.c;
          return t < a ? 0.0 : v.c;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return 2.0 * v.alpha * v.k * std::pow(t, 2.0 * v.alpha);
        } else if constexpr (std::is_same_v<T, QuadraticBall>) {
          return 2.0 * v.a * t * t;
        } else {
          return detail::grid_sigma(v, t, side);
        }
      },
      u);
}

// Left derivative in d/dt units (nonnegative; t * left_derivative is the
// nondecreasing log-slope).
inline double left_derivative(const RadialProfile& u, double t) {
  if (!(t > 0.0) || !(t < 1.0 + 1e-15)) {
    throw std::domain_error("left_derivative: t must lie in (0, 1)");
  }
  return log_slope(u, t, -1) / t;
}

// d sigma / dt on the smooth part (zero for piecewise-linear-in-log families).
inline double log_slope_deriv(const RadialProfile& u, double t) {
  return std::visit(
      [t](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return 4.0 * v.alpha * v.alpha * v.k * std::pow(t, 2.0 * v.alpha - 1.0);
        } else if constexpr (std::is_same_v<T, QuadraticBall>) {
          return 4.0 * v.a * t;
        } else {
          return 0.0;
        }
      },
      u);
}

// Points in (0, 1) where sigma jumps (Monge-Ampere atoms sit here).
inline std::vector<double> profile_kinks(const RadialProfile& u) {
  return std::visit(
      [](const auto& v) -> std::vector<double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TruncatedLog>) {
          const double a = std::exp(v.beta);
          if (a >= std::numeric_limits<double>::min() && a < 1.0) return {a};
          return {};
        } else if constexpr (std::is_same_v<T, PowerLaw> ||
                             std::is_same_v<T, QuadraticBall>) {
          return {};
        } else {
          std::vector<double> ks;
          const std::size_t m = v.knots.size();
          if (m < 2) return ks;
          std::vector<double> xs(m), slope(m - 1);
          for (std::size_t i = 0; i < m; ++i) xs[i] = std::log(v.knots[i]);
          for (std::size_t i = 0; i + 1 < m; ++i) {
            slope[i] = (v.values[i + 1] - v.values[i]) / (xs[i + 1] - xs[i]);
          }
          if (slope.front() > 0.0 && v.value_at_zero != kNegInf &&
              v.value_at_zero <= v.values.front()) {
            // where the inward continuation meets the value floor, sigma
            // jumps from 0 to the first slope (the floor may sit exactly at
            // the first knot)
            const double x_clamp =
                xs.front() - (v.values.front() - v.value_at_zero) / slope.front();
            const double t_clamp = std::exp(x_clamp);
            if (t_clamp > 0.0 && t_clamp < 1.0) ks.push_back(t_clamp);
          }
          for (std::size_t i = 1; i + 1 < m; ++i) {
            if (slope[i] != slope[i - 1] && v.knots[i] < 1.0) ks.push_back(v.knots[i]);
          }
          std::sort(ks.begin(), ks.end());
          return ks;
        }
      },
      u);
}

// ---------------------------------------------------------------------------
// Admissibility

struct PshReport {
  bool nondecreasing = false;
  bool log_convex = false;
  bool boundary_zero = false;
  bool nonpositive = false;
  bool admissible() const { return nondecreasing && log_convex; }
};

inline PshReport is_radial_psh(const RadialProfile& u) {
  PshReport r;
  return std::visit(
      [&r](const auto& v) -> PshReport {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TruncatedLog>) {
          r.nondecreasing = r.log_convex = v.c > 0.0 && v.beta < 0.0;
          r.boundary_zero = true;
          r.nonpositive = true;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          r.nondecreasing = r.log_convex = v.alpha > 0.0 && v.k > 0.0;
          r.boundary_zero = true;
          r.nonpositive = true;
        } else if constexpr (std::is_same_v<T, QuadraticBall>) {
          r.nondecreasing = r.log_convex = v.a > 0.0;
          r.boundary_zero = true;
          r.nonpositive = true;
        } else {
          const std::size_t m = v.knots.size();
          r.nondecreasing = true;
          r.log_convex = true;
          r.nonpositive = v.values.back() <= 1e-9;
          for (std::size_t i = 0; i + 1 < m; ++i) {
            if (v.values[i + 1] < v.values[i] - 1e-12) r.nondecreasing = false;
          }
          if (m >= 2) {
            std::vector<double> xs(m), slope(m - 1);
            for (std::size_t i = 0; i < m; ++i) xs[i] = std::log(v.knots[i]);
            for (std::size_t i = 0; i + 1 < m; ++i) {
              slope[i] = (v.values[i + 1] - v.values[i]) / (xs[i + 1] - xs[i]);
            }
            if (slope.front() < -1e-12) r.log_convex = false;
            for (std::size_t i = 1; i + 1 < m; ++i) {
              if (slope[i] < slope[i - 1] - 1e-12 * std::max(1.0, std::fabs(slope[i])))
                r.log_convex = false;
            }
          }
          r.boundary_zero =
              v.knots.back() >= 1.0 - 1e-12 && std::fabs(v.values.back()) <= 1e-9;
        }
        return r;
      },
      u);
}

// ---------------------------------------------------------------------------
// Monge-Ampere mass

struct MaDistribution {
  MassFunction mass;    // normalized by (2 pi)^n
  double total_mass = 0.0;
};

namespace detail {

struct SlopeModel {
  std::function<double(double)> left, right, deriv;
  std::vector<double> kinks;
  double at_zero = 0.0;
  double at_one = 0.0;
  bool has_density = false;
};

inline SlopeModel slope_model(const RadialProfile& u) {
  SlopeModel m;
  m.left = [u](double t) { return log_slope(u, t, -1); };
  m.right = [u](double t) { return log_slope(u, t, +1); };
  m.deriv = [u](double t) { return log_slope_deriv(u, t); };
  m.kinks = profile_kinks(u);
  m.has_density = std::holds_alternative<PowerLaw>(u) ||
                  std::holds_alternative<QuadraticBall>(u);
  m.at_one = log_slope(u, 1.0, -1);
  m.at_zero = std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TruncatedLog>) {
          // Below the normal floating range exp(beta) loses precision (or
          // underflows entirely); the point mass is then carried at the
          // origin, where the profile value c*beta is exact.
          return std::exp(v.beta) >= std::numeric_limits<double>::min() ? 0.0
                                                                        : v.c;
        } else if constexpr (std::is_same_v<T, GridProfile>) {
          if (v.knots.size() < 2) return 0.0;
          const double s = (v.values[1] - v.values[0]) /
                           (std::log(v.knots[1]) - std::log(v.knots[0]));
          if (!(s > 0.0)) return 0.0;
          return v.value_at_zero == kNegInf ? s : 0.0;
        } else {
          return 0.0;
        }
      },
      u);
  return m;
}

inline std::vector<double> merge_kinks(const std::vector<SlopeModel>& ms) {
  std::vector<double> ks;
  for (const auto& m : ms) ks.insert(ks.end(), m.kinks.begin(), m.kinks.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

// Mass function F(t) = combine(sigma_1(t), ..., sigma_m(t)) where combine is
// either the plain product (mixed masses) or (sum)^n (polarization oracle).
inline MassFunction combined_mass(std::vector<SlopeModel> ms, bool product, int n) {
  MassFunction F;
  const auto kinks = merge_kinks(ms);
  F.breakpoints = kinks;

  auto shared = std::make_shared<std::vector<SlopeModel>>(std::move(ms));
  auto combine = [product, n](const std::vector<double>& sig) {
    if (product) {
      double f = 1.0;
      for (double s : sig) f *= s;
      return f;
    }
    double sum = 0.0;
    for (double s : sig) sum += s;
    return std::pow(sum, n);
  };

  F.cumulative = [shared, combine](double t) {
    std::vector<double> sig(shared->size());
    for (std::size_t i = 0; i < shared->size(); ++i) sig[i] = (*shared)[i].left(t);
    return combine(sig);
  };

  bool any_density = false;
  for (const auto& m : *shared) any_density |= m.has_density;
  if (any_density) {
    F.density = [shared, product, n](double t) {
      std::vector<double> sig(shared->size()), der(shared->size());
      for (std::size_t i = 0; i < shared->size(); ++i) {
        sig[i] = (*shared)[i].left(t);
        der[i] = (*shared)[i].deriv(t);
      }
      if (product) {
        double rho = 0.0;
        for (std::size_t j = 0; j < sig.size(); ++j) {
          double term = der[j];
          for (std::size_t i = 0; i < sig.size(); ++i) {
            if (i != j) term *= sig[i];
          }
          rho += term;
        }
        return rho;
      }
      double sum = 0.0, dsum = 0.0;
      for (std::size_t i = 0; i < sig.size(); ++i) {
        sum += sig[i];
        dsum += der[i];
      }
      return n * std::pow(sum, n - 1) * dsum;
    };
  }

  for (double t : kinks) {
    std::vector<double> sl(shared->size()), sr(shared->size());
    for (std::size_t i = 0; i < shared->size(); ++i) {
      sl[i] = (*shared)[i].left(t);
      sr[i] = (*shared)[i].right(t);
    }
    const double jump = combine(sr) - combine(sl);
    if (jump > 0.0) F.atoms.push_back({t, jump});
  }

  {
    std::vector<double> s0(shared->size());
    for (std::size_t i = 0; i < shared->size(); ++i) s0[i] = (*shared)[i].at_zero;
    F.origin_mass = combine(s0);
  }
  return F;
}

}  // namespace detail

// Monge-Ampere mass of a single profile: F(t) = sigma_left(t)^n.
inline MaDistribution ma_distribution(const RadialProfile& u, int n) {
  if (n < 2) throw std::invalid_argument("ma_distribution: n must be >= 2");
  validate_profile(u);
  std::vector<detail::SlopeModel> ms;
  ms.reserve(n);
  for (int i = 0; i < n; ++i) ms.push_back(detail::slope_model(u));
  MaDistribution d;
  d.mass = detail::combined_mass(std::move(ms), /*product=*/true, n);
  d.total_mass = std::pow(log_slope(u, 1.0, -1), n) ;
  return d;
}

// Mixed mass t^n prod_i u_i'(t): the radial mixed Monge-Ampere measure.
inline MassFunction mixed_mass(const std::vector<RadialProfile>& us) {
  std::vector<detail::SlopeModel> ms;
  ms.reserve(us.size());
  for (const auto& u : us) {
    validate_profile(u);
    ms.push_back(detail::slope_model(u));
  }
  return detail::combined_mass(std::move(ms), /*product=*/true,
                               static_cast<int>(us.size()));
}

// Mass of (dd^c sum_i u_i)^n in radial form: (sum_i sigma_i)^n.
inline MassFunction sum_mass(const std::vector<RadialProfile>& us, int n) {
  std::vector<detail::SlopeModel> ms;
  ms.reserve(us.size());
  for (const auto& u : us) {
    validate_profile(u);
    ms.push_back(detail::slope_model(u));
  }
  return detail::combined_mass(std::move(ms), /*product=*/false, n);
}

// The weighted measure (-u)^p (dd^c u)^n / (2 pi)^n, the right-hand side of
// the auxiliary Monge-Ampere problem.  total_mass is +inf when the origin
// carries mass under an unbounded profile.
inline MaDistribution weighted_target(const RadialProfile& u, double p, int n) {
  MaDistribution base = ma_distribution(u, n);
  MaDistribution w;
  auto weight = [u, p](double t) { return std::pow(-eval(u, t), p); };
  for (const Atom& a : base.mass.atoms) {
    w.mass.atoms.push_back({a.t, a.jump * weight(a.t)});
  }
  w.mass.breakpoints = base.mass.breakpoints;
  if (base.mass.density) {
    auto rho = base.mass.density;
    w.mass.density = [rho, weight](double t) { return rho(t) * weight(t); };
  }
  double total = 0.0;
  for (const Atom& a : w.mass.atoms) total += a.jump;
  if (base.mass.origin_mass > 0.0) {
    const double u0 = eval(u, 0.0);
    if (u0 == kNegInf) {
      w.total_mass = std::numeric_limits<double>::infinity();
      w.mass.origin_mass = std::numeric_limits<double>::infinity();
      return w;
    }
    w.mass.origin_mass = base.mass.origin_mass * std::pow(-u0, p);
    total += w.mass.origin_mass;
  }
  if (w.mass.density) {
    auto q = integrate(w.mass.density, 1e-11, true, w.mass.breakpoints);
    if (q.divergent) {
      w.total_mass = std::numeric_limits<double>::infinity();
      return w;
    }
    total += q.value;
  }
  w.total_mass = total;
  return w;
}

// ---------------------------------------------------------------------------
// Radial Monge-Ampere solver

struct SolveOptions {
  int knot_count = 4096;
  double t_min = 1e-12;
};

namespace detail {

// 8-point Gauss-Legendre on [-1, 1].
inline constexpr double gl8_x[4] = {0.1834346424956498, 0.5255324099163290,
                                    0.7966664774136267, 0.9602898564975363};
inline constexpr double gl8_w[4] = {0.3626837833783620, 0.3137066458778873,
                                    0.2223810344533745, 0.1012285362903763};

template <class F>
double gl8(const F& f, double a, double b) {
  const double hl = 0.5 * (b - a), c = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    s += gl8_w[i] * (f(c - hl * gl8_x[i]) + f(c + hl * gl8_x[i]));
  }
  return s * hl;
}

}  // namespace detail

// Reconstruct the profile w with t^n w'(t)^n = F and w(1) = 0:
//     w'(t) = F(t)^{1/n} / t,   w(t) = -int_t^1 w'(s) ds.
// Returns a grid profile; w(0) = -inf is allowed and reported through the
// grid's value floor.
inline RadialProfile solve_radial_ma(const MaDistribution& target, int n,
                                     SolveOptions opts = {}) {
  if (n < 2) throw std::invalid_argument("solve_radial_ma: n must be >= 2");
  if (!std::isfinite(target.total_mass)) {
    throw std::invalid_argument("solve_radial_ma: target mass is not finite");
  }

  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(opts.knot_count) + 8);
  const double x_min = std::log(opts.t_min);
  for (int i = 0; i < opts.knot_count; ++i) {
    knots.push_back(std::exp(x_min * (1.0 - static_cast<double>(i) /
                                                (opts.knot_count - 1))));
  }
  for (const Atom& a : target.mass.atoms) {
    if (a.t > 0.0 && a.t < 1.0) knots.push_back(a.t);
  }
  for (double b : target.mass.breakpoints) {
    if (b > 0.0 && b < 1.0) knots.push_back(b);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  if (knots.back() != 1.0) knots.push_back(1.0);
  const std::size_t m = knots.size();

  // Left-continuous cumulative mass at arbitrary points.  Without a closed
  // form, accumulate density segment by segment.
  std::function<double(double)> cum = target.mass.cumulative;
  std::vector<double> cum_at_knot;  // mass of [0, knots[i]]
  if (!cum) {
    cum_at_knot.assign(m, 0.0);
    double running = target.mass.origin_mass;
    std::size_t next_atom = 0;
    auto& atoms = target.mass.atoms;
    double prev_t = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (target.mass.density) {
        if (prev_t == 0.0) {
          // map (0, t0] to a unit interval to keep the open endpoint machinery
          const double t0 = knots[0];
          auto sub = integrate(
              [&](double y) { return target.mass.density(t0 * y) * t0; }, 1e-12,
              true);
          running += sub.value;
        } else {
          running += detail::gl8(target.mass.density, prev_t, knots[i]);
        }
      }
      while (next_atom < atoms.size() && atoms[next_atom].t <= knots[i]) {
        running += atoms[next_atom].jump;
        ++next_atom;
      }
      cum_at_knot[i] = running;
      prev_t = knots[i];
    }
  }

  // sigma at interior points of segment (knots[i-1], knots[i]).
  auto sigma_in_segment = [&](std::size_t i, double t) {
    double F;
    if (cum) {
      F = cum(t);
    } else {
      F = (i == 0 ? target.mass.origin_mass : cum_at_knot[i - 1]);
      // atoms at the left knot itself are already included in cum_at_knot
      if (target.mass.density && i > 0) F += detail::gl8(target.mass.density, knots[i - 1], t);
    }
    return F > 0.0 ? std::pow(F, 1.0 / n) : 0.0;
  };

  std::vector<double> values(m, 0.0);
  for (std::size_t i = m - 1; i > 0; --i) {
    const double xa = std::log(knots[i - 1]);
    const double xb = std::log(knots[i]);
    const double inc = detail::gl8(
        [&](double x) { return sigma_in_segment(i, std::exp(x)); }, xa, xb);
    values[i - 1] = values[i] - inc;
  }

  GridProfile w;
  w.knots = std::move(knots);
  w.values = std::move(values);
  // Below the lowest knot: remaining mass decides between a finite value and
  // a logarithmic pole.
  const double inner_mass =
      cum ? cum(w.knots.front()) : target.mass.origin_mass;
  if (target.mass.origin_mass > 0.0) {
    w.value_at_zero = kNegInf;
  } else if (inner_mass > 0.0 && cum) {
    const double t0 = w.knots.front();
    auto tail = integrate(
        [&](double y) { return std::pow(cum(t0 * y), 1.0 / n) / y; }, 1e-12, true);
    w.value_at_zero = tail.divergent ? kNegInf : w.values.front() - tail.value;
  } else {
    w.value_at_zero = w.values.front();
  }
  return RadialProfile{std::move(w)};
}

// Largest t with u(t) <= -s (the closed sublevel radius); 0 when the
// sublevel set is empty, 1 for s <= 0.
inline double sublevel_radius(const RadialProfile& u, double s) {
  if (s <= 0.0) return 1.0;
  return std::visit(
      [s](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TruncatedLog>) {
          if (s > -v.c * v.beta) return 0.0;
          return std::min(1.0, std::exp(-s / v.c));
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          if (s > v.k) return 0.0;
          return std::pow(1.0 - s / v.k, 1.0 / (2.0 * v.alpha));
        } else if constexpr (std::is_same_v<T, QuadraticBall>) {
          if (s > v.a) return 0.0;
          return std::sqrt(1.0 - s / v.a);
        } else {
          const RadialProfile p{v};
          if (eval(p, 0.0) > -s) return 0.0;
          double lo = 0.0, hi = 1.0;
          for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (eval(p, mid) <= -s) {
              lo = mid;
            } else {
              hi = mid;
            }
          }
          return lo;
        }
      },
      u);
}

// Pointwise comparison bound u >= t^{-p/n} w - t for the solution w of the
// weighted Monge-Ampere problem; one report per requested t with the worst
// grid point recorded.
inline std::vector<InequalityReport> comparison_check(
    const RadialProfile& u, double p, int n, const std::vector<double>& t_values,
    SolveOptions opts = {}) {
  const PshReport psh = is_radial_psh(u);
  if (!psh.admissible() || !psh.boundary_zero) {
    throw std::invalid_argument(
        "comparison_check: profile must be admissible with zero boundary value");
  }
  const MaDistribution target = weighted_target(u, p, n);
  const RadialProfile w = solve_radial_ma(target, n, opts);
  const auto& grid = std::get<GridProfile>(w);

  std::vector<InequalityReport> out;
  out.reserve(t_values.size());
  for (double t : t_values) {
    if (!(t > 0.0)) throw std::invalid_argument("comparison_check: t must be > 0");
    const double scale = std::pow(t, -p / static_cast<double>(n));
    double worst_slack = std::numeric_limits<double>::infinity();
    double worst_lhs = 0.0, worst_rhs = 0.0;
    for (std::size_t i = 0; i < grid.knots.size(); ++i) {
      const double s = grid.knots[i];
      const double bound = scale * grid.values[i] - t;
      const double us = eval(u, s);
      const double slack = us - bound;
      if (slack < worst_slack) {
        worst_slack = slack;
        worst_lhs = bound;
        worst_rhs = us;
      }
    }
    InequalityReport r = make_inequality(
        "comparison-bound", worst_lhs, worst_rhs,
        {{"t", t}, {"p", p}, {"n", static_cast<double>(n)}});
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scaling and parsing

inline RadialProfile scale_profile(const RadialProfile& u, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("scale_profile: c must be > 0");
  return std::visit(
      [c](const auto& v) -> RadialProfile {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TruncatedLog>) {
          return TruncatedLog{v.c * c, v.beta};
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return PowerLaw{v.alpha, v.k * c};
        } else if constexpr (std::is_same_v<T, QuadraticBall>) {
          return QuadraticBall{v.a * c};
        } else {
          GridProfile g = v;
          for (double& val : g.values) val *= c;
          if (g.value_at_zero != kNegInf) g.value_at_zero *= c;
          return g;
        }
      },
      u);
}

namespace detail {

inline std::vector<std::pair<std::string, std::string>> parse_kv(
    const std::string& s) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("profile literal: expected key=value, got '" +
                                  item + "'");
    }
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return kv;
}

inline double kv_get(const std::vector<std::pair<std::string, std::string>>& kv,
                     const std::string& key) {
  for (const auto& [k, v] : kv) {
    if (k == key) return std::stod(v);
  }
  throw std::invalid_argument("profile literal: missing parameter '" + key + "'");
}

}  // namespace detail

// Literal forms: "truncated-log:c=6,beta=-2", "power:alpha=1,k=3",
// "quadratic" (Lebesgue normalization for the given n) or "quadratic:a=0.5",
// "grid:@file.csv" with t,value rows (a t=0 row sets the value floor).
inline RadialProfile parse_profile(const std::string& text, int n) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  RadialProfile u;
  if (head == "truncated-log") {
    const auto kv = detail::parse_kv(rest);
    u = TruncatedLog{detail::kv_get(kv, "c"), detail::kv_get(kv, "beta")};
  } else if (head == "power") {
    const auto kv = detail::parse_kv(rest);
    u = PowerLaw{detail::kv_get(kv, "alpha"), detail::kv_get(kv, "k")};
  } else if (head == "quadratic") {
    if (rest.empty()) {
      u = QuadraticBall{lebesgue_quadratic_coefficient(n)};
    } else {
      u = QuadraticBall{detail::kv_get(detail::parse_kv(rest), "a")};
    }
  } else if (head == "grid") {
    if (rest.empty() || rest[0] != '@') {
      throw std::invalid_argument("grid literal must be grid:@file.csv");
    }
    std::ifstream in(rest.substr(1));
    if (!in) throw std::invalid_argument("grid file not readable: " + rest.substr(1));
    GridProfile g;
    g.value_at_zero = std::numeric_limits<double>::quiet_NaN();
    std::string line;
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) {
        throw std::invalid_argument("grid file: expected t,value rows");
      }
      rows.emplace_back(std::stod(line.substr(0, comma)),
                        std::stod(line.substr(comma + 1)));
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [t, val] : rows) {
      if (t == 0.0) {
        g.value_at_zero = val;
      } else {
        g.knots.push_back(t);
        g.values.push_back(val);
      }
    }
    if (g.knots.empty()) throw std::invalid_argument("grid file: no knots");
    if (std::isnan(g.value_at_zero)) g.value_at_zero = g.values.front();
    u = std::move(g);
  } else {
    throw std::invalid_argument("unknown profile family: '" + head + "'");
  }
  validate_profile(u);
  return u;
}

inline std::string format_profile(const RadialProfile& u) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, TruncatedLog>) {
          os << "truncated-log:c=" << v.c << ",beta=" << v.beta;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          os << "power:alpha=" << v.alpha << ",k=" << v.k;
        } else if constexpr (std::is_same_v<T, QuadraticBall>) {
          os << "quadratic:a=" << v.a;
        } else {
          os << "grid:" << v.knots.size() << "-knots";
        }
        return os.str();
      },
      u);
}

}  // namespace pluri
