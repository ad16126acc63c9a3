#pragma once

// Real-argument special functions on the positive half line: log-gamma,
// gamma, beta and digamma.  Everything is self-contained (no libm gamma
// calls) and evaluated internally in long double so that identity tests
// such as Gamma(x+1) = x*Gamma(x) survive at the 1e-12 level even when
// |log Gamma| is large.

#include <cmath>
#include <stdexcept>
#include <string>

namespace pluri {

// Value together with a conservative absolute error bound.
struct SpecialValue {
  double value = 0.0;
  double abs_error_bound = 0.0;
};

namespace detail {

inline void require_positive(double x, const char* fn) {
  if (!(x > 0.0)) {
    throw std::domain_error(std::string(fn) + ": argument must be > 0, got " +
                            std::to_string(x));
  }
}

// Lanczos approximation with g = 671/128 and 14 coefficients.
// Relative accuracy of the underlying approximant is ~1e-15; evaluating in
// long double keeps the expression rounding below that.
inline long double lanczos_log_gamma(long double x) {
  static const long double cof[14] = {
      57.1562356658629235L,     -59.5979603554754912L,
      14.1360979747417471L,     -0.491913816097620199L,
      0.339946499848118887e-4L, 0.465236289270485756e-4L,
      -0.983744753048795646e-4L, 0.158088703224912494e-3L,
      -0.210264441724104883e-3L, 0.217439618115212643e-3L,
      -0.164318106536763890e-3L, 0.844182239838527433e-4L,
      -0.261908384015814087e-4L, 0.368991826595316234e-5L};
  const long double g_half = 5.24218750000000000L;  // 671/128 = g + 1/2
  long double y = x;
  long double tmp = x + g_half;
  tmp = (x + 0.5L) * std::log(tmp) - tmp;
  long double ser = 0.999999999999997092L;
  for (int j = 0; j < 14; ++j) ser += cof[j] / ++y;
  return tmp + std::log(2.5066282746310005L * ser / x);
}

// Asymptotic digamma with Bernoulli-number tail, after shifting x >= 12.
inline long double digamma_core(long double x) {
  long double acc = 0.0L;
  while (x < 12.0L) {
    acc -= 1.0L / x;
    x += 1.0L;
  }
  const long double inv = 1.0L / x;
  const long double inv2 = inv * inv;
  // 1/12, -1/120, 1/252, -1/240, 1/132, -691/32760, 1/12
  long double series = inv2 * (1.0L / 12.0L +
                       inv2 * (-1.0L / 120.0L +
                       inv2 * (1.0L / 252.0L +
                       inv2 * (-1.0L / 240.0L +
                       inv2 * (1.0L / 132.0L +
                       inv2 * (-691.0L / 32760.0L +
                       inv2 * (1.0L / 12.0L)))))));
  return acc + std::log(x) - 0.5L * inv - series;
}

}  // namespace detail

// log Gamma(x), x > 0.
inline double log_gamma(double x) {
  detail::require_positive(x, "log_gamma");
  if (x == 1.0 || x == 2.0) return 0.0;
  return static_cast<double>(detail::lanczos_log_gamma(x));
}

// Gamma(x), x > 0.  Overflows to +inf for x > ~171.6.
inline double gamma_fn(double x) {
  detail::require_positive(x, "gamma_fn");
  return static_cast<double>(std::exp(detail::lanczos_log_gamma(x)));
}

// Euler beta function B(x, y) = Gamma(x)Gamma(y)/Gamma(x+y), x, y > 0.
inline double beta_fn(double x, double y) {
  detail::require_positive(x, "beta_fn");
  detail::require_positive(y, "beta_fn");
  const long double lb = detail::lanczos_log_gamma(x) +
                         detail::lanczos_log_gamma(y) -
                         detail::lanczos_log_gamma(static_cast<long double>(x) + y);
  return static_cast<double>(std::exp(lb));
}

inline double log_beta(double x, double y) {
  detail::require_positive(x, "log_beta");
  detail::require_positive(y, "log_beta");
  return static_cast<double>(detail::lanczos_log_gamma(x) +
                             detail::lanczos_log_gamma(y) -
                             detail::lanczos_log_gamma(static_cast<long double>(x) + y));
}

// Digamma psi(x), x > 0.
inline double digamma_fn(double x) {
  detail::require_positive(x, "digamma_fn");
  return static_cast<double>(detail::digamma_core(x));
}

// Contract wrappers carrying error bounds.

inline SpecialValue lngamma(double x) {
  const double v = log_gamma(x);
  return {v, 5e-15 * (std::fabs(v) + 1.0)};
}

inline SpecialValue beta(double x, double y) {
  const double v = beta_fn(x, y);
  return {v, 2e-14 * std::fabs(v)};
}

inline SpecialValue digamma(double x) {
  const double v = digamma_fn(x);
  return {v, 5e-15 * (std::fabs(v) + 1.0)};
}

}  // namespace pluri
