#pragma once

// Closed-form constants of the pluricomplex Moser-Trudinger and Sobolev
// inequalities on bounded hyperconvex domains, their ball-specific
// refinements, and the optimizers behind the sharp ball Sobolev constant at
// p = q = 1.
//
// beta_n below is the dimensional constant of the exponential estimate used
// by the Moser-Trudinger bound; no numerical value is published for it, so
// it enters as a configuration parameter (default 0) and campaign reports
// carry the empirical additive constant alongside.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "pluri/rootfind.hpp"
#include "pluri/specfun.hpp"

namespace pluri {

inline double two_pi_pow(int n) { return std::pow(2.0 * M_PI, n); }

inline double ball_volume(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return std::pow(M_PI, n) / f;
}

// 2 pi^n / (n-1)!, the radial surface factor of the unit sphere in C^n.
inline double sphere_factor(int n) {
  double f = 1.0;
  for (int i = 2; i <= n - 1; ++i) f *= i;
  return 2.0 * std::pow(M_PI, n) / f;
}

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(std::string("constants: ") + what);
}

inline double fact(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace detail

// Moser-Trudinger constants for a domain of the given diameter:
//   A = log((pi^n + beta_n eps n/(n - eps n)^n) diam^{2n}),
//   B = (2 eps n)^{-n/p}.
inline std::pair<double, double> mt_constants(double p, int n, double eps,
                                              double beta_n, double diam) {
  detail::require(p > 0.0, "p must be > 0");
  detail::require(n >= 2, "n must be >= 2");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  detail::require(beta_n >= 0.0, "beta_n must be >= 0");
  detail::require(diam > 0.0, "diam must be > 0");
  const double en = eps * n;
  const double correction = beta_n * en / std::pow(n - en, n);
  const double A =
      std::log((std::pow(M_PI, n) + correction) * std::pow(diam, 2 * n));
  const double B = std::pow(2.0 * en, -static_cast<double>(n) / p);
  return {A, B};
}

// Lower bound for the optimal B on any bounded hyperconvex domain:
//   p / ((4 pi)^{n/p} (n+p)^{1 + n/p}).
inline double b_lower(double p, int n) {
  detail::require(p > 0.0, "p must be > 0");
  detail::require(n >= 2, "n must be >= 2");
  const double np = static_cast<double>(n) / p;
  return p / (std::pow(4.0 * M_PI, np) * std::pow(n + p, 1.0 + np));
}

// Upper bound for the optimal B on the unit ball:
//   (p^{p-1} / ((4 pi)^n (n+1)^{n+1} (n+p)^{p-1}))^{1/p}.
inline double b_upper_ball(double p, int n) {
  detail::require(p > 0.0, "p must be > 0");
  detail::require(n >= 2, "n must be >= 2");
  const double inner = std::pow(p, p - 1.0) /
                       (std::pow(4.0 * M_PI, n) * std::pow(n + 1.0, n + 1.0) *
                        std::pow(n + p, p - 1.0));
  return std::pow(inner, 1.0 / p);
}

// Sobolev constants derived from (A, B):
//   C = e^{A/q} (n+p) B^{p/(n+p)} / (n^{n/(n+p)} p^{p/(n+p)})
//       * Gamma(nq/(n+p) + 1)^{1/q},
//   D = 2 e^{A} (n+p)^{p/(n+p)} B^{p/(n+p)} / p^{p/(n+p)}  (q-independent).
inline std::pair<double, double> sobolev_constants(double p, double q, int n,
                                                   double A, double B) {
  detail::require(p > 0.0, "p must be > 0");
  detail::require(q > 0.0, "q must be > 0");
  detail::require(n >= 2, "n must be >= 2");
  detail::require(B > 0.0, "B must be > 0");
  const double s = static_cast<double>(n) / (n + p);
  const double gamma_factor =
      std::exp(log_gamma(n * q / (n + p) + 1.0) / q);
  const double C = std::exp(A / q) * (n + p) * std::pow(B, p / (n + p)) /
                   (std::pow(n, s) * std::pow(p, p / (n + p))) * gamma_factor;
  const double D = 2.0 * std::exp(A) * std::pow(n + p, p / (n + p)) *
                   std::pow(B, p / (n + p)) / std::pow(p, p / (n + p));
  return {C, D};
}

// Mixed-energy Holder constant d(p, n): three regimes in p.
inline double holder_d(double p, int n) {
  detail::require(p > 0.0, "p must be > 0");
  detail::require(n >= 2, "n must be >= 2");
  if (p < 1.0) return std::pow(1.0 / p, n / (n - p));
  if (p == 1.0) return 1.0;
  const double alpha =
      (p + 2.0) * std::pow((p + 1.0) / p, n - 1) - (p + 1.0);
  return std::pow(p, p * alpha / (p - 1.0));
}

// Exponent of the sharp exponential integrability statement:
//   alpha(p, n) = 4 pi n p^{1/n} ((n+1)/(n+p))^{(n+1)/n}.
inline double alpha_exponent(double p, int n) {
  detail::require(p > 0.0, "p must be > 0");
  detail::require(n >= 2, "n must be >= 2");
  return 4.0 * M_PI * n * std::pow(p, 1.0 / n) *
         std::pow((n + 1.0) / (n + p), (n + 1.0) / n);
}

// Upper bound for the ball Sobolev constant from the Lebesgue-normalized
// quadratic test profile, valid for 0 < q <= n+p; m = ceil(q - p) with
// natural numbers including 0:
//   C <= pi^{n(n+p-q)/(q(n+p))} (n B(p+1,n))^{(n-m)/((n+p)(p+m))}
//        d(p,n)^{1/(p+m)} ((p+1)...(p+m))^{1/(p+m)}
//        / (4^{n/(n+p)} (n!)^{1/q}).
inline double ball_upper_C(double p, double q, int n) {
  detail::require(p > 0.0, "p must be > 0");
  detail::require(q > 0.0 && q <= n + p, "q must lie in (0, n+p]");
  detail::require(n >= 2, "n must be >= 2");
  const int m = std::max(0, static_cast<int>(std::ceil(q - p - 1e-12)));
  const double pm = p + m;
  const double rising =
      std::exp(log_gamma(p + m + 1.0) - log_gamma(p + 1.0));  // (p+1)...(p+m)
  return std::pow(M_PI, n * (n + p - q) / (q * (n + p))) *
         std::pow(n * beta_fn(p + 1.0, n), (n - m) / ((n + p) * pm)) *
         std::pow(holder_d(p, n), 1.0 / pm) * std::pow(rising, 1.0 / pm) /
         (std::pow(4.0, n / (n + p)) * std::pow(detail::fact(n), 1.0 / q));
}

// f(beta) = B(q+1, beta) beta^{1+qs}; its supremum over beta > 0 produces the
// lower Sobolev bound from the power family, with s = n/(n+p).
inline double family_f(double beta, double q, double s) {
  detail::require(beta > 0.0, "beta must be > 0");
  detail::require(q > 0.0, "q must be > 0");
  detail::require(s > 0.0 && s < 1.0, "s must lie in (0, 1)");
  return beta_fn(q + 1.0, beta) * std::pow(beta, 1.0 + q * s);
}

inline double family_f_prime(double beta, double q, double s) {
  detail::require(beta > 0.0, "beta must be > 0");
  detail::require(q > 0.0, "q must be > 0");
  detail::require(s > 0.0 && s < 1.0, "s must lie in (0, 1)");
  return beta_fn(q + 1.0, beta) * std::pow(beta, s * q) *
         (beta * (digamma_fn(beta) - digamma_fn(beta + q + 1.0)) + 1.0 + s * q);
}

// For integer q the stationarity condition of f reads
//   sum_{j=0}^{q} beta/(beta + q - j) = 1 + q s,
// whose left side increases strictly from 1 to q+1; the root is unique.
inline double solve_sol(int q, double s) {
  detail::require(q >= 1, "q must be a positive integer");
  detail::require(s > 0.0 && s < 1.0, "s must lie in (0, 1)");
  auto residual = [q, s](double beta) {
    double lhs = 0.0;
    for (int j = 0; j <= q; ++j) lhs += beta / (beta + (q - j));
    return lhs - (1.0 + q * s);
  };
  const double hi = expand_upward(residual, 1.0);
  const double root = bisect_root(residual, 1e-300, hi, 1e-12);
  // one verification that f' changes sign across the root
  const double d = std::max(1e-9, 1e-6 * root);
  if (!(family_f_prime(root - d, q, s) >= 0.0 &&
        family_f_prime(root + d, q, s) <= 0.0)) {
    throw std::runtime_error("solve_sol: stationarity verification failed");
  }
  return root;
}

namespace detail {

// Maximizer of family_f for arbitrary real q > 0 via the strictly decreasing
// factor g(beta) = beta (psi(beta) - psi(beta+q+1)) + 1 + s q.
inline double family_f_argmax(double q, double s) {
  auto neg_g = [q, s](double beta) {
    return -(beta * (digamma_fn(beta) - digamma_fn(beta + q + 1.0)) + 1.0 + s * q);
  };
  const double hi = expand_upward(neg_g, 1.0);
  return bisect_root(neg_g, 1e-300, hi, 1e-12);
}

}  // namespace detail

// Lower bound for the ball Sobolev constant, exact maximization over the
// power family (integer q uses the finite-sum stationarity equation):
//   C >= pi^{n(n+p-q)/(q(n+p))} f(beta0)^{1/q}
//        / (4^{n/(n+p)} (n!)^{1/q} n^{(n+1)/(n+p)} B(p+1,n)^{1/(n+p)}).
inline double ball_lower_C(double p, double q, int n) {
  detail::require(p > 0.0, "p must be > 0");
  detail::require(q >= 1.0, "q must be >= 1");
  detail::require(n >= 2, "n must be >= 2");
  const double s = static_cast<double>(n) / (n + p);
  const bool integral_q = std::fabs(q - std::round(q)) < 1e-9;
  const double beta0 = integral_q
                           ? solve_sol(static_cast<int>(std::round(q)), s)
                           : detail::family_f_argmax(q, s);
  const double f0 = family_f(beta0, q, s);
  return std::pow(M_PI, n * (n + p - q) / (q * (n + p))) * std::pow(f0, 1.0 / q) /
         (std::pow(4.0, n / (n + p)) * std::pow(detail::fact(n), 1.0 / q) *
          std::pow(n, (n + 1.0) / (n + p)) *
          std::pow(beta_fn(p + 1.0, n), 1.0 / (n + p)));
}

// Same bound evaluated at the closed-form approximate maximizer
// beta = (q+1) n / (2p), q >= 2; never beats ball_lower_C.
inline double ball_lower_C_approx(double p, double q, int n) {
  detail::require(p > 0.0, "p must be > 0");
  detail::require(q >= 2.0, "q must be >= 2");
  detail::require(n >= 2, "n must be >= 2");
  const double s = static_cast<double>(n) / (n + p);
  const double beta_hat = (q + 1.0) * n / (2.0 * p);
  const double f0 = family_f(beta_hat, q, s);
  return std::pow(M_PI, n * (n + p - q) / (q * (n + p))) * std::pow(f0, 1.0 / q) /
         (std::pow(4.0, n / (n + p)) * std::pow(detail::fact(n), 1.0 / q) *
          std::pow(n, (n + 1.0) / (n + p)) *
          std::pow(beta_fn(p + 1.0, n), 1.0 / (n + p)));
}

// The sharp ball constant at p = q = 1:
//   C(1,1,n,B) = pi^{n^2/(n+1)} / (4^{n/(n+1)} n! (n+1)^{n/(n+1)}).
inline double optimal_C11(int n) {
  detail::require(n >= 2, "n must be >= 2");
  return std::pow(M_PI, static_cast<double>(n) * n / (n + 1)) /
         (std::pow(4.0, n / (n + 1.0)) * detail::fact(n) *
          std::pow(n + 1.0, n / (n + 1.0)));
}

struct ConstantSet {
  double A = 0.0;
  double B = 0.0;
  double B_lower = 0.0;
  double B_upper_ball = 0.0;
  double C_sobolev = 0.0;
  double D_sobolev = 0.0;
  double d_holder = 0.0;
  double alpha_exp = 0.0;
  struct {
    double p = 1.0, q = 1.0;
    int n = 2;
    double eps = 0.5, beta_n = 0.0, diam = 2.0;
  } params;
};

inline ConstantSet constant_set(double p, double q, int n, double eps,
                                double beta_n, double diam) {
  ConstantSet cs;
  cs.params = {p, q, n, eps, beta_n, diam};
  const auto [A, B] = mt_constants(p, n, eps, beta_n, diam);
  cs.A = A;
  cs.B = B;
  cs.B_lower = b_lower(p, n);
  cs.B_upper_ball = b_upper_ball(p, n);
  const auto [C, D] = sobolev_constants(p, q, n, A, B);
  cs.C_sobolev = C;
  cs.D_sobolev = D;
  cs.d_holder = holder_d(p, n);
  cs.alpha_exp = alpha_exponent(p, n);
  return cs;
}

}  // namespace pluri
