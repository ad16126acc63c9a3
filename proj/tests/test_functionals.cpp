#include "doctest.h"

#include <cmath>
#include <vector>

#include "pluri/functionals.hpp"

using namespace pluri;

namespace {
double relerr(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

RadialProfile ex1_profile(double j, double p, int n) {
  return TruncatedLog{1.0 / j, -std::pow(j, 1.0 + n / p)};
}
}  // namespace

TEST_CASE("p-energy of the power family matches its closed form") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double k : {0.5, 1.0, 3.0}) {
      for (double p : {0.5, 1.0, 2.0}) {
        for (int n : {2, 3}) {
          const RadialProfile u{PowerLaw{alpha, k}};
          const EnergyReport e = energy_p(u, p, n);
          const double want = *energy_p_closed(u, p, n);
          CAPTURE(alpha);
          CAPTURE(k);
          CAPTURE(p);
          CAPTURE(n);
          CHECK(!e.divergent);
          CHECK(relerr(e.value, want) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("scale-invariant family keeps energy (2 pi)^n") {
  for (int j : {1, 2, 5, 17, 50}) {
    for (double p : {0.5, 1.0, 2.0}) {
      for (int n : {2, 3}) {
        const EnergyReport e = energy_p(ex1_profile(j, p, n), p, n);
        CAPTURE(j);
        CAPTURE(p);
        CAPTURE(n);
        CHECK(relerr(e.value, two_pi_pow(n)) < 1e-10);
      }
    }
  }
}

TEST_CASE("p-energy of the Lebesgue quadratic profile") {
  for (int n : {2, 3}) {
    for (double p : {1.0, 2.0}) {
      const EnergyReport e = energy_p(phi0_profile(n), p, n);
      const double want = n * std::pow(M_PI, n) * beta_fn(p + 1.0, n) /
                          (std::pow(4.0, p) * std::pow(factorial(n), 1.0 + p / n));
      CAPTURE(n);
      CAPTURE(p);
      CHECK(relerr(e.value, want) < 1e-9);
    }
  }
}

TEST_CASE("smooth-formula route agrees with the Stieltjes master") {
  for (double alpha : {0.8, 1.0, 1.7}) {
    for (double p : {0.5, 1.0, 2.5}) {
      const RadialProfile u{PowerLaw{alpha, 1.3}};
      const EnergyReport master = energy_p(u, p, 2);
      const EnergyReport smooth = energy_p_smooth(u, p, 2);
      CAPTURE(alpha);
      CAPTURE(p);
      CHECK(relerr(smooth.value, master.value) < 1e-8);
    }
  }
}

TEST_CASE("homogeneity: e_p(c u) = c^{n+p} e_p(u)") {
  const double c = 2.3;
  for (double p : {0.5, 1.0, 2.0}) {
    for (int n : {2, 3}) {
      const RadialProfile u{PowerLaw{1.2, 0.8}};
      const double lhs = energy_p(scale_profile(u, c), p, n).value;
      const double rhs = std::pow(c, n + p) * energy_p(u, p, n).value;
      CAPTURE(p);
      CAPTURE(n);
      CHECK(relerr(lhs, rhs) < 1e-10);
      const RadialProfile tl{TruncatedLog{1.5, -2.0}};
      CHECK(relerr(energy_p(scale_profile(tl, c), p, n).value,
                   std::pow(c, n + p) * energy_p(tl, p, n).value) < 1e-10);
    }
  }
}

TEST_CASE("Holder chain between e_1 and e_p") {
  // e_1(u) <= e_p(u)^{1/p} ((2 pi)^n total_mass)^{1 - 1/p} for p > 1
  const std::vector<RadialProfile> us = {RadialProfile{PowerLaw{1.0, 2.0}},
                                         RadialProfile{TruncatedLog{2.0, -1.5}},
                                         phi0_profile(2)};
  for (const auto& u : us) {
    for (double p : {2.0, 3.0}) {
      const int n = 2;
      const double e1 = energy_p(u, 1.0, n).value;
      const double ep = energy_p(u, p, n).value;
      const double mass = two_pi_pow(n) * ma_distribution(u, n).total_mass;
      CAPTURE(format_profile(u));
      CAPTURE(p);
      CHECK(e1 <= std::pow(ep, 1.0 / p) * std::pow(mass, 1.0 - 1.0 / p) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("chi energy") {
  const int n = 2;
  const RadialProfile u{PowerLaw{1.0, 1.5}};
  // chi(t) = -(-t)^p reproduces the p-energy
  for (double p : {0.5, 1.0, 2.0}) {
    auto chi = [p](double t) { return -std::pow(-t, p); };
    CAPTURE(p);
    CHECK(relerr(energy_chi(u, chi, n).value, energy_p(u, p, n).value) < 1e-9);
  }
  // chi == 0 gives zero energy
  CHECK(energy_chi(u, [](double) { return 0.0; }, n).value == 0.0);
  // chi(t) = t on the truncated log: (2 pi)^n c^n (-c beta)
  const double c = 1.7, beta = -2.2;
  const RadialProfile tl{TruncatedLog{c, beta}};
  const double got = energy_chi(tl, [](double t) { return t; }, n).value;
  CHECK(relerr(got, two_pi_pow(n) * std::pow(c, n) * (-c * beta)) < 1e-12);
  // and equals the p = 1 energy oracle
  CHECK(relerr(got, energy_p(tl, 1.0, n).value) < 1e-12);
  // a chi with chi(0) != 0 is flagged
  CHECK(energy_chi(u, [](double t) { return t - 1.0; }, n).note != "");
}

TEST_CASE("mixed energy") {
  const int n = 2;
  const RadialProfile v{PowerLaw{1.0, 2.0}};
  // all factors equal to the weight profile: plain p-energy
  for (double p : {1.0, 1.5}) {
    const EnergyReport mixed = mixed_energy(v, {v, v}, p, n);
    CAPTURE(p);
    CHECK(relerr(mixed.value, energy_p(v, p, n).value) < 1e-9);
  }
  // all factors phi0: the Lebesgue integral of (-v)^p
  {
    const double p = 2.0;
    const EnergyReport mixed =
        mixed_energy(v, {phi0_profile(n), phi0_profile(n)}, p, n);
    auto f = [&](double t) {
      return std::pow(-eval(v, t), p) * std::pow(t, 2 * n - 1);
    };
    const auto direct = integrate(f, 1e-11, true);
    CHECK(relerr(mixed.value, sphere_factor(n) * direct.value) < 1e-8);
  }
  CHECK_THROWS_AS(mixed_energy(v, {v}, 1.0, n), std::invalid_argument);
}

TEST_CASE("binomial consistency of mixed masses") {
  // sum_k C(n,k) <(-v)^p, d(mixed mass u^k w^{n-k})> equals the energy of
  // (dd^c(u+w))^n against (-v)^p
  const int n = 2;
  const double p = 1.0;
  const RadialProfile v{PowerLaw{1.0, 1.0}};
  const RadialProfile u{PowerLaw{1.4, 0.7}};
  const RadialProfile w{TruncatedLog{1.2, -0.9}};
  auto g = [&](double t) { return std::pow(std::max(0.0, -eval(v, t)), p); };

  double binom = 0.0;
  for (int k = 0; k <= n; ++k) {
    std::vector<RadialProfile> us;
    for (int i = 0; i < k; ++i) us.push_back(u);
    for (int i = k; i < n; ++i) us.push_back(w);
    double coef = 1.0;
    for (int i = 0; i < k; ++i) coef *= static_cast<double>(n - i) / (i + 1);
    binom += coef * mixed_energy(v, us, p, n).value;
  }
  const auto sum_target = sum_mass({u, w}, n);
  const auto whole = stieltjes(g, sum_target, 1e-11);
  CHECK(relerr(binom, two_pi_pow(n) * whole.value) < 1e-8);
}

TEST_CASE("Lq norms") {
  const int n = 2;
  // power family closed form
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double k : {0.7, 2.0}) {
      for (double q : {1.0, 2.0, 3.5}) {
        const RadialProfile u{PowerLaw{alpha, k}};
        const double want_q = std::pow(M_PI, n) * std::pow(k, q) *
                              beta_fn(q + 1.0, n / alpha) /
                              (factorial(n - 1) * alpha);
        CAPTURE(alpha);
        CAPTURE(k);
        CAPTURE(q);
        CHECK(relerr(lq_norm(u, q, n).value, std::pow(want_q, 1.0 / q)) < 1e-9);
      }
    }
  }
  // zero profile
  CHECK(lq_norm(zero_profile(), 2.0, n).value == 0.0);
  // scale-invariant family norms vanish as j grows
  double prev = 1e300;
  for (double j : {1.0, 4.0, 16.0, 64.0}) {
    const double nrm = lq_norm(ex1_profile(j, 1.0, n), 1.0, n).value;
    CHECK(nrm < prev);
    prev = nrm;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("asymptotic closed form matches quadrature at the handoff depth") {
  // beta = -60 sits right at the closed-form switch; beta = -59.9 goes
  // through quadrature.  Both must agree to high accuracy.
  const int n = 2;
  const double c = 0.5;
  for (double q : {1.0, 2.0}) {
    const double deep = lq_norm(RadialProfile{TruncatedLog{c, -60.0}}, q, n).value;
    const double shallow =
        lq_norm(RadialProfile{TruncatedLog{c, -59.9}}, q, n).value;
    CAPTURE(q);
    CHECK(relerr(deep, shallow) < 1e-8);
  }
}

TEST_CASE("sup norm") {
  const int n = 2;
  const double p = 1.0;
  for (double j : {2.0, 10.0}) {
    // truncated log with c = j^{-p/(n+p)}, beta = -j has sup j^{n/(n+p)}
    const RadialProfile u{TruncatedLog{std::pow(j, -p / (n + p)), -j}};
    CHECK(relerr(sup_norm(u), std::pow(j, n / (n + p))) < 1e-14);
    // truncated log with c = j, beta = -1/j has sup 1
    const RadialProfile w{TruncatedLog{j, -1.0 / j}};
    CHECK(relerr(sup_norm(w), 1.0) < 1e-14);
  }
  CHECK(sup_norm(RadialProfile{PowerLaw{1.3, 4.2}}) == 4.2);
  GridProfile pole;
  pole.knots = {0.01, 1.0};
  pole.values = {-9.210340371976182, 0.0};  // 2 log t
  pole.value_at_zero = kNegInf;
  CHECK(sup_norm(RadialProfile{pole}) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("exponential integral") {
  const int n = 2;
  // u = 0: the volume of the unit ball
  CHECK(relerr(exp_integral(zero_profile(), n).value, ball_volume(n)) < 1e-10);
  // truncated log closed form against forced quadrature
  for (double c : {1.0, 3.0, 6.0}) {
    for (double beta : {-0.5, -1.0, -2.5}) {
      const RadialProfile u{TruncatedLog{c, beta}};
      const EnergyReport closed = exp_integral(u, n);
      const EnergyReport quad = exp_integral(u, n, 1e-11, true);
      CAPTURE(c);
      CAPTURE(beta);
      CHECK(closed.method == EnergyReport::Method::closed_form);
      CHECK(relerr(closed.value, quad.value) < 1e-9);
    }
  }
  // clamping removes the critical singularity at c = 2n
  const EnergyReport crit = exp_integral(RadialProfile{TruncatedLog{4.0, -1.5}}, n);
  CHECK(!crit.divergent);
  CHECK(relerr(crit.value, sphere_factor(n) * (0.25 + 1.5)) < 1e-12);
  // extreme truncation: value overflows, log_value stays finite
  const EnergyReport deep = exp_integral(RadialProfile{TruncatedLog{6.0, -1e4}}, n);
  CHECK(std::isinf(deep.value));
  CHECK(std::isfinite(deep.log_value));
  // log_value ~ (c-2n)(-beta) + log(2 pi^n/(n-1)! (1/2n + 1/(c-2n)))
  const double want = 2.0 * 1e4 + std::log(sphere_factor(n) * (0.25 + 0.5));
  CHECK(relerr(deep.log_value, want) < 1e-12);
}

TEST_CASE("exponential integral divergence for log poles") {
  // pure log slope 2n: integrand behaves like 1/t at the origin
  for (double slope : {4.0, 5.0}) {
    GridProfile g;
    g.knots = {1e-6, 1.0};
    g.values = {slope * std::log(1e-6), 0.0};
    g.value_at_zero = kNegInf;
    const EnergyReport e = exp_integral(RadialProfile{g}, 2);
    CAPTURE(slope);
    CHECK(e.divergent);
    CHECK(std::isinf(e.value));
  }
  // slope below 2n stays integrable
  GridProfile g;
  g.knots = {1e-6, 1.0};
  g.values = {3.0 * std::log(1e-6), 0.0};
  g.value_at_zero = kNegInf;
  CHECK(!exp_integral(RadialProfile{g}, 2).divergent);
}

TEST_CASE("sharp exponential integrability") {
  const int n = 2;
  const double p = 1.0;
  // bounded integrand for the quadratic-type profile
  const EnergyReport a = exp_alpha_integral(RadialProfile{PowerLaw{1.0, 1.0}}, p, n);
  CHECK(!a.divergent);
  CHECK(std::isfinite(a.value));
  // truncated-log sweep stays finite
  for (double beta : {-1.0, -5.0, -10.0, -20.0}) {
    const EnergyReport e =
        exp_alpha_integral(RadialProfile{TruncatedLog{2.0, beta}}, p, n);
    CAPTURE(beta);
    CHECK(!e.divergent);
    CHECK(std::isfinite(e.value));
  }
  // zero-energy profile violates the precondition
  GridProfile flat;
  flat.knots = {1.0};
  flat.values = {-0.25};
  flat.value_at_zero = -0.25;
  CHECK_THROWS_AS(exp_alpha_integral(RadialProfile{flat}, p, n), std::domain_error);
}
