#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <vector>

#include "pluri/radial.hpp"

using namespace pluri;

namespace {
double relerr(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

// Piecewise-linear-in-log ramp smoothing of c*max(log t, beta): slope climbs
// 0 -> c over [beta-eps, beta+eps].  Used as a mollification oracle for the
// atom carried by the kink.
GridProfile mollified_truncated_log(double c, double beta, double eps, int ramp_pts) {
  GridProfile g;
  std::vector<double> xs;
  for (int i = 0; i <= ramp_pts; ++i) {
    xs.push_back(beta - eps + 2.0 * eps * i / ramp_pts);
  }
  xs.push_back(0.0);  // t = 1
  // integrate the ramp slope s(x) = c*(x - (beta-eps))/(2 eps) from the left
  double v = 0.0;  // fix later by boundary condition
  std::vector<double> vals(xs.size(), 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double x0 = xs[i - 1], x1 = xs[i];
    double s0, s1;
    auto ramp = [&](double x) {
      if (x <= beta - eps) return 0.0;
      if (x >= beta + eps) return c;
      return c * (x - (beta - eps)) / (2.0 * eps);
    };
    s0 = ramp(x0);
    s1 = ramp(x1);
    vals[i] = vals[i - 1] + 0.5 * (s0 + s1) * (x1 - x0);
  }
  v = vals.back();
  for (auto& vv : vals) vv -= v;  // boundary value 0 at t=1
  for (double x : xs) g.knots.push_back(std::exp(x));
  g.values = vals;
  g.value_at_zero = vals.front();
  return g;
}
}  // namespace

TEST_CASE("eval closed forms") {
  CHECK(eval(RadialProfile{PowerLaw{1.0, 1.0}}, 0.0) == -1.0);
  CHECK(relerr(eval(RadialProfile{TruncatedLog{1.0, -2.0}}, std::exp(-3.0)), -2.0) <
        1e-15);
  CHECK(relerr(eval(RadialProfile{TruncatedLog{2.0, -1.0}}, std::exp(-0.5)), -1.0) <
        1e-15);
  CHECK_THROWS_AS(eval(RadialProfile{PowerLaw{1.0, 1.0}}, 1.5), std::domain_error);
  CHECK_THROWS_AS(eval(RadialProfile{PowerLaw{1.0, 1.0}}, -0.1), std::domain_error);
}

TEST_CASE("left derivative") {
  const RadialProfile pw{PowerLaw{1.3, 2.0}};
  for (double t : {0.2, 0.5, 0.9}) {
    CHECK(relerr(left_derivative(pw, t), 2.0 * 1.3 * 2.0 * std::pow(t, 2.0 * 1.3 - 1.0)) <
          1e-13);
  }
  const double beta = -1.0, c = 1.5;
  const RadialProfile tl{TruncatedLog{c, beta}};
  const double a = std::exp(beta);
  CHECK(left_derivative(tl, 0.5 * a) == 0.0);
  CHECK(left_derivative(tl, a) == 0.0);  // left limit at the kink
  CHECK(relerr(left_derivative(tl, 2.0 * a), c / (2.0 * a)) < 1e-15);

  // flat grid segment has zero slope
  GridProfile g;
  g.knots = {0.25, 0.5, 1.0};
  g.values = {-1.0, -1.0, 0.0};
  g.value_at_zero = -1.0;
  CHECK(left_derivative(RadialProfile{g}, 0.4) == 0.0);
}

TEST_CASE("admissibility reports") {
  CHECK(is_radial_psh(RadialProfile{PowerLaw{1.0, 1.0}}).admissible());
  const auto tl = is_radial_psh(RadialProfile{TruncatedLog{2.0, -3.0}});
  CHECK(tl.admissible());
  CHECK(tl.boundary_zero);

  GridProfile bump;  // strict interior maximum: not monotone
  bump.knots = {0.1, 0.5, 1.0};
  bump.values = {-2.0, -0.5, -1.0};
  bump.value_at_zero = -2.0;
  const auto rep = is_radial_psh(RadialProfile{bump});
  CHECK(!rep.nondecreasing);
  CHECK(!rep.admissible());
}

TEST_CASE("Monge-Ampere mass: truncated log carries a single atom") {
  const double c = 2.0, beta = -1.5;
  const int n = 2;
  const auto d = ma_distribution(RadialProfile{TruncatedLog{c, beta}}, n);
  REQUIRE(d.mass.atoms.size() == 1);
  CHECK(relerr(d.mass.atoms[0].t, std::exp(beta)) < 1e-15);
  CHECK(relerr(d.mass.atoms[0].jump, std::pow(c, n)) < 1e-13);
  CHECK(relerr(d.total_mass, std::pow(c, n)) < 1e-13);
  CHECK(d.mass.origin_mass == 0.0);
}

TEST_CASE("mollified kink reproduces the atom in the limit") {
  const double c = 2.0, beta = -1.5;
  const int n = 2;
  const double atom_jump = std::pow(c, n);
  double prev_window_defect = 1e300;
  for (double eps : {0.4, 0.1, 0.025}) {
    const GridProfile g = mollified_truncated_log(c, beta, eps, 64);
    const auto d = ma_distribution(RadialProfile{g}, n);
    double total = d.mass.origin_mass;
    double window = 0.0;
    for (const Atom& a : d.mass.atoms) {
      total += a.jump;
      const double x = std::log(a.t);
      if (x >= beta - 1.01 * eps && x <= beta + 1.01 * eps) window += a.jump;
    }
    CAPTURE(eps);
    CHECK(relerr(total, atom_jump) < 1e-10);   // total mass preserved
    CHECK(relerr(window, atom_jump) < 1e-10);  // and concentrated on the ramp
    const double defect = 2.0 * eps;           // support width shrinks
    CHECK(defect < prev_window_defect);
    prev_window_defect = defect;
  }
}

TEST_CASE("Monge-Ampere mass: power family density and total") {
  const double alpha = 1.4, k = 0.8;
  const int n = 3;
  const auto d = ma_distribution(RadialProfile{PowerLaw{alpha, k}}, n);
  CHECK(d.mass.atoms.empty());
  CHECK(relerr(d.total_mass, std::pow(2.0 * alpha * k, n)) < 1e-13);
  // F(t) = (2 alpha k)^n t^{2 alpha n}
  for (double t : {0.3, 0.6, 0.95}) {
    CHECK(relerr(d.mass.cumulative(t),
                 std::pow(2.0 * alpha * k, n) * std::pow(t, 2.0 * alpha * n)) < 1e-12);
  }
  // density integrates back to the cumulative
  auto q = pluri::integrate(d.mass.density, 1e-11, true);
  CHECK(q.converged);
  CHECK(relerr(q.value, d.total_mass) < 1e-9);
}

TEST_CASE("Monge-Ampere mass: Lebesgue quadratic normalization") {
  for (int n : {2, 3, 4}) {
    const auto d = ma_distribution(phi0_profile(n), n);
    // total normalized mass = lambda_2n(B) / (2 pi)^n = 1 / (2^n n!)
    CAPTURE(n);
    CHECK(relerr(d.total_mass, 1.0 / (std::pow(2.0, n) * factorial(n))) < 1e-13);
  }
}

TEST_CASE("mass scales like c^n") {
  const int n = 3;
  const double c = 2.7;
  const RadialProfile u{PowerLaw{1.2, 0.9}};
  const auto d1 = ma_distribution(u, n);
  const auto d2 = ma_distribution(scale_profile(u, c), n);
  CHECK(relerr(d2.total_mass, std::pow(c, n) * d1.total_mass) < 1e-12);
  const RadialProfile tl{TruncatedLog{1.1, -0.7}};
  const auto a1 = ma_distribution(tl, n);
  const auto a2 = ma_distribution(scale_profile(tl, c), n);
  CHECK(relerr(a2.mass.atoms[0].jump, std::pow(c, n) * a1.mass.atoms[0].jump) < 1e-12);
}

TEST_CASE("polarization: pointwise binomial identity for mixed masses") {
  const int n = 3;
  const RadialProfile u{PowerLaw{1.0, 2.0}};
  const RadialProfile w{TruncatedLog{1.5, -0.8}};
  const auto sum = sum_mass({u, w}, n);
  for (double t : {0.2, std::exp(-0.8), 0.7, 0.97}) {
    double binom = 0.0;
    for (int k = 0; k <= n; ++k) {
      std::vector<RadialProfile> us;
      for (int i = 0; i < k; ++i) us.push_back(u);
      for (int i = k; i < n; ++i) us.push_back(w);
      const auto mm = mixed_mass(us);
      double coef = 1.0;
      for (int i = 0; i < k; ++i) coef *= static_cast<double>(n - i) / (i + 1);
      binom += coef * mm.cumulative(t);
    }
    CAPTURE(t);
    CHECK(relerr(sum.cumulative(t), binom) < 1e-12);
  }
}

TEST_CASE("log-slope is nondecreasing for admissible profiles") {
  const std::vector<RadialProfile> us = {
      RadialProfile{PowerLaw{0.7, 3.0}}, RadialProfile{TruncatedLog{2.0, -2.0}},
      phi0_profile(2)};
  for (const auto& u : us) {
    double prev = -1.0;
    for (int i = 1; i <= 40; ++i) {
      const double t = static_cast<double>(i) / 41.0;
      const double s = log_slope(u, t, -1);
      CHECK(s >= prev - 1e-12);
      prev = s;
    }
  }
}

TEST_CASE("solver: atom target reconstructs the truncated log") {
  const double mass = 8.0, beta = -1.0;  // m = 2, jump = m^n with n = 3
  const int n = 3;
  MaDistribution target;
  target.mass.atoms = {{std::exp(beta), mass}};
  target.total_mass = mass;
  const RadialProfile w = solve_radial_ma(target, n);
  const RadialProfile want{TruncatedLog{2.0, beta}};
  const auto& g = std::get<GridProfile>(w);
  double sup = 0.0;
  for (std::size_t i = 0; i < g.knots.size(); ++i) {
    sup = std::max(sup, std::fabs(g.values[i] - eval(want, g.knots[i])));
  }
  CHECK(sup < 1e-12);
  CHECK(std::fabs(eval(w, 0.5 * std::exp(beta)) - eval(want, 0.5 * std::exp(beta))) <
        1e-12);
}

TEST_CASE("solver: smooth power target reconstructs the power profile") {
  const double alpha = 1.0, k = 1.0;
  const int n = 2;
  const auto target = ma_distribution(RadialProfile{PowerLaw{alpha, k}}, n);
  const RadialProfile w = solve_radial_ma(target, n);
  const auto& g = std::get<GridProfile>(w);
  const RadialProfile want{PowerLaw{alpha, k}};
  double sup = 0.0;
  for (std::size_t i = 0; i < g.knots.size(); ++i) {
    sup = std::max(sup, std::fabs(g.values[i] - eval(want, g.knots[i])));
  }
  CHECK(sup < 1e-8);
}

TEST_CASE("solver: zero mass gives the zero profile") {
  MaDistribution target;
  target.total_mass = 0.0;
  const RadialProfile w = solve_radial_ma(target, 2);
  CHECK(std::fabs(eval(w, 0.3)) == 0.0);
  CHECK(std::fabs(eval(w, 0.0)) == 0.0);
}

TEST_CASE("solver rejects infinite mass") {
  MaDistribution target;
  target.total_mass = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solve_radial_ma(target, 2), std::invalid_argument);
}

TEST_CASE("round trip: solve after mass extraction is the identity") {
  const std::vector<RadialProfile> profiles = {
      RadialProfile{PowerLaw{1.0, 1.0}}, RadialProfile{PowerLaw{2.5, 0.6}},
      RadialProfile{TruncatedLog{1.0, -1.0}}, RadialProfile{TruncatedLog{3.0, -4.0}}};
  for (const auto& u : profiles) {
    const auto d = ma_distribution(u, 2);
    const RadialProfile w = solve_radial_ma(d, 2);
    const auto& g = std::get<GridProfile>(w);
    double sup = 0.0;
    for (std::size_t i = 0; i < g.knots.size(); ++i) {
      sup = std::max(sup, std::fabs(g.values[i] - eval(u, g.knots[i])));
    }
    CAPTURE(format_profile(u));
    CHECK(sup <= 1e-6);
  }
}

TEST_CASE("comparison bound holds on the grid") {
  {
    const auto reports =
        comparison_check(RadialProfile{TruncatedLog{1.0, -1.0}}, 1.0, 2, {1.0});
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == Verdict::holds);
    CHECK(reports[0].slack >= 0.0);
  }
  {
    const auto reports =
        comparison_check(RadialProfile{PowerLaw{1.0, 1.0}}, 1.0, 2, {0.1, 1.0, 10.0});
    for (const auto& r : reports) {
      CAPTURE(r.params[0].second);
      CHECK(r.verdict == Verdict::holds);
      CHECK(r.slack >= -1e-9);
    }
    // large t: the bound's right side is dominated by -t, slack grows
    const auto far = comparison_check(RadialProfile{PowerLaw{1.0, 1.0}}, 1.0, 2, {1e6});
    CHECK(far[0].slack > 1e5);
  }
}

TEST_CASE("sublevel radius") {
  const RadialProfile tl{TruncatedLog{2.0, -1.0}};  // sup = 2
  CHECK(sublevel_radius(tl, 3.0) == 0.0);                      // beyond the range
  CHECK(relerr(sublevel_radius(tl, 2.0), std::exp(-1.0)) < 1e-12);
  CHECK(relerr(sublevel_radius(tl, 1.0), std::exp(-0.5)) < 1e-12);
  const RadialProfile pw{PowerLaw{1.0, 4.0}};
  CHECK(relerr(sublevel_radius(pw, 1.0), std::sqrt(1.0 - 0.25)) < 1e-12);
  CHECK(sublevel_radius(pw, 0.0) == 1.0);
}

TEST_CASE("layer-cake identity for the energy integral") {
  // p int_0^inf s^{p-1} mass{u <= -s} ds equals the Stieltjes integral of
  // (-u)^p against dF.  The left side uses closed-form sublevel masses per
  // family, independent of the mass-function plumbing.
  const int n = 2;
  struct Case {
    RadialProfile u;
    std::function<double(double)> sublevel_mass;  // mass of {u <= -s}
    double sup;
  };
  const double c = 2.0, beta = -1.5;
  const double alpha = 1.3, k = 2.0;
  std::vector<Case> cases;
  cases.push_back({RadialProfile{TruncatedLog{c, beta}},
                   [=](double s) { return s <= -c * beta ? std::pow(c, n) : 0.0; },
                   -c * beta});
  cases.push_back(
      {RadialProfile{PowerLaw{alpha, k}},
       [=](double s) {
         if (s >= k) return 0.0;
         const double r = std::pow(1.0 - s / k, 1.0 / (2.0 * alpha));
         return std::pow(2.0 * alpha * k, n) * std::pow(r, 2.0 * alpha * n);
       },
       k});
  for (const auto& cs : cases) {
    for (double p : {1.0, 2.0}) {
      // substitute s = sup * y to use the unit-interval integrator
      auto integrand = [&](double y) {
        return p * std::pow(cs.sup, p) * std::pow(y, p - 1.0) *
               cs.sublevel_mass(cs.sup * y);
      };
      const auto layer = integrate(integrand, 1e-9, true);
      const auto d = ma_distribution(cs.u, n);
      const auto direct = stieltjes(
          [&](double t) { return std::pow(std::max(0.0, -eval(cs.u, t)), p); },
          d.mass, 1e-10);
      CAPTURE(format_profile(cs.u));
      CAPTURE(p);
      CHECK(layer.converged);
      CHECK(std::fabs(layer.value - direct.value) /
                std::max(std::fabs(direct.value), 1e-300) <
            1e-6);
    }
  }
}

TEST_CASE("profile literals parse and validate") {
  const auto tl = parse_profile("truncated-log:c=6,beta=-2", 2);
  CHECK(std::get<TruncatedLog>(tl).c == 6.0);
  CHECK(std::get<TruncatedLog>(tl).beta == -2.0);
  const auto pw = parse_profile("power:alpha=1,k=3", 2);
  CHECK(std::get<PowerLaw>(pw).k == 3.0);
  const auto q2 = parse_profile("quadratic", 2);
  CHECK(relerr(std::get<QuadraticBall>(q2).a, lebesgue_quadratic_coefficient(2)) <
        1e-15);
  CHECK_THROWS_AS(parse_profile("gaussian:s=1", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_profile("power:alpha=-1,k=3", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_profile("truncated-log:c=1,beta=2", 2), std::invalid_argument);
}

TEST_CASE("grid CSV round trip") {
  const char* path = "grid_profile_test.csv";
  {
    std::ofstream out(path);
    out << "t,value\n";
    out << "0,-3\n";
    out << "0.25,-1.0\n";
    out << "0.5,-0.5\n";
    out << "1.0,0.0\n";
  }
  const auto g = parse_profile(std::string("grid:@") + path, 2);
  const auto& gp = std::get<GridProfile>(g);
  CHECK(gp.knots.size() == 3);
  CHECK(gp.value_at_zero == -3.0);
  CHECK(eval(g, 0.5) == -0.5);
  std::remove(path);
}
