#pragma once

// Adaptive 1-D integration on [0, 1] built on a 15-point Gauss-Kronrod pair,
// with geometric (dyadic) subdivision toward the endpoints so integrands may
// blow up at 0 or 1, a divergence detector for non-integrable endpoint
// singularities, and Riemann-Stieltjes integration against nondecreasing
// mass functions carrying atoms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace pluri {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  bool converged = false;
  bool divergent = false;
};

struct Atom {
  double t = 0.0;     // location in (0, 1]
  double jump = 0.0;  // nonnegative mass
};

// Nondecreasing mass function on [0, 1]: absolutely continuous part given by
// a density, plus point masses.  `cumulative`, when present, returns the
// left-continuous total mass of [0, t) in closed form; `origin_mass` is a
// point mass sitting at t = 0 (integrands against it are handled by callers,
// which know the weight's limit there).
struct MassFunction {
  std::function<double(double)> density;
  std::vector<Atom> atoms;
  std::vector<double> breakpoints;
  std::function<double(double)> cumulative;
  double origin_mass = 0.0;
};

namespace qk {

// QUADPACK dqk15 abscissae and weights on [-1, 1].
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double value = 0.0;
  double err = 0.0;
};

template <class F>
Panel gk15(const F& f, double a, double b) {
  const double hl = 0.5 * (b - a);
  const double center = 0.5 * (a + b);
  const double fc = f(center);
  double resg = wg[3] * fc;
  double resk = wgk[7] * fc;
  double resabs = wgk[7] * std::fabs(fc);
  double fv[15];
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * xgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    resk += wgk[j] * (f1 + f2);
    resabs += wgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = wgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += wgk[j] * (std::fabs(fv[j] - reskh) + std::fabs(fv[14 - j] - reskh));
  }
  resasc *= std::fabs(hl);
  resabs *= std::fabs(hl);
  double err = std::fabs((resk - resg) * hl);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  err = std::max(err, 50.0 * eps * resabs);
  return {resk * hl, err};
}

// Adaptive bisection driven by a worst-segment heap.
template <class F>
Panel adaptive(const F& f, double a, double b, double abs_tol,
               int max_segments = 400) {
  struct Seg {
    double a, b, value, err;
    bool operator<(const Seg& o) const { return err < o.err; }
  };
  Panel first = gk15(f, a, b);
  if (!std::isfinite(first.value)) return {0.0, std::numeric_limits<double>::infinity()};
  std::priority_queue<Seg> heap;
  heap.push({a, b, first.value, first.err});
  double total_v = first.value;
  double total_e = first.err;
  int segments = 1;
  while (total_e > abs_tol && segments < max_segments) {
    Seg worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // width at rounding floor
    heap.pop();
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    if (!std::isfinite(left.value) || !std::isfinite(right.value)) {
      heap.push(worst);
      break;
    }
    total_v += left.value + right.value - worst.value;
    total_e += left.err + right.err - worst.err;
    heap.push({worst.a, mid, left.value, left.err});
    heap.push({mid, worst.b, right.value, right.err});
    ++segments;
  }
  return {total_v, total_e};
}

}  // namespace qk

namespace detail {

struct ShellSum {
  double value = 0.0;
  double err = 0.0;
  bool divergent = false;
  bool exhausted = false;  // ran out of shells before the tail settled
};

// Integrate f over (0, c] (toward == -1) or [c, 1) (toward == +1) by dyadic
// shells accumulating toward the singular endpoint.  Divergence is declared
// when the last `divergence_run` shells each contribute more than
// `divergence_ratio` of the previous one.  For integrable power-type
// behavior the shell sums decay geometrically; once the ratio stabilizes the
// remaining tail is folded in as a geometric series with a drift-based error
// bound, which also sidesteps the 1-t representation floor near the right
// endpoint.
template <class F>
ShellSum shell_integrate(const F& f, double c, int toward, double shell_tol,
                         double noise_floor) {
  constexpr int divergence_run = 8;
  constexpr double divergence_ratio = 0.9;
  constexpr int max_shells = 1020;
  const double eps = std::numeric_limits<double>::epsilon();

  ShellSum sum;
  double prev_signed = 0.0;
  double prev_ratio = -1.0;
  bool have_prev = false;
  int run = 0;
  int quiet = 0;
  double width = c;  // distance from the singular endpoint, halved each shell

  auto fold_tail = [&](double last_signed, double ratio, double ratio_err) {
    const double tail = last_signed * ratio / (1.0 - ratio);
    sum.value += tail;
    sum.err += std::fabs(tail) * ratio_err + noise_floor;
  };

  for (int k = 0; k < max_shells; ++k) {
    const double lo_w = 0.5 * width;
    double a, b;
    if (toward < 0) {
      a = lo_w;
      b = width;
    } else {
      a = 1.0 - width;
      b = 1.0 - lo_w;
    }
    if (!(a < b) || (toward > 0 && width < 64.0 * eps)) {
      // Resolution floor: complete with the last geometric model if sane.
      if (have_prev && prev_ratio > 0.0 && prev_ratio < 0.95) {
        fold_tail(prev_signed, prev_ratio, 1.0);
      } else if (std::fabs(prev_signed) > noise_floor) {
        sum.exhausted = true;
      }
      return sum;
    }
    qk::Panel p = qk::adaptive(f, a, b,
                               std::max(shell_tol * std::pow(0.5, k / 8), 1e-280));
    if (!std::isfinite(p.value) || !std::isfinite(p.err)) {
      if (have_prev && prev_ratio > 0.0 && prev_ratio < 0.95) {
        fold_tail(prev_signed, prev_ratio, 1.0);
      } else {
        sum.exhausted = true;
      }
      return sum;
    }
    sum.value += p.value;
    sum.err += p.err;
    const double mag = std::fabs(p.value);
    const double prev_mag = std::fabs(prev_signed);

    if (mag > noise_floor && have_prev && prev_mag > noise_floor &&
        mag >= divergence_ratio * prev_mag) {
      if (++run >= divergence_run) {
        sum.divergent = true;
        return sum;
      }
    } else {
      run = 0;
    }

    if (mag <= noise_floor) {
      if (++quiet >= 2) return sum;
    } else {
      quiet = 0;
      if (have_prev && prev_mag > 0.0 && mag < prev_mag) {
        const double r = mag / prev_mag;
        if (r < divergence_ratio) {
          const double drift =
              prev_ratio > 0.0 ? std::fabs(r - prev_ratio) / (1.0 - r) : 1.0;
          const double tail_mag = mag * r / (1.0 - r);
          // Accept once the geometric model is stable enough or the tail is
          // below this shell chain's budget anyway.
          if (tail_mag * (4.0 * drift + 1e-12) < shell_tol ||
              tail_mag < shell_tol) {
            fold_tail(p.value, r, std::min(1.0, 4.0 * drift + 1e-12));
            return sum;
          }
          prev_ratio = r;
        } else {
          prev_ratio = -1.0;
        }
      }
    }
    prev_signed = p.value;
    have_prev = true;
    width = lo_w;
  }
  sum.exhausted = true;
  return sum;
}

}  // namespace detail

// Adaptive integral of f over (0, 1).  With open_endpoints the integrand may
// blow up at either endpoint; non-integrable singularities set `divergent`.
// `breakpoints` are interior points the panels must not straddle (kinks,
// atoms, discontinuities).  Tolerance is absolute-or-relative, whichever is
// larger.
inline QuadratureResult integrate(const std::function<double(double)>& f,
                                  double tol, bool open_endpoints,
                                  std::vector<double> breakpoints = {}) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be > 0");
  std::vector<double> cuts;
  for (double b : breakpoints) {
    if (b > 0.0 && b < 1.0) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<std::pair<double, double>> panels;
  double lo = 0.0;
  for (double cpt : cuts) {
    panels.emplace_back(lo, cpt);
    lo = cpt;
  }
  panels.emplace_back(lo, 1.0);

  const double panel_tol = tol / (2.0 * static_cast<double>(panels.size()));
  QuadratureResult res;
  bool exhausted = false;
  for (auto [a, b] : panels) {
    const bool at_zero = (a == 0.0);
    const bool at_one = (b == 1.0);
    if (open_endpoints && (at_zero || at_one)) {
      const double mid = at_zero && at_one ? 0.5 : (at_zero ? b : a);
      if (at_zero) {
        auto s = detail::shell_integrate(f, at_one ? mid : b, -1, panel_tol / 2,
                                         1e-4 * panel_tol);
        res.value += s.value;
        res.abs_error_estimate += s.err;
        res.divergent |= s.divergent;
        exhausted |= s.exhausted;
      }
      if (at_one) {
        auto s = detail::shell_integrate(f, 1.0 - (at_zero ? mid : a), +1,
                                         panel_tol / 2, 1e-4 * panel_tol);
        res.value += s.value;
        res.abs_error_estimate += s.err;
        res.divergent |= s.divergent;
        exhausted |= s.exhausted;
      }
    } else {
      qk::Panel p = qk::adaptive(f, a, b, panel_tol);
      if (!std::isfinite(p.value) || !std::isfinite(p.err)) {
        exhausted = true;
        continue;
      }
      res.value += p.value;
      res.abs_error_estimate += p.err;
    }
  }
  if (res.divergent) {
    res.converged = false;
  } else {
    const double target = std::max(tol, tol * std::fabs(res.value));
    res.converged = !exhausted && res.abs_error_estimate <= target;
  }
  return res;
}

// Riemann-Stieltjes integral of g against dF: continuous part integrated by
// quadrature, atoms summed exactly.  A non-finite g at an atom marks the
// result divergent.  F.origin_mass is not consumed here.
inline QuadratureResult stieltjes(const std::function<double(double)>& g,
                                  const MassFunction& F, double tol) {
  QuadratureResult res;
  if (F.density) {
    std::vector<double> cuts = F.breakpoints;
    for (const Atom& a : F.atoms) cuts.push_back(a.t);
    res = integrate([&](double t) { return g(t) * F.density(t); }, tol, true,
                    std::move(cuts));
  } else {
    res.converged = true;
  }
  for (const Atom& a : F.atoms) {
    if (a.jump == 0.0) continue;
    const double gv = g(a.t);
    if (!std::isfinite(gv)) {
      res.divergent = true;
      res.converged = false;
      return res;
    }
    res.value += gv * a.jump;
  }
  return res;
}

}  // namespace pluri
