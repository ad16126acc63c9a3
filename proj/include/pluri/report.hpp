#pragma once

// Shared report records: inequality check results and sweep/scan summaries.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace pluri {

enum class Verdict { holds, fails, divergent_input };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    default: return "divergent-input";
  }
}

using ParamList = std::vector<std::pair<std::string, double>>;

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  ParamList params;
  Verdict verdict = Verdict::holds;
};

// Quadrature noise must not flip a true inequality: a check "holds" when
// slack >= -1e-9 * max(1, |rhs|).
inline double verdict_tolerance(double rhs) {
  return 1e-9 * std::max(1.0, std::fabs(rhs));
}

inline InequalityReport make_inequality(std::string name, double lhs, double rhs,
                                        ParamList params = {}) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.params = std::move(params);
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
    r.slack = std::numeric_limits<double>::quiet_NaN();
    r.verdict = Verdict::divergent_input;
  } else {
    r.slack = rhs - lhs;
    r.verdict = r.slack >= -verdict_tolerance(rhs) ? Verdict::holds : Verdict::fails;
  }
  return r;
}

struct Trend {
  enum class Kind { diverges, converges_to, bounded } kind = Kind::bounded;
  double limit = 0.0;  // meaningful for converges_to
};

struct ScanResult {
  std::vector<double> parameter_values;
  std::vector<double> ratios;
  Trend trend;
};

// Classification from last-third monotonicity: a run that keeps growing by a
// clear factor diverges; shrinking increments settle on the final value.
inline Trend classify_trend(const std::vector<double>& r) {
  Trend t;
  if (r.size() < 3) return t;
  const std::size_t third = std::max<std::size_t>(3, r.size() / 3);
  const std::size_t start = r.size() - third;
  bool increasing = true, shrinking_steps = true;
  for (std::size_t i = start + 1; i < r.size(); ++i) {
    if (!(std::fabs(r[i]) >= std::fabs(r[i - 1]))) increasing = false;
    if (i > start + 1 &&
        !(std::fabs(r[i] - r[i - 1]) <= std::fabs(r[i - 1] - r[i - 2]) * 1.5)) {
      shrinking_steps = false;
    }
  }
  const double growth = std::fabs(r.back()) / std::max(std::fabs(r.front()), 1e-300);
  const double last_step = std::fabs(r.back() - r[r.size() - 2]);
  if (shrinking_steps && last_step <= 1e-3 * std::max(1.0, std::fabs(r.back()))) {
    t.kind = Trend::Kind::converges_to;
    t.limit = r.back();
  } else if (increasing && growth > 2.0) {
    t.kind = Trend::Kind::diverges;
  }
  return t;
}

inline const char* to_string(Trend::Kind k) {
  switch (k) {
    case Trend::Kind::diverges: return "diverges";
    case Trend::Kind::converges_to: return "converges_to";
    default: return "bounded";
  }
}

// Fixed 17-significant-digit formatting so identical runs emit identical bytes.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace pluri
