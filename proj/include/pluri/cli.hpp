#pragma once

// Command-line core: a RunConfig describes one invocation, build_report
// computes the rows, and the emitters render deterministic JSON or CSV
// (fixed 17-significant-digit formatting, rows in parameter order).
// Sweep rows are evaluated concurrently but always emitted in order.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pluri/constants.hpp"
#include "pluri/functionals.hpp"
#include "pluri/radial.hpp"
#include "pluri/report.hpp"
#include "pluri/verify.hpp"

namespace pluri {

struct RunConfig {
  std::string command;
  double p = 1.0;
  double q = 1.0;
  int n = 2;
  double eps = 0.5;
  double beta_n = 0.0;
  double diam = 2.0;
  double tol = std::numeric_limits<double>::quiet_NaN();  // NaN: env or default
  std::vector<std::string> families;
  std::string sweep;                  // "param=lo:hi:count[:log]"
  std::string chi = "pow:p=1";        // "pow:p=<x>", "linear", "sqrt"
  std::string which = "ex1";          // ex1 | ex2 | ex3
  std::string j_spec = "1:50";        // "a:b" or "a:b:log:count"
  std::string betas = "-10,-100,-1000,-10000";
  std::string t_values = "0.1,1,10";
  std::string s_values = "0.5,1,2,4";
  int k = 1;
  std::string chi_mode = "exponential";  // or "sobolev"
  int n_hi = 0;                          // `optimal` sweeps n..n_hi when > n
  std::string format = "json";
  std::string output;  // empty: stdout
};

struct Cell {
  std::string key;
  std::string text;
  bool quoted = false;
};

inline Cell cell_num(std::string key, double v) {
  if (std::isnan(v)) return {std::move(key), "nan", true};
  if (std::isinf(v)) return {std::move(key), v > 0 ? "inf" : "-inf", true};
  return {std::move(key), fmt17(v), false};
}

inline Cell cell_str(std::string key, std::string v) {
  return {std::move(key), std::move(v), true};
}

using Row = std::vector<Cell>;

struct Report {
  std::string command;
  Row params;
  std::vector<Row> rows;
  Row summary;
  int exit_code = 0;
};

namespace cli_detail {

inline double resolve_tol(const RunConfig& cfg) {
  if (!std::isnan(cfg.tol)) {
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    return cfg.tol;
  }
  if (const char* env = std::getenv("PLURI_TOL")) {
    const double t = std::strtod(env, nullptr);
    if (t > 0.0) return t;
  }
  return 1e-10;
}

inline std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) {
      throw std::invalid_argument(std::string("bad number in ") + what + ": '" +
                                  item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  return out;
}

inline std::vector<double> parse_j_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() == 2) {
    const double lo = std::stod(parts[0]);
    const double hi = std::stod(parts[1]);
    if (!(lo > 0.0) || hi < lo) throw std::invalid_argument("bad j range: " + spec);
    std::vector<double> js;
    for (double j = lo; j <= hi + 1e-9; j += 1.0) js.push_back(j);
    return js;
  }
  if (parts.size() == 4 && parts[2] == "log") {
    const double lo = std::stod(parts[0]);
    const double hi = std::stod(parts[1]);
    const int count = std::stoi(parts[3]);
    if (!(lo > 0.0) || hi <= lo || count < 2) {
      throw std::invalid_argument("bad j range: " + spec);
    }
    std::vector<double> js;
    for (int i = 0; i < count; ++i) {
      js.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    }
    return js;
  }
  throw std::invalid_argument("j spec must be a:b or a:b:log:count, got " + spec);
}

// Expand a family literal over a swept parameter: "param=lo:hi:count[:log]".
inline std::vector<std::string> expand_sweep(const std::string& family,
                                             const std::string& sweep) {
  if (sweep.empty()) return {family};
  const auto eq = sweep.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("sweep must be param=lo:hi:count[:log]");
  }
  const std::string param = sweep.substr(0, eq);
  std::vector<std::string> parts;
  std::stringstream ss(sweep.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3) {
    throw std::invalid_argument("sweep must be param=lo:hi:count[:log]");
  }
  const double lo = std::stod(parts[0]);
  const double hi = std::stod(parts[1]);
  const int count = std::stoi(parts[2]);
  const bool logspace = parts.size() > 3 && parts[3] == "log";
  if (count < 1) throw std::invalid_argument("sweep count must be >= 1");
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) {
    const double x =
        count == 1 ? lo
        : logspace ? lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1))
                   : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    // replace or append the parameter in the literal
    const auto colon = family.find(':');
    std::string head = family.substr(0, colon);
    std::vector<std::pair<std::string, std::string>> kv;
    if (colon != std::string::npos) {
      std::stringstream fs(family.substr(colon + 1));
      std::string f;
      while (std::getline(fs, f, ',')) {
        const auto feq = f.find('=');
        if (feq != std::string::npos) {
          kv.emplace_back(f.substr(0, feq), f.substr(feq + 1));
        }
      }
    }
    bool replaced = false;
    for (auto& [key, val] : kv) {
      if (key == param) {
        val = fmt17(x);
        replaced = true;
      }
    }
    if (!replaced) kv.emplace_back(param, fmt17(x));
    std::string lit = head + ":";
    for (std::size_t j = 0; j < kv.size(); ++j) {
      lit += kv[j].first + "=" + kv[j].second;
      if (j + 1 < kv.size()) lit += ",";
    }
    out.push_back(lit);
  }
  return out;
}

inline std::function<double(double)> make_chi(const std::string& spec) {
  if (spec == "linear") return [](double t) { return t; };
  if (spec == "sqrt") return [](double t) { return -std::sqrt(-t); };
  if (spec.rfind("pow", 0) == 0) {
    double p = 1.0;
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
      const auto eq = spec.find('=', colon);
      p = std::stod(eq == std::string::npos ? spec.substr(colon + 1)
                                            : spec.substr(eq + 1));
    }
    if (!(p > 0.0)) throw std::invalid_argument("chi pow exponent must be > 0");
    return [p](double t) { return -std::pow(-t, p); };
  }
  throw std::invalid_argument("unknown chi spec: '" + spec +
                              "' (use pow:p=<x>, linear, sqrt)");
}

// Deterministic concurrent map: results land in slot order.
template <class Fn>
inline void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, hw), count);
  if (workers <= 1 || count < 4) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

inline void append_inequality(Row& row, const InequalityReport& r) {
  row.push_back(cell_str("name", r.name));
  row.push_back(cell_num("lhs", r.lhs));
  row.push_back(cell_num("rhs", r.rhs));
  row.push_back(cell_num("slack", r.slack));
  row.push_back(cell_str("verdict", to_string(r.verdict)));
  for (const auto& [k, v] : r.params) {
    // run-level parameters already travel in the report header
    if (k == "p" || k == "q" || k == "n" || k == "eps" || k == "beta_n" ||
        k == "diam") {
      continue;
    }
    row.push_back(cell_num(k, v));
  }
}

inline int verdict_exit(const std::vector<Row>& rows) {
  for (const auto& row : rows) {
    for (const auto& c : row) {
      if (c.key == "verdict" && c.text == "fails") return 1;
    }
  }
  return 0;
}

}  // namespace cli_detail

inline Report build_report(const RunConfig& cfg) {
  using namespace cli_detail;
  const double tol = resolve_tol(cfg);
  Report rep;
  rep.command = cfg.command;
  rep.params = {cell_num("p", cfg.p),       cell_num("q", cfg.q),
                cell_num("n", cfg.n),       cell_num("eps", cfg.eps),
                cell_num("beta_n", cfg.beta_n), cell_num("diam", cfg.diam),
                cell_num("tol", tol)};

  std::vector<std::string> families;
  for (const auto& f : cfg.families) {
    for (auto& lit : expand_sweep(f, cfg.sweep)) families.push_back(lit);
  }

  auto need_families = [&](std::size_t at_least) {
    if (families.size() < at_least) {
      throw std::invalid_argument("command '" + cfg.command + "' needs " +
                                  std::to_string(at_least) +
                                  " --family literal(s)");
    }
    for (const auto& f : families) parse_profile(f, cfg.n);  // fail fast
  };

  if (cfg.command == "energy") {
    need_families(1);
    rep.rows.resize(families.size());
    parallel_for(families.size(), [&](std::size_t i) {
      const RadialProfile u = parse_profile(families[i], cfg.n);
      Row row;
      row.push_back(cell_str("family", families[i]));
      const EnergyReport ep = energy_p(u, cfg.p, cfg.n, tol);
      row.push_back(cell_num("energy_p", ep.value));
      row.push_back(cell_num("energy_err", ep.abs_error_estimate));
      if (const auto closed = energy_p_closed(u, cfg.p, cfg.n)) {
        row.push_back(cell_num("energy_closed_form", *closed));
        row.push_back(cell_num("energy_delta", ep.value - *closed));
      }
      const EnergyReport ec = energy_chi(u, make_chi(cfg.chi), cfg.n, tol);
      row.push_back(cell_num("energy_chi", ec.value));
      const EnergyReport nq = lq_norm(u, cfg.q, cfg.n, tol);
      row.push_back(cell_num("lq_norm", nq.value));
      row.push_back(cell_num("sup_norm", sup_norm(u)));
      const EnergyReport ei = exp_integral(u, cfg.n, tol);
      row.push_back(cell_num("exp_integral", ei.value));
      row.push_back(cell_num("log_exp_integral", ei.log_value));
      rep.rows[i] = std::move(row);
    });
  } else if (cfg.command == "constants") {
    const ConstantSet cs =
        constant_set(cfg.p, cfg.q, cfg.n, cfg.eps, cfg.beta_n, cfg.diam);
    Row row = {cell_num("A", cs.A),
               cell_num("B", cs.B),
               cell_num("B_lower", cs.B_lower),
               cell_num("B_upper_ball", cs.B_upper_ball),
               cell_num("C_sobolev", cs.C_sobolev),
               cell_num("D_sobolev", cs.D_sobolev),
               cell_num("d_holder", cs.d_holder),
               cell_num("alpha_exp", cs.alpha_exp)};
    if (cfg.q <= cfg.n + cfg.p) {
      row.push_back(cell_num("ball_upper_C", ball_upper_C(cfg.p, cfg.q, cfg.n)));
    }
    if (cfg.q >= 1.0) {
      row.push_back(cell_num("ball_lower_C", ball_lower_C(cfg.p, cfg.q, cfg.n)));
    }
    rep.rows.push_back(std::move(row));
  } else if (cfg.command == "mt-check") {
    need_families(1);
    rep.rows.resize(families.size());
    parallel_for(families.size(), [&](std::size_t i) {
      const RadialProfile u = parse_profile(families[i], cfg.n);
      Row row = {cell_str("family", families[i])};
      append_inequality(row, check_mt(u, cfg.p, cfg.n, cfg.eps, cfg.beta_n,
                                      cfg.diam, tol));
      rep.rows[i] = std::move(row);
    });
    rep.exit_code = verdict_exit(rep.rows);
  } else if (cfg.command == "sobolev-check") {
    need_families(1);
    rep.rows.resize(families.size());
    parallel_for(families.size(), [&](std::size_t i) {
      const RadialProfile u = parse_profile(families[i], cfg.n);
      Row row = {cell_str("family", families[i])};
      append_inequality(row, check_sobolev(u, cfg.p, cfg.q, cfg.n, cfg.eps,
                                           cfg.beta_n, cfg.diam, tol));
      rep.rows[i] = std::move(row);
    });
    rep.exit_code = verdict_exit(rep.rows);
  } else if (cfg.command == "est-check") {
    need_families(2);
    const RadialProfile u = parse_profile(families[0], cfg.n);
    const RadialProfile v = parse_profile(families[1], cfg.n);
    Row row = {cell_str("family_u", families[0]), cell_str("family_v", families[1])};
    append_inequality(row, check_est(u, v, cfg.p, cfg.k, cfg.n, tol));
    rep.rows.push_back(std::move(row));
    rep.exit_code = verdict_exit(rep.rows);
  } else if (cfg.command == "holder-check") {
    need_families(static_cast<std::size_t>(cfg.n) + 1);
    const RadialProfile u0 = parse_profile(families[0], cfg.n);
    std::vector<RadialProfile> us;
    for (int i = 1; i <= cfg.n; ++i) us.push_back(parse_profile(families[i], cfg.n));
    Row row = {cell_str("family_u0", families[0])};
    append_inequality(row, check_holder(u0, us, cfg.p, cfg.n, tol));
    rep.rows.push_back(std::move(row));
    rep.exit_code = verdict_exit(rep.rows);
  } else if (cfg.command == "chi-check") {
    need_families(1);
    const ChiMode mode = cfg.chi_mode == "sobolev" ? ChiMode::sobolev
                         : cfg.chi_mode == "exponential"
                             ? ChiMode::exponential
                             : throw std::invalid_argument(
                                   "chi mode must be exponential or sobolev");
    rep.rows.resize(families.size());
    parallel_for(families.size(), [&](std::size_t i) {
      const RadialProfile u = parse_profile(families[i], cfg.n);
      Row row = {cell_str("family", families[i]), cell_str("chi", cfg.chi)};
      append_inequality(row,
                        check_chi(u, make_chi(cfg.chi), cfg.n, cfg.eps,
                                  cfg.beta_n, cfg.diam, mode, cfg.q,
                                  std::numeric_limits<double>::quiet_NaN(), tol));
      rep.rows[i] = std::move(row);
    });
    rep.exit_code = verdict_exit(rep.rows);
  } else if (cfg.command == "scan") {
    const ScanFamily which = cfg.which == "ex1"   ? ScanFamily::ex1
                             : cfg.which == "ex2" ? ScanFamily::ex2
                             : cfg.which == "ex3"
                                 ? ScanFamily::ex3
                                 : throw std::invalid_argument(
                                       "scan --which must be ex1, ex2 or ex3");
    const auto js = parse_j_spec(cfg.j_spec);
    const ScanOutput out = scan_counterexamples(which, cfg.p, cfg.q, cfg.n, js, tol);
    for (const auto& r : out.rows) {
      Row row = {cell_str("which", cfg.which)};
      for (const auto& [k, v] : r) row.push_back(cell_num(k, v));
      rep.rows.push_back(std::move(row));
    }
    double max_ratio = 0.0;
    for (double r : out.scan.ratios) max_ratio = std::max(max_ratio, r);
    rep.summary = {cell_str("trend", to_string(out.scan.trend.kind)),
                   cell_num("max_ratio", max_ratio)};
  } else if (cfg.command == "ratio-limit") {
    const auto betas = parse_list(cfg.betas, "betas");
    const ScanOutput out = ratio_limit(cfg.p, cfg.n, betas);
    for (const auto& r : out.rows) {
      Row row;
      for (const auto& [k, v] : r) row.push_back(cell_num(k, v));
      rep.rows.push_back(std::move(row));
    }
    const double limit = b_lower(cfg.p, cfg.n);
    rep.summary = {
        cell_str("trend", to_string(out.scan.trend.kind)),
        cell_num("limit", limit),
        cell_num("final_rel_error",
                 std::fabs(out.scan.ratios.back() - limit) / limit)};
  } else if (cfg.command == "solve-ma") {
    need_families(1);
    const RadialProfile u = parse_profile(families[0], cfg.n);
    const MaDistribution target = weighted_target(u, cfg.p, cfg.n);
    const RadialProfile w = solve_radial_ma(target, cfg.n);
    const auto& g = std::get<GridProfile>(w);
    // homogeneous rows: grid samples leave the inequality columns blank,
    // comparison rows leave the profile value blank
    auto grid_row = [](double t, double w_val) {
      return Row{cell_str("kind", "grid"),       cell_num("t", t),
                 cell_num("w", w_val),           cell_str("lhs", ""),
                 cell_str("rhs", ""),            cell_str("slack", ""),
                 cell_str("verdict", "")};
    };
    const std::size_t stride = std::max<std::size_t>(1, g.knots.size() / 128);
    for (std::size_t i = 0; i < g.knots.size(); i += stride) {
      rep.rows.push_back(grid_row(g.knots[i], g.values[i]));
    }
    if ((g.knots.size() - 1) % stride != 0) {
      rep.rows.push_back(grid_row(g.knots.back(), g.values.back()));
    }
    for (const auto& r :
         comparison_check(u, cfg.p, cfg.n, parse_list(cfg.t_values, "t-values"))) {
      double t_param = 0.0;
      for (const auto& [k, v] : r.params) {
        if (k == "t") t_param = v;
      }
      rep.rows.push_back({cell_str("kind", "comparison"), cell_num("t", t_param),
                          cell_str("w", ""), cell_num("lhs", r.lhs),
                          cell_num("rhs", r.rhs), cell_num("slack", r.slack),
                          cell_str("verdict", to_string(r.verdict))});
    }
    rep.exit_code = verdict_exit(rep.rows);
  } else if (cfg.command == "optimal") {
    const int hi = cfg.n_hi > cfg.n ? cfg.n_hi : cfg.n;
    for (int n = cfg.n; n <= hi; ++n) {
      const double upper = ball_upper_C(1.0, 1.0, n);
      const double lower = ball_lower_C(1.0, 1.0, n);
      const double closed = optimal_C11(n);
      double max_rel = 0.0;
      for (double a : {upper, lower}) {
        for (double b : {lower, closed}) {
          max_rel = std::max(max_rel, std::fabs(a - b) / closed);
        }
      }
      rep.rows.push_back({cell_num("n", n), cell_num("upper", upper),
                          cell_num("lower", lower), cell_num("closed_form", closed),
                          cell_num("max_rel_diff", max_rel),
                          cell_str("verdict", max_rel <= 1e-12 ? "holds" : "fails")});
    }
    rep.exit_code = verdict_exit(rep.rows);
  } else {
    throw std::invalid_argument("unknown command: '" + cfg.command + "'");
  }
  return rep;
}

namespace cli_detail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

inline void emit_object(const Row& row, std::ostream& os) {
  os << "{";
  for (std::size_t i = 0; i < row.size(); ++i) {
    os << "\"" << json_escape(row[i].key) << "\":";
    if (row[i].quoted) {
      os << "\"" << json_escape(row[i].text) << "\"";
    } else {
      os << row[i].text;
    }
    if (i + 1 < row.size()) os << ",";
  }
  os << "}";
}

inline std::string csv_quote(const Cell& c) {
  if (c.text.find_first_of(",\"\n") == std::string::npos) return c.text;
  std::string out = "\"";
  for (char ch : c.text) {
    if (ch == '"') out += "\"\"";
    out += ch;
  }
  out += "\"";
  return out;
}

}  // namespace cli_detail

inline void emit_json(const Report& rep, std::ostream& os) {
  using cli_detail::emit_object;
  os << "{\"command\":\"" << cli_detail::json_escape(rep.command) << "\",";
  os << "\"params\":";
  emit_object(rep.params, os);
  os << ",\"rows\":[";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    emit_object(rep.rows[i], os);
    if (i + 1 < rep.rows.size()) os << ",";
  }
  os << "]";
  if (!rep.summary.empty()) {
    os << ",\"summary\":";
    emit_object(rep.summary, os);
  }
  os << "}\n";
}

inline void emit_csv(const Report& rep, std::ostream& os) {
  if (rep.rows.empty()) return;
  // header from the first row; every command emits homogeneous rows,
  // parameters travel in each row for self-describing output
  const Row& head = rep.rows.front();
  for (std::size_t i = 0; i < rep.params.size(); ++i) {
    os << rep.params[i].key << ",";
  }
  for (std::size_t i = 0; i < head.size(); ++i) {
    os << head[i].key;
    os << (i + 1 < head.size() ? "," : "\n");
  }
  for (const auto& row : rep.rows) {
    for (std::size_t i = 0; i < rep.params.size(); ++i) {
      os << cli_detail::csv_quote(rep.params[i]) << ",";
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << cli_detail::csv_quote(row[i]);
      os << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

// Exit codes: 0 all verdicts hold (or informational), 1 a verdict failed,
// 2 usage or parameter error.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Report rep;
  try {
    rep = build_report(cfg);
  } catch (const std::exception& e) {
    err << "pluri: error: " << e.what() << "\n";
    return 2;
  }
  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.output.empty()) {
    file.open(cfg.output);
    if (!file) {
      err << "pluri: error: cannot open output file " << cfg.output << "\n";
      return 2;
    }
    sink = &file;
  }
  if (cfg.format == "csv") {
    emit_csv(rep, *sink);
  } else if (cfg.format == "json") {
    emit_json(rep, *sink);
  } else {
    err << "pluri: error: unknown format '" << cfg.format << "'\n";
    return 2;
  }
  return rep.exit_code;
}

}  // namespace pluri
