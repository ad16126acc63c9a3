// pluri: numerical toolkit for pluricomplex Moser-Trudinger and Sobolev
// inequalities on the unit ball.  See README.md for usage examples.

#include <iostream>

#include "CLI11.hpp"
#include "pluri/cli.hpp"

int main(int argc, char** argv) {
  pluri::RunConfig cfg;
  CLI::App app{
      "pluri - pluricomplex Moser-Trudinger / Sobolev verification toolkit"};
  app.fallthrough();
  app.set_config("--config", "", "key=value configuration file");

  app.add_option("--p", cfg.p, "energy exponent p > 0")->capture_default_str();
  app.add_option("--q", cfg.q, "Lebesgue exponent q > 0")->capture_default_str();
  app.add_option("--n", cfg.n, "complex dimension n >= 2")->capture_default_str();
  app.add_option("--eps", cfg.eps, "epsilon in (0,1) for the A/B constants")
      ->capture_default_str();
  app.add_option("--beta-n", cfg.beta_n,
                 "dimensional constant beta(n) (no published value; default 0)")
      ->capture_default_str();
  app.add_option("--diam", cfg.diam, "domain diameter")->capture_default_str();
  app.add_option("--tol", cfg.tol, "quadrature tolerance (or env PLURI_TOL)");
  app.add_option("--family", cfg.families,
                 "profile literal, e.g. truncated-log:c=6,beta=-2 | "
                 "power:alpha=1,k=3 | quadratic | grid:@file.csv");
  app.add_option("--sweep", cfg.sweep, "family sweep: param=lo:hi:count[:log]");
  app.add_option("--chi", cfg.chi, "chi literal: pow:p=<x> | linear | sqrt")
      ->capture_default_str();
  app.add_option("--which", cfg.which, "scan family: ex1 | ex2 | ex3")
      ->capture_default_str();
  app.add_option("--j", cfg.j_spec, "scan range: a:b or a:b:log:count")
      ->capture_default_str();
  app.add_option("--betas", cfg.betas, "comma list of truncation depths")
      ->capture_default_str();
  app.add_option("--t-values", cfg.t_values, "comma list for the comparison bound")
      ->capture_default_str();
  app.add_option("--s-values", cfg.s_values, "comma list of sublevel depths")
      ->capture_default_str();
  app.add_option("--k", cfg.k, "wedge power k for est-check")->capture_default_str();
  app.add_option("--mode", cfg.chi_mode, "chi-check mode: exponential | sobolev")
      ->capture_default_str();
  app.add_option("--n-hi", cfg.n_hi, "upper n for `optimal` sweeps");
  app.add_option("--format", cfg.format, "output format: json | csv")
      ->capture_default_str();
  app.add_option("--output", cfg.output, "output path (default stdout)");

  for (const char* name :
       {"energy", "constants", "mt-check", "sobolev-check", "est-check",
        "holder-check", "chi-check", "scan", "ratio-limit", "solve-ma",
        "optimal"}) {
    app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (cfg.command.empty()) {
    std::cerr << "pluri: error: a subcommand is required (see --help)\n";
    return 2;
  }
  return pluri::run(cfg, std::cout, std::cerr);
}
