#include <iostream>
#include <limits>

#include "CLI11.hpp"
#include "commands.hpp"

namespace gf = ghostfringe::cli;

int main(int argc, char** argv) {
  CLI::App app{"Coincidence double-slit interference: thermal, entangled and down-converted light"};
  app.set_config("--config", "", "flat key=value config file; flags override it");
  app.require_subcommand(1);

  gf::RunConfig c;
  std::string gain_sigma = "0";
  app.add_option("--source", c.source, "thermal | entangled | spdc-type1 | spdc-type2 | spdc-single");
  app.add_option("--b", c.b, "slit width (length unit)");
  app.add_option("--d-over-b", c.d_over_b, "slit separation over slit width");
  app.add_option("--W", c.W, "normalized bandwidth w b / 2pi (repeat for fig1; 0 = plane-wave limit)");
  app.add_option("--w-physical", c.w_physical, "physical spectral width w, overrides --W");
  app.add_option("--gain-r", c.gain_r, "down-conversion gain r");
  app.add_option("--gain-sigma", gain_sigma, "gain bandwidth sigma (physical; 0 = 4pi/b, inf = flat)");
  app.add_option("--scan", c.scan, "symmetric | diagonal | grid");
  app.add_option("--xmax", c.xmax, "scan half-range in normalized X");
  app.add_option("--points", c.points, "scan points");
  app.add_option("--grid-n", c.grid_n, "quadrature grid points (odd; 0 = default)");
  app.add_option("--grid-qmax", c.grid_qmax, "quadrature grid half-range (0 = default)");
  app.add_option("--seed", c.seed, "Monte Carlo seed");
  app.add_option("--realizations", c.realizations, "Monte Carlo realizations (0 = command default)");
  app.add_option("--out", c.out, "output CSV path");
  app.add_option("--k0", c.k0, "carrier wavenumber");
  app.add_option("--focal", c.focal, "lens focal length");
  app.add_option("--window", c.window, "visibility half-window in X (0 = command default)");
  app.add_option("--threads", c.threads, "worker threads (0 = hardware concurrency)");

  auto* fringe = app.add_subcommand("fringe", "joint-intensity fringe for one source")->fallthrough();
  auto* fig1 = app.add_subcommand("fig1", "thermal bandwidth sweep, one curve per W")->fallthrough();
  auto* mc = app.add_subcommand("mc-validate", "quadrature vs Monte Carlo comparison")->fallthrough();
  auto* moments = app.add_subcommand("moments", "Gaussian moment factorization check")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "config error: " << e.what() << '\n';
    return gf::kConfigError;
  }

  if (gain_sigma == "inf" || gain_sigma == "infinity") {
    c.gain_sigma = std::numeric_limits<double>::infinity();
  } else {
    try {
      c.gain_sigma = std::stod(gain_sigma);
    } catch (const std::exception&) {
      std::cerr << "config error: invalid --gain-sigma '" << gain_sigma << "'\n";
      return gf::kConfigError;
    }
  }

  if (fringe->parsed()) return gf::run_guarded(gf::cmd_fringe, c, std::cout, std::cerr);
  if (fig1->parsed()) return gf::run_guarded(gf::cmd_fig1, c, std::cout, std::cerr);
  if (mc->parsed()) return gf::run_guarded(gf::cmd_mc_validate, c, std::cout, std::cerr);
  if (moments->parsed()) return gf::run_guarded(gf::cmd_moments, c, std::cout, std::cerr);
  return gf::kConfigError;
}
