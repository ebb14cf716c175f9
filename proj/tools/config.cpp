#include "config.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <sstream>

namespace pdegame::cli {

void add_options(CLI::App& app, RunConfig& c) {
  // --h is the Neumann datum, so help has no short form.
  app.set_help_flag("--help", "Print this help message and exit");
  app.option_defaults()->always_capture_default();
  app.add_option("--mode", c.mode, "Solve mode")->check(CLI::IsMember({"parabolic", "elliptic", "mixed", "heat1d"}));
  app.add_option("--problem", c.problem, "Catalog name, or custom");
  app.add_option("--domain", c.domain, "interval:a,c | ball:cx,cy,R | annulus:cx,cy,r_in,R_out (custom problems)");
  app.add_option("--f", c.f, "Nonlinearity over t,x,y,z,p1,p2,g11,g12,g22 (custom problems)");
  app.add_option("--g", c.g, "Final data (custom parabolic problems)");
  app.add_option("--h", c.h, "Neumann data (custom problems)");
  app.add_option("--T", c.T, "Final time (custom problems)");
  app.add_option("--q", c.q, "Growth exponent in p");
  app.add_option("--r", c.r, "Growth exponent in Gamma");
  app.add_option("--lambda", c.lambda, "Discount (custom elliptic problems)");
  app.add_option("--eta", c.eta, "Growth margin (custom elliptic problems)");
  app.add_option("--eps", c.eps, "Step scale for solve and audit-elliptic");
  app.add_option("--eps-ladder,--eps_ladder", c.eps_ladder, "Comma-separated eps values");
  app.add_option("--horizon", c.horizon, "Parabolic solves start at T - horizon");
  // Default capture does not see set optionals or flags; dump_config needs them.
  auto exponent = [&app](const char* name, std::optional<double>& v) {
    auto* opt = app.add_option(name, v);
    opt->default_str(v ? CLI::detail::to_string(*v) : "");
  };
  exponent("--alpha", c.alpha);
  exponent("--beta", c.beta);
  exponent("--gamma", c.gamma);
  exponent("--rho", c.rho);
  exponent("--kappa", c.kappa);
  app.add_option("--scheme", c.scheme, "Parabolic scheme")->check(CLI::IsMember({"general", "heat1d"}));
  app.add_flag("--levelset", c.levelset, "Solve the level-set formulation")->default_str(c.levelset ? "true" : "false");
  app.add_option("--z-max,--z_max", c.z_max, "Level-set debt bound; 0 picks ||g|| + 2");
  app.add_option("--dz", c.dz, "Debt grid spacing; 0 picks eps^2");
  app.add_option("--spacing", c.spacing, "Lattice spacing; 0 ties it to eps");
  app.add_option("--keep-stride,--keep_stride", c.keep_stride, "Keep every k-th level-set time level");
  app.add_option("--cap-M,--cap_M", c.cap_M, "Elliptic score cap; 0 picks 1 + 2||psi|| + 2");
  app.add_option("--tol", c.tol, "Fixed-point tolerance");
  app.add_option("--anchor-passes,--anchor_passes", c.anchor_passes, "Most candidate-set rebuilds");
  app.add_option("--anchor-stride,--anchor_stride", c.anchor_stride, "Sweeps between rebuilds; 0 picks 1/(lambda eps^2)");
  app.add_option("--anchor-tol,--anchor_tol", c.anchor_tol, "Anchor change that ends tracking; 0 picks eps^3");
  app.add_option("--max-iterations,--max_iterations", c.max_iterations, "Sweep cap of the final pass; 0 picks the default");
  app.add_option("--k-refine,--k_refine", c.k_refine);
  app.add_option("--n-dir-2d,--n_dir_2d", c.n_dir_2d);
  app.add_option("--n-bounds-dirs,--n_bounds_dirs", c.n_bounds_dirs);
  app.add_option("--c-slack,--c_slack", c.c_slack, "Consistency slack constant; 0 picks the frozen one");
  app.add_option("--samples", c.samples, "Random points per audit");
  app.add_option("--seed", c.seed);
  app.add_option("--threads", c.threads)->check(CLI::PositiveNumber);
  app.add_option("--out", c.out, "Output directory");
}

RunConfig parse_command_line(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Repeated-game solver for parabolic and elliptic PDEs with Neumann boundary data", "pdegame"};
  add_options(app, cfg);
  app.set_config("--config", "", "Key-value configuration file");
  app.require_subcommand(1);
  for (const char* name : {"solve", "convergence", "consistency", "audit-elliptic"}) {
    app.add_subcommand(name)->fallthrough();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw ParseExit{app.exit(e)};
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (auto* opt = app.get_option("--config"); opt->count() > 0) cfg.config_path = opt->as<std::string>();
  if (app.get_option("--threads")->count() == 0) {
    if (const char* env = std::getenv("PDEGAME_THREADS")) {
      try {
        cfg.threads = std::max(1, std::stoi(env));
      } catch (const std::exception&) {
        throw ValidationError(std::string("PDEGAME_THREADS is not an integer: ") + env);
      }
    }
  }
  return cfg;
}

std::vector<double> parse_ladder(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("eps ladder entry '" + item + "' is not a number");
    }
    if (!(v > 0.0 && v < 1.0)) throw ValidationError("eps ladder entry '" + item + "' must lie in (0, 1)");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("eps ladder is empty");
  return out;
}

Exponents resolve_exponents(const RunConfig& cfg) {
  Exponents e = select_exponents(cfg.q, cfg.r);
  if (cfg.alpha) e.alpha = *cfg.alpha;
  if (cfg.beta) e.beta = *cfg.beta;
  if (cfg.gamma) e.gamma = *cfg.gamma;
  if (cfg.rho) e.rho = *cfg.rho;
  if (cfg.kappa) e.kappa = *cfg.kappa;
  const auto bad = validate_params(e, cfg.q, cfg.r);
  if (!bad.empty()) {
    std::string msg;
    for (const auto& b : bad) msg += (msg.empty() ? "" : "; ") + b;
    throw ValidationError(msg);
  }
  return e;
}

GameParams make_params(const RunConfig& cfg, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
  return GameParams::from(eps, resolve_exponents(cfg));
}

CandidateOptions candidate_options(const RunConfig& cfg) {
  if (cfg.k_refine < 0 || cfg.n_dir_2d < 1 || cfg.n_bounds_dirs < 1) {
    throw ValidationError("candidate-set sizes must be positive");
  }
  CandidateOptions o;
  o.k_refine = cfg.k_refine;
  o.n_dir_2d = cfg.n_dir_2d;
  o.n_bounds_dirs = cfg.n_bounds_dirs;
  return o;
}

std::string dump_config(const RunConfig& cfg) {
  RunConfig copy = cfg;
  CLI::App app;
  add_options(app, copy);
  std::string out = "command=\"" + cfg.command + "\"\n";
  std::istringstream lines(app.config_to_str(true, false));
  std::string line;
  while (std::getline(lines, line)) {
    // Unset exponent overrides are left out so the file reads back as unset.
    if (line.size() >= 3 && line.compare(line.size() - 3, 3, "=\"\"") == 0) continue;
    out += line + "\n";
  }
  return out;
}

}  // namespace pdegame::cli
