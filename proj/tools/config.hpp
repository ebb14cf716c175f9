#pragma once

#include "pdegame/params.hpp"
#include "pdegame/problems.hpp"
#include "pdegame/strategies.hpp"

#include <optional>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace pdegame::cli {

/// Everything a run needs. Each field is also a key of the configuration
/// file (key = value lines, '#' comments); command-line flags override it.
struct RunConfig {
  std::string command;  // solve | convergence | consistency | audit-elliptic
  std::string mode = "parabolic";  // parabolic | elliptic | mixed | heat1d
  std::string problem = "heat1d_cosine";  // catalog name or "custom"

  // Custom problems.
  std::string domain = "interval:0,1";
  std::string f = "-g11";
  std::string g = "0";
  std::string h = "0";
  double T = 1.0;
  double q = 1.0, r = 1.0;
  double lambda = 1.0, eta = 1.0;

  double eps = 0.1;
  std::string eps_ladder = "0.2,0.1,0.05";
  double horizon = 0.25;  // parabolic solves start at T - horizon
  std::optional<double> alpha, beta, gamma, rho, kappa;

  std::string scheme = "general";  // general | heat1d
  bool levelset = false;
  double z_max = 0.0;    // 0: ||g|| + 2
  double dz = 0.0;       // 0: eps^2
  double spacing = 0.0;  // 0: tied to eps
  int keep_stride = 1;

  double cap_M = 0.0;  // 0: 1 + 2||psi|| + 2
  double tol = 1e-9;
  int anchor_passes = 200;
  long anchor_stride = 0;  // 0: ceil(1 / (lambda eps^2))
  double anchor_tol = 0.0;  // 0: eps^3
  long max_iterations = 0;

  int k_refine = 4;
  int n_dir_2d = 16;
  int n_bounds_dirs = 64;
  double c_slack = 0.0;  // 0: the frozen suite constant
  int samples = 200;
  unsigned long seed = 1;

  int threads = 1;
  std::string out = "out";
  std::string config_path;
};

/// Options shared by every subcommand, bound to `cfg`.
void add_options(CLI::App& app, RunConfig& cfg);

/// Thrown by parse_command_line after CLI11 has printed help (code 0) or a
/// parse error (nonzero code).
struct ParseExit {
  int code = 0;
};

/// Parses argv into a config; throws ParseExit on help or bad input.
/// Threads come from --threads, else PDEGAME_THREADS, else the config file, else 1.
RunConfig parse_command_line(int argc, const char* const* argv);

/// Parses "0.2, 0.1,0.05"; throws ValidationError on empty or non-positive entries.
std::vector<double> parse_ladder(const std::string& text);

/// Exponents after overrides, validated; throws ValidationError naming every
/// violated inequality.
Exponents resolve_exponents(const RunConfig& cfg);
GameParams make_params(const RunConfig& cfg, double eps);
CandidateOptions candidate_options(const RunConfig& cfg);

/// Every key with its effective value, one "key=value" line each, in option order.
std::string dump_config(const RunConfig& cfg);

}  // namespace pdegame::cli
