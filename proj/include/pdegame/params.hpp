#pragma once

#include <string>
#include <vector>

namespace pdegame {

struct Exponents {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  double kappa = 0.0;
};

/// Step sizes and caps of one game instance.
struct GameParams {
  double eps = 0.1;
  double alpha = 0.25;
  double beta = 0.5;
  double gamma = 0.5;
  double rho = 0.875;
  double kappa = 0.6875;
  double lambda_rate = 0.0;  // discount, elliptic only
  double cap_M = 0.0;        // score cap, elliptic only
  double cap_m = 0.0;        // set from cap_M and the boundary function
  /// When positive, replaces eps^(1-alpha) as the move radius. Used to line
  /// the general game up with the sqrt(2)*eps heat game.
  double move_radius_override = 0.0;

  static GameParams from(double eps, const Exponents& e);
  Exponents exponents() const { return {alpha, beta, gamma, rho, kappa}; }

  double time_step() const { return eps * eps; }
  double move_radius() const;
  double p_cap() const;
  double gamma_cap() const;
  double discount() const;  // exp(-lambda eps^2)
};

/// Midpoint-of-feasible-interval choice, in the order alpha, gamma, beta, rho, kappa.
Exponents select_exponents(double q, double r);

/// Names every violated inequality; empty when all hold strictly.
std::vector<std::string> validate_params(const Exponents& e, double q, double r);

std::vector<double> default_eps_ladder();

}  // namespace pdegame
