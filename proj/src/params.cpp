#include "pdegame/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdegame {

namespace {

double mid(double lo, double hi) { return 0.5 * (lo + hi); }
}  // namespace

GameParams GameParams::from(double eps, const Exponents& e) {
  GameParams p;
  p.eps = eps;
  p.alpha = e.alpha;
  p.beta = e.beta;
  p.gamma = e.gamma;
  p.rho = e.rho;
  p.kappa = e.kappa;
  return p;
}

double GameParams::move_radius() const {
  return move_radius_override > 0.0 ? move_radius_override : std::pow(eps, 1.0 - alpha);
}
double GameParams::p_cap() const { return std::pow(eps, -beta); }
double GameParams::gamma_cap() const { return std::pow(eps, -gamma); }
double GameParams::discount() const { return std::exp(-lambda_rate * eps * eps); }

Exponents select_exponents(double q, double r) {
  if (q < 1.0 || r < 1.0) throw std::invalid_argument("growth exponents must be >= 1");
  Exponents e;
  // alpha < 1/3 is the only constraint on alpha alone. The lower end 1/6
  // keeps the layer width eps^(1-alpha) well separated from eps.
  e.alpha = mid(1.0 / 6.0, 1.0 / 3.0);
  const double a = e.alpha;

  // gamma: gamma < 1-alpha, 2alpha+gamma < 2, gamma r < 1+alpha,
  // gamma (r-1) < 2 alpha; the rho window is then nonempty as well.
  double g_hi = std::min({1.0 - a, 2.0 - 2.0 * a, (1.0 + a) / r});
  if (r > 1.0) g_hi = std::min(g_hi, 2.0 * a / (r - 1.0));
  e.gamma = mid(std::min(a, 0.5 * g_hi), g_hi);

  // beta: alpha+beta < 1, beta q < 2, beta r < 2, beta (q-1) < alpha+1.
  double b_hi = std::min({1.0 - a, 2.0 / q, 2.0 / r});
  if (q > 1.0) b_hi = std::min(b_hi, (a + 1.0) / (q - 1.0));
  e.beta = mid(std::min(a, 0.5 * b_hi), b_hi);

  const double rho_hi = std::min({1.0, 1.0 - e.gamma * (r - 1.0) / 2.0, 2.0 - 2.0 * a - e.gamma});
  e.rho = mid(1.0 - a, rho_hi);
  e.kappa = mid(e.gamma + e.rho - (1.0 - a), 1.0 - a);
  return e;
}

std::vector<std::string> validate_params(const Exponents& e, double q, double r) {
  std::vector<std::string> out;
  const double a = e.alpha, b = e.beta, g = e.gamma;
  auto need = [&out](bool ok, const std::string& name) {
    if (!ok) out.push_back(name + " violated");
  };
  need(a > 0 && b > 0 && g > 0, "positivity alpha, beta, gamma > 0");
  need(a < 1.0 / 3.0, "condition_pas");
  need(a + b < 1.0, "alpha+beta < 1");
  need(2 * a + g < 2.0, "2alpha+gamma < 2");
  need(std::max(b * q, b * r) < 2.0, "max(beta q, beta r) < 2");
  need(g < 1.0 - a, "gamma < 1−alpha");
  need(b * (q - 1.0) < a + 1.0, "beta(q-1) < alpha+1");
  need(g * (r - 1.0) < 2.0 * a, "gamma(r-1) < 2alpha");
  need(g * r < 1.0 + a, "gamma r < 1+alpha");
  need(1.0 - a < e.rho, "1-alpha < rho");
  need(e.rho < std::min(1.0 - g * (r - 1.0) / 2.0, 2.0 - 2.0 * a - g), "rho < min(1-gamma(r-1)/2, 2-2alpha-gamma)");
  need(g + e.rho - (1.0 - a) < e.kappa, "gamma+rho-(1-alpha) < kappa");
  need(e.kappa < 1.0 - a, "kappa < 1-alpha");
  return out;
}

std::vector<double> default_eps_ladder() { return {0.2, 0.1, 0.05, 0.025}; }

}  // namespace pdegame
