#pragma once

#include "pdegame/fields.hpp"
#include "pdegame/params.hpp"
#include "pdegame/problems.hpp"
#include "pdegame/strategies.hpp"

#include <limits>
#include <memory>
#include <vector>

namespace pdegame {

/// Outcome of one max-min: the value and the indices of Helen's maximizing
/// strategy and Mark's reply to it. Ties keep the first candidate.
struct GameChoice {
  double value = -std::numeric_limits<double>::infinity();
  int strategy = -1;
  int move = -1;
};

/// max over strategies, min over moves of payoff(m, debt), where
/// debt = p.dx + 1/2 <Gamma dx, dx> + eps2_f(strategy) - coupon(m).
template <class Eps2F, class Payoff>
GameChoice max_min(const LocalGame& g, Eps2F&& eps2_f, Payoff&& payoff) {
  GameChoice best;
  for (std::size_t s = 0; s < g.strategies.size(); ++s) {
    const Strategy& st = g.strategies[s];
    const double fs = eps2_f(st);
    double worst = std::numeric_limits<double>::infinity();
    int wm = -1;
    for (std::size_t m = 0; m < g.moves.size(); ++m) {
      const double debt = quadratic_cost(st, g.moves[m].delta_hat) + fs - g.coupon[m];
      const double v = payoff(m, debt);
      if (v < worst) {
        worst = v;
        wm = static_cast<int>(m);
      }
    }
    if (worst > best.value) best = {worst, static_cast<int>(s), wm};
  }
  return best;
}

/// 1D heat-game operator with step sqrt(2) eps, solved in closed form: the
/// two affine branches in p cross at p_opt and the value is their mean there.
double heat_L_eps(const Vec& x, const Field& phi, const BoundaryData& h, double eps);
/// Helen's optimal p for heat_L_eps.
double heat_p_opt(const Vec& x, const Field& phi, const BoundaryData& h, double eps);
/// Two-branch Taylor expansion of heat_L_eps (layer branch for d <= sqrt(2) eps).
double heat_L_eps_expansion(const Vec& x, const Field& phi, const BoundaryData& h, double eps);

/// General parabolic operator over the finite candidate sets. The candidate
/// strategies are built from the derivatives of `anchor` (phi itself when null).
GameChoice s_eps_detail(const Vec& x, double t, double z, const Field& phi, const ParabolicProblem& pb,
                        const GameParams& params, const CandidateOptions& opts = {}, const Field* anchor = nullptr);
double s_eps(const Vec& x, double t, double z, const Field& phi, const ParabolicProblem& pb, const GameParams& params,
             const CandidateOptions& opts = {}, const Field* anchor = nullptr);

/// Candidate options used by the solvers: a zero jet_step becomes the move
/// radius, so Helen's Gamma is a second difference at the scale of Mark's
/// moves. A lattice-scale Hessian makes the sweep an explicit scheme with
/// ratio eps^2/h^2, and one-sided stencils with negative weights near the
/// boundary amplify errors; both blow up.
CandidateOptions solver_candidates(const CandidateOptions& opts, const GameParams& params);

enum class Scheme { general, heat1d };

struct ScalarSolveOptions {
  Scheme scheme = Scheme::general;
  CandidateOptions cand;
  int threads = 1;
  double spacing = 0.0;  // lattice spacing; 0 picks Lattice::default_spacing
};

/// Slices indexed by j, with times[j] = T - j eps^2, so slices[0] is the final data.
struct TimeSeries {
  std::vector<double> times;
  std::vector<GridField> slices;
  const GridField& at_start() const { return slices.back(); }
};

/// Number of eps^2 steps from t_start to T, rounded to the nearest integer.
long snapped_steps(double T, double t_start, double eps);

/// Backward sweep u(t_j) = S_eps[u(t_{j+1})] at every node. A z-dependent f
/// is evaluated at the value u(x, t_{j+1}).
TimeSeries solve_scalar_dpp(const ParabolicProblem& pb, const GameParams& params, double t_start,
                            const ScalarSolveOptions& opts = {});

struct LevelSetOptions {
  CandidateOptions cand;
  int threads = 1;
  double spacing = 0.0;  // lattice spacing; 0 picks Lattice::default_spacing
  double dz = 0.0;       // z spacing; 0 picks eps^2
  int keep_stride = 1;   // keep every k-th time level (the first and last are always kept)
};

/// U(x, z, t) on lattice x z-grid. levels[l] holds nz * nx values laid out as
/// k * nx + i, at time times[l].
struct LevelSetValue {
  std::shared_ptr<const Lattice> lattice;
  std::vector<double> z_grid;
  double dz = 0.0;
  double Z_max = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> levels;
  long overflow_count = 0;  // evaluations beyond the z-grid, filled by unit-slope extension

  std::size_t nx() const { return lattice->size(); }
  std::size_t nz() const { return z_grid.size(); }
  double U(std::size_t level, std::size_t node, std::size_t k) const { return levels[level][k * nx() + node]; }
  std::vector<double> column(std::size_t level, std::size_t node) const;
};

/// Backward level-set DPP from U(x, z, T) = g(x) - z. Candidate strategies at x
/// are anchored on the extracted u of the next time level, so they do not
/// depend on z. Throws NumericAbort if a debt update leaves [-2 Z_max, 2 Z_max].
LevelSetValue solve_levelset(const ParabolicProblem& pb, const GameParams& params, double t_start, double Z_max,
                             const LevelSetOptions& opts = {});

/// sup{z : U >= 0} and inf{z : U <= 0} over an ascending z column, with linear
/// interpolation at the crossing; -inf / +inf when the set is empty.
double sup_nonneg(const std::vector<double>& z, const std::vector<double>& U);
double inf_nonpos(const std::vector<double>& z, const std::vector<double>& U);
/// Strict versions: sup{z : U > 0} and inf{z : U < 0}.
double sup_pos(const std::vector<double>& z, const std::vector<double>& U);
double inf_neg(const std::vector<double>& z, const std::vector<double>& U);

double extract_u(const LevelSetValue& U, std::size_t node, std::size_t level);
double extract_v(const LevelSetValue& U, std::size_t node, std::size_t level);

/// Smallest s with |u(x,t)| <= (B + ||psi||) s^(T-t) + psi(x) at every node
/// and every slice with t < T. psi_nodes holds psi at the lattice nodes.
double envelope_rate(const TimeSeries& u, double T, const std::vector<double>& psi_nodes, double B);

}  // namespace pdegame
