#pragma once

#include "pdegame/fields.hpp"
#include "pdegame/geometry.hpp"
#include "pdegame/params.hpp"
#include "pdegame/problems.hpp"

#include <vector>

namespace pdegame {

/// Inf and sup over boundary-crossing moves of h(landing) - <Dphi(x), n(landing)>.
struct NeumannBounds {
  double m_lo = 0.0;
  double m_hi = 0.0;
  int sample_count = 0;
  bool crossing_possible = false;
};

/// Helen's choice of gradient and Hessian.
struct Strategy {
  Vec p = Vec::Zero();
  Mat Gamma = Mat::Zero();
};

/// Orthonormal frame at the nearest boundary point; e1 is the outward normal.
struct BoundaryFrame {
  Vec xbar = Vec::Zero();
  Vec e1 = Vec::UnitX();
  Vec e2 = Vec::UnitY();
  int dim = 1;
  double d = 0.0;  // distance from x to the boundary
  Mat E11() const { return e1 * e1.transpose(); }
};

/// Value, gradient and Hessian of a field at one point.
struct LocalJet {
  double value = 0.0;
  Vec grad = Vec::Zero();
  Mat hess = Mat::Zero();
  double hess_nn(const BoundaryFrame& f) const { return f.e1.dot(hess * f.e1); }
};

/// Candidate-set sizes.
struct CandidateOptions {
  int k_refine = 4;       // 2k+1 refinement points between the two p_opt
  int n_dir_2d = 16;      // sampled move directions in 2D
  int n_bounds_dirs = 64; // crossing directions sampled for the Neumann bounds
  /// When positive, the anchor jet is landing_jet with this step; 0 uses the
  /// field's own one-sided stencils.
  double jet_step = 0.0;
};

BoundaryFrame boundary_frame(const Domain& domain, const Vec& x);
LocalJet local_jet(const Field& phi, const Vec& x);
/// Central differences with step h of the move payoff: phi at the landing
/// point plus penal * h there, so outside stencil points land on the boundary
/// and collect the coupon. Exact for affine phi with a matching Neumann datum.
LocalJet landing_jet(const Field& phi, const BoundaryData& bc, const Vec& x, double h);

NeumannBounds neumann_bounds(const Domain& domain, const Vec& x, const Vec& grad, const BoundaryData& h,
                             const GameParams& params, const CandidateOptions& opts = {});
NeumannBounds neumann_bounds(const Domain& domain, const Vec& x, const Field& phi, const BoundaryData& h,
                             const GameParams& params, const CandidateOptions& opts = {});

Vec p_opt_lower(const LocalJet& jet, const NeumannBounds& b, const BoundaryFrame& frame, const GameParams& params);
Vec p_opt_upper(const LocalJet& jet, const NeumannBounds& b, const BoundaryFrame& frame, const GameParams& params);
Mat gamma_opt(const LocalJet& jet, const BoundaryFrame& frame, const GameParams& params);

/// Rescales p and Gamma onto the norm caps eps^-beta and eps^-gamma.
Strategy clip_strategy(Strategy s, const GameParams& params);

std::vector<Strategy> candidate_strategies(const LocalJet& jet, const NeumannBounds& b, const BoundaryFrame& frame,
                                           const GameParams& params, const CandidateOptions& opts = {});

std::vector<Move> candidate_moves(const Domain& domain, const Vec& x, const GameParams& params,
                                  const BoundaryFrame& frame, const std::vector<Strategy>& strategies,
                                  const Mat& hess, const CandidateOptions& opts = {});

/// Everything the inner max-min needs at one point.
struct LocalGame {
  BoundaryFrame frame;
  LocalJet jet;
  NeumannBounds bounds;
  std::vector<Strategy> strategies;
  std::vector<Move> moves;
  std::vector<double> coupon;  // penal_weight * h(landing), zero when not crossed
};

/// Candidate sets at x, anchored on the derivatives of `anchor`.
LocalGame build_local_game(const Domain& domain, const Vec& x, const Field& anchor, const BoundaryData& h,
                           const GameParams& params, const CandidateOptions& opts = {});

/// Appends strategies and rebuilds Mark's moves and coupons so the eigenvector
/// replies cover the new strategies too.
void add_strategies(LocalGame& g, const Domain& domain, const Vec& x, const std::vector<Strategy>& extra,
                    const BoundaryData& h, const GameParams& params, const CandidateOptions& opts = {});

/// p . dx + 1/2 <Gamma dx, dx>.
inline double quadratic_cost(const Strategy& s, const Vec& dx) { return s.p.dot(dx) + 0.5 * dx.dot(s.Gamma * dx); }

}  // namespace pdegame
