#include "pdegame/strategies.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pdegame {

BoundaryFrame boundary_frame(const Domain& domain, const Vec& x) {
  BoundaryFrame f;
  f.dim = domain.dim();
  f.xbar = domain.boundary_projection(x);
  f.e1 = domain.normal_at_projection(x);
  f.e2 = f.dim == 2 ? Vec(-f.e1(1), f.e1(0)) : Vec::Zero();
  f.d = domain.dist_to_boundary(x);
  return f;
}

LocalJet local_jet(const Field& phi, const Vec& x) {
  LocalJet j;
  j.value = phi.eval(x);
  j.grad = phi.fd_gradient(x);
  j.hess = phi.fd_hessian(x);
  return j;
}

LocalJet landing_jet(const Field& phi, const BoundaryData& bc, const Vec& x, double h) {
  const Domain& dom = phi.domain();
  // Payoff of a move to y before the debt: phi at the landing plus the boundary coupon.
  auto at = [&](const Vec& y) {
    if (dom.contains(y)) return phi.eval(y);
    const Vec yb = dom.project_to_closure(y);
    return phi.eval(yb) + (y - yb).norm() * bc(yb);
  };
  LocalJet j;
  j.value = phi.eval(x);
  for (int i = 0; i < dom.dim(); ++i) {
    const Vec e = h * Vec::Unit(i);
    const double fp = at(x + e), fm = at(x - e);
    j.grad(i) = (fp - fm) / (2.0 * h);
    j.hess(i, i) = (fp - 2.0 * j.value + fm) / (h * h);
  }
  if (dom.dim() == 2) {
    const Vec a = h * Vec::UnitX(), b = h * Vec::UnitY();
    j.hess(0, 1) = j.hess(1, 0) = (at(x + a + b) - at(x + a - b) - at(x - a + b) + at(x - a - b)) / (4.0 * h * h);
  }
  return j;
}

namespace {

// Largest angle a in [0, pi] such that every direction rotated from e1 by up
// to a (towards `sign`) still crosses the boundary at radius s.
double crossing_half_angle(const Domain& domain, const Vec& x, const Vec& e1, double s, int sign) {
  auto crosses = [&](double a) {
    const double c = std::cos(a), sn = sign * std::sin(a);
    const Vec u(c * e1(0) - sn * e1(1), sn * e1(0) + c * e1(1));
    return domain.signed_distance(x + s * u) < -domain.tolerance();
  };
  double lo = 0.0, hi = std::numbers::pi;
  if (crosses(hi)) return hi;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (crosses(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

NeumannBounds neumann_bounds(const Domain& domain, const Vec& x, const Vec& grad, const BoundaryData& h,
                             const GameParams& params, const CandidateOptions& opts) {
  NeumannBounds b;
  const double s = params.move_radius();
  const double d = domain.dist_to_boundary(x);
  if (d >= s) return b;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto take = [&](const Vec& dir) {
    const Move m = domain.make_move(x, s * dir);
    if (!m.crossed) return;
    const double v = h(m.landing) - grad.dot(domain.outward_normal(m.landing));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++b.sample_count;
  };

  if (domain.dim() == 1) {
    take(Vec(1.0, 0.0));
    take(Vec(-1.0, 0.0));
  } else {
    const Vec e1 = domain.normal_at_projection(x);
    const double a_plus = crossing_half_angle(domain, x, e1, s, 1);
    const double a_minus = crossing_half_angle(domain, x, e1, s, -1);
    const int n = std::max(opts.n_bounds_dirs, 2);
    for (int k = 0; k < n; ++k) {
      const double a = -a_minus + (a_plus + a_minus) * k / (n - 1);
      const Vec u(std::cos(a) * e1(0) - std::sin(a) * e1(1), std::sin(a) * e1(0) + std::cos(a) * e1(1));
      take(u);
    }
  }
  if (b.sample_count == 0) return b;
  b.crossing_possible = true;
  b.m_lo = lo;
  b.m_hi = hi;
  return b;
}

NeumannBounds neumann_bounds(const Domain& domain, const Vec& x, const Field& phi, const BoundaryData& h,
                             const GameParams& params, const CandidateOptions& opts) {
  return neumann_bounds(domain, x, phi.fd_gradient(x), h, params, opts);
}

namespace {

Vec p_opt(const LocalJet& jet, double bound, const BoundaryFrame& frame, const GameParams& params) {
  const double s = params.move_radius();
  if (frame.d >= s) return jet.grad;
  const double r = frame.d / s;
  const double coef = 0.5 * (1.0 - r) * bound - 0.25 * s * (1.0 - r * r) * jet.hess_nn(frame);
  return jet.grad + coef * frame.e1;
}

}  // namespace

Vec p_opt_lower(const LocalJet& jet, const NeumannBounds& b, const BoundaryFrame& frame, const GameParams& params) {
  return p_opt(jet, b.m_lo, frame, params);
}

Vec p_opt_upper(const LocalJet& jet, const NeumannBounds& b, const BoundaryFrame& frame, const GameParams& params) {
  return p_opt(jet, b.m_hi, frame, params);
}

Mat gamma_opt(const LocalJet& jet, const BoundaryFrame& frame, const GameParams& params) {
  const double s = params.move_radius();
  if (frame.d >= s) return jet.hess;
  const double r = frame.d / s;
  return jet.hess + 0.5 * (-1.0 + r * r) * jet.hess_nn(frame) * frame.E11();
}

Strategy clip_strategy(Strategy s, const GameParams& params) {
  const double pc = params.p_cap(), gc = params.gamma_cap();
  const double pn = s.p.norm();
  if (pn > pc) s.p *= pc / pn;
  const double gn = op_norm(s.Gamma);
  if (gn > gc) s.Gamma *= gc / gn;
  return s;
}

std::vector<Strategy> candidate_strategies(const LocalJet& jet, const NeumannBounds& b, const BoundaryFrame& frame,
                                           const GameParams& params, const CandidateOptions& opts) {
  std::vector<Strategy> out;
  out.push_back(clip_strategy({jet.grad, jet.hess}, params));
  if (!b.crossing_possible) return out;
  const Vec lo = p_opt_lower(jet, b, frame, params);
  const Vec hi = p_opt_upper(jet, b, frame, params);
  const Mat G = gamma_opt(jet, frame, params);
  out.push_back(clip_strategy({lo, G}, params));
  out.push_back(clip_strategy({hi, G}, params));
  const int n = 2 * std::max(opts.k_refine, 0);
  for (int j = 0; j <= n; ++j) {
    const double t = n == 0 ? 0.5 : static_cast<double>(j) / n;
    out.push_back(clip_strategy({lo + t * (hi - lo), G}, params));
  }
  return out;
}

std::vector<Move> candidate_moves(const Domain& domain, const Vec& x, const GameParams& params,
                                  const BoundaryFrame& frame, const std::vector<Strategy>& strategies,
                                  const Mat& hess, const CandidateOptions& opts) {
  const double s = params.move_radius();
  const double d = frame.d;
  std::vector<Vec> dx;
  dx.push_back(Vec::Zero());
  dx.push_back(s * frame.e1);
  dx.push_back(-s * frame.e1);
  if (d < s) dx.push_back(d * frame.e1);

  if (domain.dim() == 2) {
    dx.push_back(s * frame.e2);
    dx.push_back(-s * frame.e2);
    auto add_unique = [&](const Vec& v) {
      for (const Vec& w : dx) {
        if ((w - v).norm() <= 1e-12 * s) return;
      }
      dx.push_back(v);
    };
    for (const Strategy& st : strategies) {
      const Mat A = st.Gamma - hess;
      if (op_norm(A) <= 1e-12) continue;
      Eigen::SelfAdjointEigenSolver<Mat> es;
      es.computeDirect(A);
      for (int k = 0; k < 2; ++k) {
        const Vec w = es.eigenvectors().col(k).normalized();
        add_unique(s * w);
        add_unique(-s * w);
      }
    }
    // Grazing moves: full length, ending on the boundary.
    if (d < s) {
      for (int sign : {1, -1}) {
        const double a = crossing_half_angle(domain, x, frame.e1, s, sign);
        if (a >= std::numbers::pi) continue;
        const double c = std::cos(a), sn = sign * std::sin(a);
        add_unique(s * Vec(c * frame.e1(0) - sn * frame.e1(1), sn * frame.e1(0) + c * frame.e1(1)));
      }
    }
    std::vector<double> radii = {s, 0.5 * s};
    if (d > 0.0 && d < s) radii.push_back(d);
    const int n = std::max(opts.n_dir_2d, 1);
    for (int k = 0; k < n; ++k) {
      const double a = 2.0 * std::numbers::pi * (k + 0.5) / n;
      const Vec u(std::cos(a), std::sin(a));
      for (double r : radii) dx.push_back(r * u);
    }
  }

  std::vector<Move> moves;
  moves.reserve(dx.size());
  for (const Vec& v : dx) moves.push_back(domain.make_move(x, v));
  return moves;
}

LocalGame build_local_game(const Domain& domain, const Vec& x, const Field& anchor, const BoundaryData& h,
                           const GameParams& params, const CandidateOptions& opts) {
  LocalGame g;
  g.frame = boundary_frame(domain, x);
  g.jet = opts.jet_step > 0.0 ? landing_jet(anchor, h, x, opts.jet_step) : local_jet(anchor, x);
  g.bounds = neumann_bounds(domain, x, g.jet.grad, h, params, opts);
  g.strategies = candidate_strategies(g.jet, g.bounds, g.frame, params, opts);
  g.moves = candidate_moves(domain, x, params, g.frame, g.strategies, g.jet.hess, opts);
  g.coupon.resize(g.moves.size());
  for (std::size_t m = 0; m < g.moves.size(); ++m) {
    g.coupon[m] = g.moves[m].crossed ? g.moves[m].penal_weight * h(g.moves[m].landing) : 0.0;
  }
  return g;
}

void add_strategies(LocalGame& g, const Domain& domain, const Vec& x, const std::vector<Strategy>& extra,
                    const BoundaryData& h, const GameParams& params, const CandidateOptions& opts) {
  g.strategies.insert(g.strategies.end(), extra.begin(), extra.end());
  g.moves = candidate_moves(domain, x, params, g.frame, g.strategies, g.jet.hess, opts);
  g.coupon.resize(g.moves.size());
  for (std::size_t m = 0; m < g.moves.size(); ++m) {
    g.coupon[m] = g.moves[m].crossed ? g.moves[m].penal_weight * h(g.moves[m].landing) : 0.0;
  }
}

}  // namespace pdegame
