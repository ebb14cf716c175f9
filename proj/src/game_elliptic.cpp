#include "pdegame/game_elliptic.hpp"

#include "pdegame/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace pdegame {

namespace {
// fd step for the jets of the smooth function psi.
constexpr double kPsiStep = 1e-4;

// c * inner. The landing payoff is e^(-lambda eps^2) phi(x') - debt, so
// Helen's candidates come from the jet of the discounted anchor; with the
// undiscounted slope Mark gains eps^2 s |D phi| every step.
class ScaledField : public Field {
 public:
  ScaledField(const Field& inner, double c) : Field(inner.domain(), inner.fd_step()), inner_(inner), c_(c) {}
  double eval(const Vec& x) const override { return c_ * inner_.eval(x); }

 private:
  const Field& inner_;
  double c_;
};
}  // namespace

double psi1(double d, double r) {
  const double half = 0.5 * r;
  if (d >= half) return 0.0;
  return std::exp(-d / (1.0 - d / half));
}

ScalarFn psi_function(const Domain& domain, double h_sup) {
  const double r = domain.r_int();
  return [domain, h_sup, r](const Vec& x) { return (h_sup + 1.0) * psi1(domain.dist_to_boundary(x), r); };
}

GridField build_psi(std::shared_ptr<const Lattice> lattice, double h_sup) {
  const ScalarFn fn = psi_function(lattice->domain(), h_sup);
  return GridField::sample(std::move(lattice), fn);
}

PsiNorms psi_norms(const Domain& domain, double h_sup, double h_fd, int samples, std::uint64_t seed) {
  const AnalyticField psi(domain, h_fd, psi_function(domain, h_sup));
  std::mt19937_64 rng(seed);
  PsiNorms n;
  n.sup = h_sup + 1.0;
  for (int s = 0; s < samples; ++s) {
    // Half the samples in the support of psi, where the derivatives live.
    const Vec x = s % 2 == 0 ? random_layer_point(domain, 0.5 * domain.r_int(), rng) : random_point(domain, rng);
    n.grad_sup = std::max(n.grad_sup, psi.fd_gradient(x).norm());
    n.hess_sup = std::max(n.hess_sup, op_norm(psi.fd_hessian(x)));
  }
  return n;
}

double eps0(const PsiNorms& n, double alpha) { return std::pow(4.0 * n.hess_sup + 2.0, -1.0 / (1.0 - alpha)); }

CapSpec make_caps(std::shared_ptr<const Lattice> lattice, double h_sup, double cap_M) {
  const double psi_sup = h_sup + 1.0;
  const double m = cap_M - 1.0 - 2.0 * psi_sup;
  if (!(m > 0.0)) {
    std::ostringstream os;
    os << "cap M = " << cap_M << " must exceed 1 + 2||psi|| = " << 1.0 + 2.0 * psi_sup;
    throw ValidationError(os.str());
  }
  CapSpec c{cap_M, m, psi_sup, build_psi(lattice, h_sup), GridField(lattice)};
  for (std::size_t i = 0; i < c.chi.size(); ++i) c.chi[i] = c.cap_m + c.psi_sup + c.psi[i];
  return c;
}

GameChoice q_eps_detail(const Vec& x, double z, const Field& phi, const EllipticProblem& pb, const GameParams& params,
                        const CandidateOptions& opts, const Field* anchor) {
  if (!pb.domain.contains(x)) throw DomainError("q_eps: " + format_point(x, pb.domain.dim()) + " is outside the domain");
  const double disc = std::exp(-pb.lambda * params.time_step());
  const LocalGame g = build_local_game(pb.domain, x, ScaledField(anchor ? *anchor : phi, disc), pb.h, params, opts);
  std::vector<double> landing_value(g.moves.size());
  for (std::size_t m = 0; m < g.moves.size(); ++m) landing_value[m] = disc * phi.eval(g.moves[m].landing);
  const double e2 = params.time_step();
  return max_min(
      g, [&](const Strategy& s) { return e2 * pb.f(x, z, s.p, s.Gamma); },
      [&](std::size_t m, double debt) { return landing_value[m] - debt; });
}

double q_eps(const Vec& x, double z, const Field& phi, const EllipticProblem& pb, const GameParams& params,
             const CandidateOptions& opts, const Field* anchor) {
  return q_eps_detail(x, z, phi, pb, params, opts, anchor).value;
}

std::vector<double> FixedPointValue::column_U(std::size_t node) const {
  std::vector<double> c(nz());
  for (std::size_t k = 0; k < nz(); ++k) c[k] = at(node, k) - z_grid[k];
  return c;
}

FixedPointValue make_fixed_point_value(std::shared_ptr<const Lattice> lattice, double M, double dz_target,
                                       double init) {
  if (!(M > 0.0) || !(dz_target > 0.0)) throw ValidationError("z-grid needs M > 0 and dz > 0");
  FixedPointValue v;
  v.lattice = std::move(lattice);
  v.M = M;
  const long K = std::max(2L, static_cast<long>(std::ceil(M / dz_target - 1e-9)));
  v.dz = M / K;
  for (long k = -K + 1; k <= K - 1; ++k) v.z_grid.push_back(k * v.dz);
  v.V.assign(v.nz() * v.nx(), init);
  return v;
}

EllipticOperator::EllipticOperator(const EllipticProblem& pb, const CapSpec& caps, const GameParams& params,
                                   const FixedPointValue& layout, const Field& anchor, bool mixed,
                                   const EllipticOptions& opts)
    : layout_(&layout),
      discount_(std::exp(-pb.lambda * params.time_step())),
      growth_(std::exp(pb.lambda * params.time_step())),
      M_(layout.M),
      threads_(opts.threads) {
  if (mixed && !pb.dirichlet_patch) throw ValidationError("mixed operator needs a Dirichlet patch");
  const Lattice& lat = *layout.lattice;
  const std::size_t nx = lat.size(), nz = layout.nz();
  chi_.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) chi_[i] = caps.chi[i];
  games_.resize(nx);
  const double e2 = params.time_step();
  const CandidateOptions cand = solver_candidates(opts.cand, params);
  // Helen also gets the strategies of the games on chi and -chi, which are the
  // ones that keep the iterates inside |V| <= chi.
  CandidateOptions cap_cand = opts.cand;
  cap_cand.jet_step = 0.0;
  const ScalarFn psi = psi_function(pb.domain, pb.h.sup());
  const AnalyticField psi_up(pb.domain, kPsiStep, psi);
  const AnalyticField psi_dn(pb.domain, kPsiStep, [psi](const Vec& y) { return -psi(y); });
  const ScaledField jet_src(anchor, discount_);
  parallel_for(nx, threads_, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Vec& x = lat.node(i);
      LocalGame g = build_local_game(pb.domain, x, jet_src, pb.h, params, cand);
      std::vector<Strategy> extra = build_local_game(pb.domain, x, psi_up, pb.h, params, cap_cand).strategies;
      const auto dn = build_local_game(pb.domain, x, psi_dn, pb.h, params, cap_cand).strategies;
      extra.insert(extra.end(), dn.begin(), dn.end());
      add_strategies(g, pb.domain, x, extra, pb.h, params, cand);
      NodeGame& ng = games_[i];
      ng.ns = g.strategies.size();
      ng.nm = g.moves.size();
      ng.stencil.resize(ng.nm);
      ng.dirichlet.assign(ng.nm, 0);
      ng.exit_value.assign(ng.nm, 0.0);
      for (std::size_t m = 0; m < ng.nm; ++m) {
        const Vec& y = g.moves[m].landing;
        ng.stencil[m] = lat.stencil(y);
        if (mixed && pb.domain.on_boundary(y) && pb.dirichlet_patch(y)) {
          ng.dirichlet[m] = 1;
          ng.exit_value[m] = discount_ * pb.g_exit(y);
        }
      }
      ng.base.resize(ng.ns * ng.nm);
      for (std::size_t s = 0; s < ng.ns; ++s) {
        for (std::size_t m = 0; m < ng.nm; ++m) {
          ng.base[s * ng.nm + m] = quadratic_cost(g.strategies[s], g.moves[m].delta_hat) - g.coupon[m];
        }
      }
      ng.eps2_f.resize(nz * ng.ns);
      for (std::size_t k = 0; k < nz; ++k) {
        for (std::size_t s = 0; s < ng.ns; ++s) {
          ng.eps2_f[k * ng.ns + s] = e2 * pb.f(x, layout.z_grid[k], g.strategies[s].p, g.strategies[s].Gamma);
        }
      }
    }
  });
}

double EllipticOperator::interp(const std::vector<double>& V, const Stencil& st, double zq) const {
  const std::size_t nx = layout_->nx(), nz = layout_->nz();
  auto slice_at = [&](std::size_t k) {
    double v = 0.0;
    for (int q = 0; q < st.n; ++q) v += st.w[q] * V[k * nx + st.idx[q]];
    return v;
  };
  const double pos = (zq + M_) / layout_->dz - 1.0;
  if (pos <= 0.0) return slice_at(0);
  if (pos >= static_cast<double>(nz - 1)) return slice_at(nz - 1);
  const std::size_t k0 = static_cast<std::size_t>(pos);
  const double th = pos - static_cast<double>(k0);
  return (1.0 - th) * slice_at(k0) + th * slice_at(k0 + 1);
}

std::vector<double> EllipticOperator::apply(const std::vector<double>& V, long* dirichlet_hits) const {
  const std::size_t nx = layout_->nx(), nz = layout_->nz();
  std::vector<double> out(nx * nz);
  std::vector<long> hits(nx, 0);
  parallel_for(nx, threads_, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const NodeGame& ng = games_[i];
      for (std::size_t k = 0; k < nz; ++k) {
        const double z = layout_->z_grid[k];
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < ng.ns; ++s) {
          const double fs = ng.eps2_f[k * ng.ns + s];
          double worst = std::numeric_limits<double>::infinity();
          for (std::size_t m = 0; m < ng.nm; ++m) {
            const double delta = ng.base[s * ng.nm + m] + fs;
            const double zn = growth_ * (z + delta);
            double v;
            if (ng.dirichlet[m] && std::abs(zn) < M_) {
              v = ng.exit_value[m] - delta;
              ++hits[i];
            } else if (zn >= M_) {
              v = -chi_[i];
            } else if (zn <= -M_) {
              v = chi_[i];
            } else {
              v = discount_ * interp(V, ng.stencil[m], zn) - delta;
            }
            worst = std::min(worst, v);
          }
          best = std::max(best, worst);
        }
        out[k * nx + i] = best;
      }
    }
  });
  if (dirichlet_hits) {
    long total = 0;
    for (long h : hits) total += h;
    *dirichlet_hits = total;
  }
  return out;
}

GridField extracted_anchor(const FixedPointValue& V) {
  GridField a(V.lattice);
  for (std::size_t i = 0; i < V.nx(); ++i) a[i] = std::clamp(sup_nonneg(V.z_grid, V.column_U(i)), -V.M, V.M);
  return a;
}

namespace {

FixedPointValue apply_once(const FixedPointValue& V, const EllipticProblem& pb, const CapSpec& caps,
                           const GameParams& params, const Field* anchor, bool mixed, const EllipticOptions& opts) {
  const GridField fallback = extracted_anchor(V);
  const EllipticOperator op(pb, caps, params, V, anchor ? *anchor : fallback, mixed, opts);
  FixedPointValue out = V;
  out.V = op.apply(V.V, &out.dirichlet_hits);
  double res = 0.0;
  for (std::size_t q = 0; q < out.V.size(); ++q) res = std::max(res, std::abs(out.V[q] - V.V[q]));
  out.residual = res;
  out.iterations = V.iterations + 1;
  return out;
}

}  // namespace

FixedPointValue r_eps_apply(const FixedPointValue& V, const EllipticProblem& pb, const CapSpec& caps,
                            const GameParams& params, const Field* anchor, const EllipticOptions& opts) {
  return apply_once(V, pb, caps, params, anchor, false, opts);
}

FixedPointValue r_eps_mixed(const FixedPointValue& V, const EllipticProblem& pb, const CapSpec& caps,
                            const GameParams& params, const std::function<bool(const Vec&)>& dirichlet_patch,
                            const ScalarFn& g_exit, const Field* anchor, const EllipticOptions& opts) {
  EllipticProblem mixed = pb;
  mixed.dirichlet_patch = dirichlet_patch;
  mixed.g_exit = g_exit;
  return apply_once(V, mixed, caps, params, anchor, true, opts);
}

double m0_estimate(const EllipticProblem& pb, const CapSpec& caps, const PsiNorms& norms, int samples,
                   std::uint64_t seed) {
  const double Kp = norms.grad_sup + pb.h.sup() + 1.0;
  const double Kg = norms.hess_sup + 1.0;
  const double c_star = sample_f_bound(pb, Kp, Kg, samples, seed);
  return (1.0 + pb.lambda * (1.0 + 2.0 * caps.psi_sup) + c_star) / pb.eta;
}

FixedPointValue solve_fixed_point(const EllipticProblem& pb, const CapSpec& caps, const GameParams& params, double tol,
                                  const EllipticOptions& opts) {
  if (!(pb.lambda > 0.0)) throw ValidationError("elliptic solve needs lambda > 0");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const bool mixed = static_cast<bool>(pb.dirichlet_patch);
  const double dz = opts.dz > 0 ? opts.dz : params.time_step();
  FixedPointValue V = make_fixed_point_value(caps.chi.lattice_ptr(), caps.cap_M, dz);

  const PsiNorms norms = psi_norms(pb.domain, pb.h.sup(), 1e-4, 400, 7);
  const double m0 = m0_estimate(pb, caps, norms, 2000, 11);
  if (caps.cap_M <= m0) {
    std::ostringstream os;
    os << "cap M = " << caps.cap_M << " is not above the estimated M0 = " << m0;
    V.warnings.push_back(os.str());
  }

  const double e2l = pb.lambda * params.time_step();
  const long stride = opts.anchor_stride > 0 ? opts.anchor_stride : static_cast<long>(std::ceil(1.0 / e2l));
  const int passes = std::max(opts.anchor_passes, 1);
  const double anchor_tol = opts.anchor_tol > 0.0 ? opts.anchor_tol : std::pow(params.eps, 3);
  const long cap = opts.max_iterations > 0 ? opts.max_iterations
                                           : 10L * static_cast<long>(std::ceil(std::log(1.0 / tol) / e2l));
  // Sweeps with a frozen operator; returns whether the sup-change fell below
  // tol. Only the final pass aborts at the cap.
  auto sweep = [&](const EllipticOperator& op, long max_sweeps, int pass, bool final) {
    long it = 0;
    bool converged = false;
    while (it < max_sweeps && !converged) {
      std::vector<double> next = op.apply(V.V, &V.dirichlet_hits);
      double res = 0.0;
      for (std::size_t q = 0; q < next.size(); ++q) {
        if (!std::isfinite(next[q])) throw NumericAbort("solve_fixed_point: non-finite value at entry " + std::to_string(q));
        res = std::max(res, std::abs(next[q] - V.V[q]));
      }
      V.V = std::move(next);
      V.residual = res;
      V.residual_history.push_back(res);
      ++it;
      ++V.iterations;
      converged = res < tol;
      if (final && !converged && it >= cap) {
        std::ostringstream os;
        os << "solve_fixed_point: no convergence after " << it << " iterations in pass " << pass
           << "; last residuals:";
        const std::size_t n = V.residual_history.size();
        for (std::size_t q = n > 5 ? n - 5 : 0; q < n; ++q) os << ' ' << V.residual_history[q];
        throw NumericAbort(os.str());
      }
    }
    V.pass_iterations.push_back(it);
    return converged;
  };

  // Tracking passes move the candidate sets with the iterate; the last pass
  // freezes them and converges, so V is a fixed point of one operator.
  GridField anchor = extracted_anchor(V);
  bool settled = false;
  int pass = 0;
  for (; pass < passes && !settled; ++pass) {
    const bool converged = sweep(EllipticOperator(pb, caps, params, V, anchor, mixed, opts), stride, pass, false);
    GridField next_anchor = extracted_anchor(V);
    double change = 0.0;
    for (std::size_t i = 0; i < anchor.size(); ++i) change = std::max(change, std::abs(next_anchor[i] - anchor[i]));
    V.anchor_changes.push_back(change);
    anchor = std::move(next_anchor);
    settled = change < anchor_tol;
    if (settled && converged) return V;
  }
  if (!settled) {
    std::ostringstream os;
    os << "anchor still moving after " << passes << " passes: last change " << V.anchor_changes.back();
    V.warnings.push_back(os.str());
  }
  sweep(EllipticOperator(pb, caps, params, V, anchor, mixed, opts), cap, pass, true);
  return V;
}

double residual_ratio(const FixedPointValue& V, int burn_in, double floor) {
  double worst = 0.0;
  std::size_t start = 0;
  for (const long n : V.pass_iterations) {
    for (std::size_t j = start + burn_in + 1; j < start + static_cast<std::size_t>(n); ++j) {
      if (V.residual_history[j - 1] > floor && V.residual_history[j] > floor) {
        worst = std::max(worst, V.residual_history[j] / V.residual_history[j - 1]);
      }
    }
    start += n;
  }
  return worst;
}

double cap_excess(const FixedPointValue& V, const CapSpec& caps) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < V.nz(); ++k) {
    for (std::size_t i = 0; i < V.nx(); ++i) worst = std::max(worst, std::abs(V.at(i, k)) - caps.chi[i]);
  }
  return worst;
}

FixedPointValue random_in_ball(const FixedPointValue& layout, const CapSpec& caps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FixedPointValue out = layout;
  for (std::size_t k = 0; k < out.nz(); ++k) {
    for (std::size_t i = 0; i < out.nx(); ++i) out.V[k * out.nx() + i] = u(rng) * caps.chi[i];
  }
  return out;
}

double extract_u_elliptic(const FixedPointValue& V, std::size_t node) { return sup_pos(V.z_grid, V.column_U(node)); }

double extract_v_elliptic(const FixedPointValue& V, std::size_t node) { return inf_neg(V.z_grid, V.column_U(node)); }

}  // namespace pdegame
