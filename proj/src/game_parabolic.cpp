#include "pdegame/game_parabolic.hpp"

#include "pdegame/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

namespace pdegame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_inside(const Domain& domain, const Vec& x, const char* who) {
  if (!domain.contains(x)) {
    throw DomainError(std::string(who) + ": " + format_point(x, domain.dim()) + " is outside " + domain.describe());
  }
}

// phi(landing) + penal * h(landing) for the heat move x + b sqrt(2) eps.
double heat_branch(const Vec& x, const Field& phi, const BoundaryData& h, double eps, int b) {
  const Move m = phi.domain().make_move(x, Vec(b * std::sqrt(2.0) * eps, 0.0));
  double v = phi.eval(m.landing);
  if (m.crossed) v += m.penal_weight * h(m.landing);
  return v;
}

}  // namespace

double heat_L_eps(const Vec& x, const Field& phi, const BoundaryData& h, double eps) {
  if (phi.domain().dim() != 1) throw DomainError("heat_L_eps needs an interval");
  require_inside(phi.domain(), x, "heat_L_eps");
  return 0.5 * (heat_branch(x, phi, h, eps, 1) + heat_branch(x, phi, h, eps, -1));
}

double heat_p_opt(const Vec& x, const Field& phi, const BoundaryData& h, double eps) {
  if (phi.domain().dim() != 1) throw DomainError("heat_p_opt needs an interval");
  require_inside(phi.domain(), x, "heat_p_opt");
  const double a = std::sqrt(2.0) * eps;
  return (heat_branch(x, phi, h, eps, 1) - heat_branch(x, phi, h, eps, -1)) / (2.0 * a);
}

double heat_L_eps_expansion(const Vec& x, const Field& phi, const BoundaryData& h, double eps) {
  const Domain& dom = phi.domain();
  if (dom.dim() != 1) throw DomainError("heat_L_eps_expansion needs an interval");
  const double a = std::sqrt(2.0) * eps;
  const double d = dom.dist_to_boundary(x);
  const double u = phi.eval(x);
  const double uxx = phi.fd_hessian(x)(0, 0);
  if (d > a) return u + eps * eps * uxx;
  const double ux = phi.fd_gradient(x)(0);
  const Vec xbar = dom.boundary_projection(x);
  const double n = dom.normal_at_projection(x)(0);
  return u + (eps / std::sqrt(2.0)) * (1.0 - d / a) * (h(xbar) - n * ux) + 0.5 * eps * eps * uxx * (1.0 + d * d / (a * a));
}

GameChoice s_eps_detail(const Vec& x, double t, double z, const Field& phi, const ParabolicProblem& pb,
                        const GameParams& params, const CandidateOptions& opts, const Field* anchor) {
  require_inside(pb.domain, x, "s_eps");
  const LocalGame g = build_local_game(pb.domain, x, anchor ? *anchor : phi, pb.h, params, opts);
  std::vector<double> landing_value(g.moves.size());
  for (std::size_t m = 0; m < g.moves.size(); ++m) landing_value[m] = phi.eval(g.moves[m].landing);
  const double e2 = params.time_step();
  return max_min(
      g, [&](const Strategy& s) { return e2 * pb.f(t, x, z, s.p, s.Gamma); },
      [&](std::size_t m, double debt) { return landing_value[m] - debt; });
}

double s_eps(const Vec& x, double t, double z, const Field& phi, const ParabolicProblem& pb, const GameParams& params,
             const CandidateOptions& opts, const Field* anchor) {
  return s_eps_detail(x, t, z, phi, pb, params, opts, anchor).value;
}

CandidateOptions solver_candidates(const CandidateOptions& opts, const GameParams& params) {
  CandidateOptions c = opts;
  if (c.jet_step <= 0.0) c.jet_step = params.move_radius();
  return c;
}

long snapped_steps(double T, double t_start, double eps) {
  if (t_start > T) throw ValidationError("t_start must not exceed T");
  return std::lround((T - t_start) / (eps * eps));
}

namespace {

std::shared_ptr<const Lattice> make_lattice(const Domain& domain, const GameParams& params, double spacing) {
  const double h = spacing > 0 ? spacing : Lattice::default_spacing(domain, params.eps, params.alpha);
  return std::make_shared<const Lattice>(domain, h);
}

[[noreturn]] void abort_nonfinite(const char* who, const Lattice& lat, std::size_t i, double t, double v) {
  std::ostringstream os;
  os << who << ": value " << v << " at node " << i << " " << format_point(lat.node(i), lat.domain().dim())
     << " t=" << t;
  throw NumericAbort(os.str());
}

}  // namespace

TimeSeries solve_scalar_dpp(const ParabolicProblem& pb, const GameParams& params, double t_start,
                            const ScalarSolveOptions& opts) {
  if (opts.scheme == Scheme::heat1d && pb.domain.dim() != 1) throw ValidationError("heat1d scheme needs an interval");
  const long K = snapped_steps(pb.T, t_start, params.eps);
  auto lat = make_lattice(pb.domain, params, opts.spacing);
  const CandidateOptions cand = solver_candidates(opts.cand, params);
  TimeSeries out;
  out.times.push_back(pb.T);
  out.slices.push_back(GridField::sample(lat, pb.g));
  for (long j = 1; j <= K; ++j) {
    const double t = pb.T - j * params.time_step();
    const GridField& next = out.slices.back();
    GridField cur(lat);
    parallel_for(lat->size(), opts.threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const Vec& x = lat->node(i);
        const double v = opts.scheme == Scheme::heat1d ? heat_L_eps(x, next, pb.h, params.eps)
                                                       : s_eps(x, t, next[i], next, pb, params, cand);
        if (!std::isfinite(v)) abort_nonfinite("solve_scalar_dpp", *lat, i, t, v);
        cur[i] = v;
      }
    });
    out.times.push_back(t);
    out.slices.push_back(std::move(cur));
  }
  return out;
}

std::vector<double> LevelSetValue::column(std::size_t level, std::size_t node) const {
  std::vector<double> c(nz());
  for (std::size_t k = 0; k < nz(); ++k) c[k] = U(level, node, k);
  return c;
}

double sup_nonneg(const std::vector<double>& z, const std::vector<double>& U) {
  for (std::size_t k = z.size(); k-- > 0;) {
    if (U[k] >= 0.0) {
      if (k + 1 == z.size()) return z[k];
      return z[k] + (z[k + 1] - z[k]) * U[k] / (U[k] - U[k + 1]);
    }
  }
  return -kInf;
}

double inf_nonpos(const std::vector<double>& z, const std::vector<double>& U) {
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (U[k] <= 0.0) {
      if (k == 0) return z[0];
      return z[k - 1] + (z[k] - z[k - 1]) * U[k - 1] / (U[k - 1] - U[k]);
    }
  }
  return kInf;
}

double sup_pos(const std::vector<double>& z, const std::vector<double>& U) {
  for (std::size_t k = z.size(); k-- > 0;) {
    if (U[k] > 0.0) {
      if (k + 1 == z.size()) return z[k];
      return z[k] + (z[k + 1] - z[k]) * U[k] / (U[k] - U[k + 1]);
    }
  }
  return -kInf;
}

double inf_neg(const std::vector<double>& z, const std::vector<double>& U) {
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (U[k] < 0.0) {
      if (k == 0) return z[0];
      return z[k - 1] + (z[k] - z[k - 1]) * U[k - 1] / (U[k - 1] - U[k]);
    }
  }
  return kInf;
}

double extract_u(const LevelSetValue& U, std::size_t node, std::size_t level) {
  return sup_nonneg(U.z_grid, U.column(level, node));
}

double extract_v(const LevelSetValue& U, std::size_t node, std::size_t level) {
  return inf_nonpos(U.z_grid, U.column(level, node));
}

LevelSetValue solve_levelset(const ParabolicProblem& pb, const GameParams& params, double t_start, double Z_max,
                             const LevelSetOptions& opts) {
  if (Z_max < pb.g_sup + 1.0) {
    throw ValidationError("Z_max must be at least ||g|| + 1 = " + std::to_string(pb.g_sup + 1.0));
  }
  const long K = snapped_steps(pb.T, t_start, params.eps);
  LevelSetValue out;
  out.lattice = make_lattice(pb.domain, params, opts.spacing);
  const Lattice& lat = *out.lattice;
  const std::size_t nx = lat.size();
  const double dz_target = opts.dz > 0 ? opts.dz : params.time_step();
  const long kz = std::max(1L, static_cast<long>(std::ceil(Z_max / dz_target - 1e-9)));
  out.Z_max = Z_max;
  out.dz = Z_max / kz;
  for (long k = -kz; k <= kz; ++k) out.z_grid.push_back(k * out.dz);
  const std::size_t nz = out.z_grid.size();
  const double dz = out.dz;

  std::vector<double> cur(nz * nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double g = pb.g(lat.node(i));
    for (std::size_t k = 0; k < nz; ++k) cur[k * nx + i] = g - out.z_grid[k];
  }
  out.times.push_back(pb.T);
  out.levels.push_back(cur);

  const CandidateOptions cand = solver_candidates(opts.cand, params);
  std::atomic<long> overflow{0};
  const int stride = std::max(opts.keep_stride, 1);
  for (long j = 1; j <= K; ++j) {
    const double t = pb.T - j * params.time_step();
    const std::vector<double> next = std::move(cur);
    cur.assign(nz * nx, 0.0);

    // z-independent anchor: the value extracted from the next level.
    GridField anchor(out.lattice);
    for (std::size_t i = 0; i < nx; ++i) {
      std::vector<double> col(nz);
      for (std::size_t k = 0; k < nz; ++k) col[k] = next[k * nx + i];
      anchor[i] = std::clamp(sup_nonneg(out.z_grid, col), -Z_max, Z_max);
    }

    auto interp = [&](const Stencil& st, double zq) {
      auto slice_at = [&](std::size_t k) {
        double v = 0.0;
        for (int q = 0; q < st.n; ++q) v += st.w[q] * next[k * nx + st.idx[q]];
        return v;
      };
      const double pos = (zq + Z_max) / dz;
      if (pos < 0.0 || pos > static_cast<double>(nz - 1)) {
        if (std::abs(zq) > 2.0 * Z_max) {
          std::ostringstream os;
          os << "solve_levelset: debt " << zq << " left [-2Z, 2Z] at t=" << t << "; increase Z_max (now " << Z_max
             << ")";
          throw NumericAbort(os.str());
        }
        overflow.fetch_add(1, std::memory_order_relaxed);
        const std::size_t ke = pos < 0.0 ? 0 : nz - 1;
        return slice_at(ke) - (zq - out.z_grid[ke]);
      }
      const std::size_t k0 = std::min<std::size_t>(static_cast<std::size_t>(pos), nz - 2);
      const double th = pos - static_cast<double>(k0);
      return (1.0 - th) * slice_at(k0) + th * slice_at(k0 + 1);
    };

    parallel_for(nx, opts.threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const Vec& x = lat.node(i);
        const LocalGame g = build_local_game(pb.domain, x, anchor, pb.h, params, cand);
        std::vector<Stencil> st(g.moves.size());
        for (std::size_t m = 0; m < g.moves.size(); ++m) st[m] = lat.stencil(g.moves[m].landing);
        for (std::size_t k = 0; k < nz; ++k) {
          const double z = out.z_grid[k];
          const double v = max_min(
                               g, [&](const Strategy& s) { return params.time_step() * pb.f(t, x, z, s.p, s.Gamma); },
                               [&](std::size_t m, double debt) { return interp(st[m], z + debt); })
                               .value;
          if (!std::isfinite(v)) abort_nonfinite("solve_levelset", lat, i, t, v);
          cur[k * nx + i] = v;
        }
      }
    });
    if (j % stride == 0 || j == K) {
      out.times.push_back(t);
      out.levels.push_back(cur);
    }
  }
  out.overflow_count = overflow.load();
  return out;
}

double envelope_rate(const TimeSeries& u, double T, const std::vector<double>& psi_nodes, double B) {
  double psi_sup = 0.0;
  for (double p : psi_nodes) psi_sup = std::max(psi_sup, std::abs(p));
  double s = 0.0;
  for (std::size_t j = 0; j < u.slices.size(); ++j) {
    const double tau = T - u.times[j];
    if (tau <= 0.0) continue;
    const GridField& f = u.slices[j];
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = (std::abs(f[i]) - psi_nodes[i]) / (B + psi_sup);
      if (r > 0.0) s = std::max(s, std::pow(r, 1.0 / tau));
    }
  }
  return s;
}

}  // namespace pdegame
