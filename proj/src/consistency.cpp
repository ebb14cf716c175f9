#include "pdegame/consistency.hpp"

#include "pdegame/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

namespace pdegame {

std::string label(UpperCase c) {
  switch (c) {
    case UpperCase::big_bonus: return "big-bonus";
    case UpperCase::far_small_bonus: return "far-small-bonus";
    case UpperCase::close_small: return "close-small";
    case UpperCase::close_big_penalty: return "close-big-penalty";
  }
  return "?";
}

std::string label(LowerCase c) {
  return c == LowerCase::big_bonus ? "lower-big-bonus" : "lower-penalty-small-bonus";
}

UpperCase classify_case(double d, double M, double hess_norm, const GameParams& params) {
  const double s = params.move_radius();
  if (d >= s) return UpperCase::far_small_bonus;
  if (M > (4.0 / 3.0) * hess_norm * s) return UpperCase::big_bonus;
  if (d >= s - std::pow(params.eps, params.rho)) return UpperCase::far_small_bonus;
  if (M <= -std::pow(params.eps, 1.0 - params.alpha - params.kappa)) return UpperCase::close_big_penalty;
  return UpperCase::close_small;
}

LowerCase classify_lower(double d, double m, double hess_norm, const GameParams& params) {
  const double s = params.move_radius();
  if (d >= s || m > 0.5 * (3.0 * s - d) * hess_norm) return LowerCase::big_bonus;
  return LowerCase::penalty_small_bonus;
}

double consistency_slack(double c_slack, double eps) { return c_slack * std::pow(eps, 2.5); }

namespace {

struct Setup {
  LocalJet jet;
  BoundaryFrame frame;
  NeumannBounds bounds;
  double hess_norm = 0.0;
  double lhs = 0.0;
};

Setup setup(const Vec& x, double t, double z, const Field& phi, const ParabolicProblem& pb, const GameParams& params,
            const CandidateOptions& opts) {
  Setup s;
  s.jet = local_jet(phi, x);
  s.frame = boundary_frame(pb.domain, x);
  s.bounds = neumann_bounds(pb.domain, x, s.jet.grad, pb.h, params, opts);
  s.hess_norm = op_norm(s.jet.hess);
  s.lhs = s_eps(x, t, z, phi, pb, params, opts) - s.jet.value;
  return s;
}

// min of f(t, x, z, p, G) over the closed ball of radius r around c, sampled.
double min_f_on_ball(const ParabolicProblem& pb, double t, const Vec& x, double z, const Vec& c, double r,
                     const Mat& G) {
  double best = pb.f(t, x, z, c, G);
  if (r <= 0.0) return best;
  if (pb.domain.dim() == 1) {
    for (int k = -10; k <= 10; ++k) best = std::min(best, pb.f(t, x, z, c + Vec(r * k / 10.0, 0.0), G));
    return best;
  }
  for (double rr : {0.5 * r, r}) {
    for (int k = 0; k < 16; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 16;
      best = std::min(best, pb.f(t, x, z, c + rr * Vec(std::cos(a), std::sin(a)), G));
    }
  }
  return best;
}

ConsistencyRow base_row(const Vec& x, double t, double z, const ParabolicProblem& pb, const GameParams& params,
                        const Setup& s) {
  ConsistencyRow r;
  r.classical = -params.time_step() * pb.f(t, x, z, s.jet.grad, s.jet.hess);
  r.domain = pb.domain.describe();
  r.eps = params.eps;
  r.x = x;
  r.dim = pb.domain.dim();
  r.d = s.frame.d;
  r.lhs = s.lhs;
  return r;
}

}  // namespace

ConsistencyRow audit_upper(const Vec& x, double t, double z, const Field& phi, const ParabolicProblem& pb,
                           const GameParams& params, double c_slack, const CandidateOptions& opts) {
  const Setup s = setup(x, t, z, phi, pb, params, opts);
  ConsistencyRow r = base_row(x, t, z, pb, params, s);
  r.side = "upper";
  const double e2 = params.time_step();
  const double rad = params.move_radius();
  const double d = s.frame.d;
  const double M = s.bounds.crossing_possible ? s.bounds.m_hi : 0.0;
  r.bound = M;
  const UpperCase c = classify_case(d, M, s.hess_norm, params);
  r.kase = label(c);
  switch (c) {
    case UpperCase::big_bonus:
      r.lead = 3.0 * (rad - d) * M -
               e2 * pb.f(t, x, z, p_opt_upper(s.jet, s.bounds, s.frame, params), gamma_opt(s.jet, s.frame, params));
      break;
    case UpperCase::far_small_bonus: r.lead = -e2 * pb.f(t, x, z, s.jet.grad, s.jet.hess); break;
    case UpperCase::close_small: {
      const double c1 = (20.0 / 3.0) * s.hess_norm * (1.0 - d / rad);
      r.lead = -e2 * pb.f(t, x, z, s.jet.grad, s.jet.hess + c1 * Mat::Identity());
      break;
    }
    case UpperCase::close_big_penalty: {
      const double ball = 3.0 * (1.0 - d / rad) * std::abs(M);
      r.lead = 0.25 * (rad - d) * M - e2 * min_f_on_ball(pb, t, x, z, p_opt_upper(s.jet, s.bounds, s.frame, params),
                                                           ball, gamma_opt(s.jet, s.frame, params));
      break;
    }
  }
  r.rhs = r.lead + consistency_slack(c_slack, params.eps);
  r.residual = r.lhs - r.lead;
  r.pass = r.lhs <= r.rhs;
  return r;
}

ConsistencyRow audit_lower(const Vec& x, double t, double z, const Field& phi, const ParabolicProblem& pb,
                           const GameParams& params, double c_slack, const CandidateOptions& opts) {
  const Setup s = setup(x, t, z, phi, pb, params, opts);
  ConsistencyRow r = base_row(x, t, z, pb, params, s);
  r.side = "lower";
  const double e2 = params.time_step();
  const double rad = params.move_radius();
  const double d = s.frame.d;
  const double m = s.bounds.crossing_possible ? s.bounds.m_lo : 0.0;
  r.bound = m;
  const LowerCase c = classify_lower(d, m, s.hess_norm, params);
  r.kase = label(c);
  if (c == LowerCase::big_bonus) {
    r.lead = -e2 * pb.f(t, x, z, s.jet.grad, s.jet.hess);
  } else {
    const double sg = m >= 0.0 ? -1.0 : 3.0;
    r.lead = 0.5 * (rad - d) * (sg * m - 4.0 * s.hess_norm * rad) -
             e2 * pb.f(t, x, z, p_opt_lower(s.jet, s.bounds, s.frame, params), gamma_opt(s.jet, s.frame, params));
  }
  r.rhs = r.lead - consistency_slack(c_slack, params.eps);
  r.residual = r.lhs - r.lead;
  r.pass = r.lhs >= r.rhs;
  return r;
}

namespace {

struct SuiteCase {
  std::string function;
  ParabolicProblem pb;
  ScalarFn phi;
  std::vector<Vec> boundary_points;  // points of the boundary to step inward from
  std::vector<Vec> interior_points;
};

ParabolicProblem audit_problem(const Domain& domain, double h_value) {
  ParabolicProblem pb;
  pb.name = "audit";
  pb.domain = domain;
  pb.f = [](double, const Vec&, double, const Vec&, const Mat& G) { return -G.trace(); };
  pb.g = [](const Vec&) { return 0.0; };
  pb.h = BoundaryData(domain, [h_value](const Vec&) { return h_value; }, std::abs(h_value));
  return pb;
}

std::vector<SuiteCase> suite_cases() {
  std::vector<SuiteCase> out;
  const Domain iv = Domain::interval(0.0, 1.0);
  const std::vector<Vec> iv_b = {Vec(0.0, 0.0), Vec(1.0, 0.0)};
  const std::vector<Vec> iv_in = {Vec(0.5, 0.0), Vec(0.37, 0.0)};
  auto quad1 = [](const Vec& x) { return x(0) * x(0); };
  auto cos1 = [](const Vec& x) { return std::cos(std::numbers::pi * x(0)); };
  out.push_back({"x^2;h=0", audit_problem(iv, 0.0), quad1, iv_b, {}});
  out.push_back({"x^2;h=5", audit_problem(iv, 5.0), quad1, iv_b, {}});
  out.push_back({"x^2;h=-5", audit_problem(iv, -5.0), quad1, iv_b, {}});
  out.push_back({"cos(pi x);h=0", audit_problem(iv, 0.0), cos1, iv_b, iv_in});

  const Domain disk = Domain::ball(Vec::Zero(), 1.0);
  const std::vector<Vec> dk_b = {Vec(std::cos(0.3), std::sin(0.3)), Vec(std::cos(2.0), std::sin(2.0))};
  const std::vector<Vec> dk_in = {Vec(0.1, 0.2), Vec(-0.3, 0.1)};
  auto quad2 = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  auto cos2 = [](const Vec& x) { return std::cos(x(0)) * std::cos(x(1)); };
  out.push_back({"|x|^2/2;h=0", audit_problem(disk, 0.0), quad2, dk_b, {}});
  out.push_back({"|x|^2/2;h=1", audit_problem(disk, 1.0), quad2, dk_b, {}});
  out.push_back({"|x|^2/2;h=3", audit_problem(disk, 3.0), quad2, dk_b, {}});
  out.push_back({"cos x cos y;h=0", audit_problem(disk, 0.0), cos2, {}, dk_in});
  return out;
}

}  // namespace

std::vector<ConsistencyRow> consistency_suite(const std::vector<double>& eps_ladder, double c_slack,
                                              const CandidateOptions& opts, int threads) {
  struct Job {
    const SuiteCase* sc;
    double eps;
    Vec x;
  };
  static const std::vector<SuiteCase> cases = suite_cases();
  const Exponents ex = select_exponents(1.0, 1.0);
  std::vector<Job> jobs;
  for (const SuiteCase& sc : cases) {
    for (double eps : eps_ladder) {
      const GameParams params = GameParams::from(eps, ex);
      const double s = params.move_radius();
      const double er = std::pow(eps, params.rho);
      for (const Vec& b : sc.boundary_points) {
        const Vec inward = -sc.pb.domain.outward_normal(b);
        for (double d : {0.0, 0.5 * (s - er), s - 0.5 * er}) jobs.push_back({&sc, eps, b + d * inward});
      }
      for (const Vec& x : sc.interior_points) jobs.push_back({&sc, eps, x});
    }
  }
  std::vector<ConsistencyRow> rows(2 * jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      const Job& job = jobs[j];
      const GameParams params = GameParams::from(job.eps, ex);
      const AnalyticField phi(job.sc->pb.domain, 1e-4, job.sc->phi);
      rows[2 * j] = audit_upper(job.x, 0.0, 0.0, phi, job.sc->pb, params, c_slack, opts);
      rows[2 * j + 1] = audit_lower(job.x, 0.0, 0.0, phi, job.sc->pb, params, c_slack, opts);
      rows[2 * j].function = rows[2 * j + 1].function = job.sc->function;
    }
  });
  return rows;
}

void write_consistency_csv(std::ostream& os, const std::vector<ConsistencyRow>& rows) {
  os << "domain,function,side,eps,point,case,d,bound,lhs,rhs,residual,pass\n";
  os << std::setprecision(17);
  for (const ConsistencyRow& r : rows) {
    os << '"' << r.domain << "\",\"" << r.function << "\"," << r.side << ',' << r.eps << ",\""
       << format_point(r.x, r.dim) << "\"," << r.kase << ',' << r.d << ',' << r.bound << ',' << r.lhs << ','
       << r.rhs << ',' << r.residual << ',' << (r.pass ? 1 : 0) << '\n';
  }
}

PsiCorollary audit_psi_corollary(const ParabolicProblem& pb, const GameParams& params, int n_points, double z,
                                 std::uint64_t seed, const CandidateOptions& opts) {
  const ScalarFn psi = psi_function(pb.domain, pb.h.sup());
  const AnalyticField plus(pb.domain, 1e-4, psi);
  const AnalyticField minus(pb.domain, 1e-4, [psi](const Vec& x) { return -psi(x); });
  std::mt19937_64 rng(seed);
  PsiCorollary out;
  const double scale = (1.0 + std::abs(z)) * params.time_step();
  for (int k = 0; k < n_points; ++k) {
    const Vec x = random_layer_point(pb.domain, params.move_radius(), rng);
    const double up = s_eps(x, pb.T, z, plus, pb, params, opts) - psi(x);
    const double lo = s_eps(x, pb.T, z, minus, pb, params, opts) + psi(x);
    out.c_upper = std::max(out.c_upper, up / scale);
    out.c_lower = std::max(out.c_lower, -lo / scale);
    ++out.points;
  }
  return out;
}

double audit_psi_elliptic(const EllipticProblem& pb, const GameParams& params, double m, double c_star, double z,
                          int n_points, std::uint64_t seed, const CandidateOptions& opts) {
  const ScalarFn psi = psi_function(pb.domain, pb.h.sup());
  const AnalyticField phi(pb.domain, 1e-4, [psi, m](const Vec& x) { return m + psi(x); });
  std::mt19937_64 rng(seed);
  const double e2 = params.time_step();
  double worst = -1e300;
  for (int k = 0; k < n_points; ++k) {
    const Vec x = k % 2 == 0 ? random_layer_point(pb.domain, params.move_radius(), rng) : random_point(pb.domain, rng);
    const double v = m + psi(x);
    const double lhs = q_eps(x, z, phi, pb, params, opts) - v;
    const double rhs = e2 * (1.0 + (pb.lambda - pb.eta) * std::abs(z) + c_star) - pb.lambda * e2 * v;
    worst = std::max(worst, lhs - rhs);
  }
  return worst;
}

PsiBoundary audit_psi_boundary(const Domain& domain, const BoundaryData& h, const GameParams& params, double h_fd,
                               int n_points, std::uint64_t seed) {
  const AnalyticField psi(domain, h_fd, psi_function(domain, h.sup()));
  std::mt19937_64 rng(seed);
  PsiBoundary out;
  const double s = params.move_radius();
  while (out.points < n_points) {
    const Vec x = random_layer_point(domain, s, rng);
    if (domain.dist_to_boundary(x) >= s) continue;
    const Vec g = psi.fd_gradient(x);
    const NeumannBounds bp = neumann_bounds(domain, x, g, h, params);
    const NeumannBounds bm = neumann_bounds(domain, x, Vec(-g), h, params);
    if (!bp.crossing_possible) continue;
    out.max_M_psi = std::max(out.max_M_psi, bp.m_hi);
    out.min_m_minus_psi = std::min(out.min_m_minus_psi, bm.m_lo);
    ++out.points;
  }
  return out;
}

double psi_normal_derivative_error(const Domain& domain, double h_sup, double h_fd, int n_points, std::uint64_t seed) {
  const AnalyticField psi(domain, h_fd, psi_function(domain, h_sup));
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < n_points; ++k) {
    const Vec x = random_boundary_point(domain, rng);
    const double dn = psi.fd_directional(x, domain.outward_normal(x));
    worst = std::max(worst, std::abs(dn - (h_sup + 1.0)));
  }
  return worst;
}

GeometryAudit audit_geometry(const Domain& domain, const GameParams& params, long n_moves, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double s = params.move_radius();
  const double tol = 1e-12 * (1.0 + domain.diameter());
  GeometryAudit out;
  for (long k = 0; k < n_moves; ++k) {
    const Vec x = random_layer_point(domain, s, rng);
    const double d = domain.dist_to_boundary(x);
    if (d > s) continue;
    Vec dxh;
    if (domain.dim() == 1) {
      dxh = Vec((2.0 * u(rng) - 1.0) * s, 0.0);
    } else {
      const double a = 2.0 * std::numbers::pi * u(rng);
      dxh = s * std::sqrt(u(rng)) * Vec(std::cos(a), std::sin(a));
    }
    const Move m = domain.make_move(x, dxh);
    ++out.moves;
    if (m.penal_weight > s - d + tol || m.delta.norm() > 2.0 * s - d + tol) ++out.eq11_violations;
    const Vec n = domain.normal_at_projection(x);
    const double v = -0.5 * (1.0 - d / s) * dxh.dot(n) + m.penal_weight;
    if (v < -0.5 * (s - d) - tol || v > 1.5 * (s - d) + tol) ++out.key_bound_violations;
  }
  return out;
}

}  // namespace pdegame
