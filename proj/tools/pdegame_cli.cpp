#include "config.hpp"

#include "pdegame/consistency.hpp"
#include "pdegame/game_elliptic.hpp"
#include "pdegame/game_parabolic.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>

namespace fs = std::filesystem;
using namespace pdegame;
using pdegame::cli::RunConfig;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  std::ofstream os(fs::path(cfg.out) / name);
  if (!os) throw std::runtime_error("cannot write " + (fs::path(cfg.out) / name).string());
  os << std::setprecision(17);
  return os;
}

CatalogProblem load_problem(const RunConfig& cfg, bool elliptic) {
  if (cfg.problem != "custom") {
    CatalogProblem cp = catalog_lookup(cfg.problem);
    if (elliptic && !cp.elliptic) throw ValidationError("problem " + cfg.problem + " is parabolic");
    if (!elliptic && !cp.parabolic) throw ValidationError("problem " + cfg.problem + " is elliptic");
    return cp;
  }
  CatalogProblem cp;
  cp.name = "custom";
  const Domain dom = Domain::parse(cfg.domain);
  if (elliptic) {
    cp.elliptic = custom_elliptic(dom, cfg.f, cfg.h, cfg.lambda, cfg.eta, cfg.q, cfg.r);
  } else {
    cp.parabolic = custom_parabolic(dom, cfg.f, cfg.g, cfg.h, cfg.T, cfg.q, cfg.r);
  }
  return cp;
}

bool is_elliptic(const RunConfig& cfg) { return cfg.mode == "elliptic" || cfg.mode == "mixed"; }

/// Checks shared by every path before any solve.
void validate(const RunConfig& cfg) {
  cli::resolve_exponents(cfg);
  cli::parse_ladder(cfg.eps_ladder);
  cli::candidate_options(cfg);
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
  if (!(cfg.horizon > 0.0)) throw ValidationError("horizon must be positive");
  if (!(cfg.tol > 0.0)) throw ValidationError("tol must be positive");
  if (cfg.spacing < 0.0 || cfg.dz < 0.0 || cfg.z_max < 0.0 || cfg.cap_M < 0.0 || cfg.anchor_stride < 0 ||
      cfg.anchor_tol < 0.0 || cfg.max_iterations < 0) {
    throw ValidationError("spacing, dz, z_max, cap_M, anchor_stride, anchor_tol and max_iterations must be nonnegative");
  }
  if (cfg.keep_stride < 1 || cfg.anchor_passes < 1 || cfg.samples < 1) {
    throw ValidationError("keep_stride, anchor_passes and samples must be positive");
  }
}

// ---------------------------------------------------------------------------
// Parabolic

struct ParabolicRun {
  std::shared_ptr<const Lattice> lattice;
  std::vector<double> u, v;  // at the start time; v equals u outside level-set solves
  double t_start = 0.0;
  long steps = 0;
  long overflow = 0;
};

ParabolicRun run_parabolic(const RunConfig& cfg, const ParabolicProblem& pb, double eps) {
  const GameParams params = cli::make_params(cfg, eps);
  ParabolicRun run;
  run.t_start = pb.T - cfg.horizon;
  run.steps = snapped_steps(pb.T, run.t_start, eps);
  if (cfg.levelset) {
    LevelSetOptions o;
    o.cand = cli::candidate_options(cfg);
    o.threads = cfg.threads;
    o.spacing = cfg.spacing;
    o.dz = cfg.dz;
    o.keep_stride = cfg.keep_stride;
    const double zmax = cfg.z_max > 0.0 ? cfg.z_max : pb.g_sup + 2.0;
    const LevelSetValue U = solve_levelset(pb, params, run.t_start, zmax, o);
    const std::size_t last = U.levels.size() - 1;
    run.lattice = U.lattice;
    for (std::size_t i = 0; i < U.nx(); ++i) {
      run.u.push_back(extract_u(U, i, last));
      run.v.push_back(extract_v(U, i, last));
    }
    run.overflow = U.overflow_count;
    return run;
  }
  ScalarSolveOptions o;
  o.scheme = (cfg.mode == "heat1d" || cfg.scheme == "heat1d") ? Scheme::heat1d : Scheme::general;
  o.cand = cli::candidate_options(cfg);
  o.threads = cfg.threads;
  o.spacing = cfg.spacing;
  const TimeSeries ts = solve_scalar_dpp(pb, params, run.t_start, o);
  run.lattice = ts.at_start().lattice_ptr();
  run.u = ts.at_start().values();
  run.v = run.u;
  return run;
}

// ---------------------------------------------------------------------------
// Elliptic

struct EllipticRun {
  CapSpec caps;
  FixedPointValue V;
  std::vector<double> u, v;
};

double default_cap(const EllipticProblem& pb) { return 1.0 + 2.0 * (pb.h.sup() + 1.0) + 2.0; }

EllipticRun run_elliptic(const RunConfig& cfg, const EllipticProblem& pb, double eps) {
  GameParams params = cli::make_params(cfg, eps);
  params.lambda_rate = pb.lambda;
  const double h = cfg.spacing > 0.0 ? cfg.spacing : Lattice::default_spacing(pb.domain, eps, params.alpha);
  auto lattice = std::make_shared<const Lattice>(pb.domain, h);
  const double M = cfg.cap_M > 0.0 ? cfg.cap_M : default_cap(pb);
  EllipticRun run{make_caps(lattice, pb.h.sup(), M), FixedPointValue{}, {}, {}};
  EllipticOptions o;
  o.cand = cli::candidate_options(cfg);
  o.threads = cfg.threads;
  o.dz = cfg.dz;
  o.anchor_passes = cfg.anchor_passes;
  o.anchor_stride = cfg.anchor_stride;
  o.anchor_tol = cfg.anchor_tol;
  o.max_iterations = cfg.max_iterations;
  run.V = solve_fixed_point(pb, run.caps, params, cfg.tol, o);
  for (const auto& w : run.V.warnings) std::cerr << "warning: " << w << "\n";
  for (std::size_t i = 0; i < run.V.nx(); ++i) {
    run.u.push_back(extract_u_elliptic(run.V, i));
    run.v.push_back(extract_v_elliptic(run.V, i));
  }
  return run;
}

void write_field(const RunConfig& cfg, const std::string& file, const std::string& name,
                 const std::shared_ptr<const Lattice>& lattice, const std::vector<double>& values, long time_index) {
  auto os = open_out(cfg, file);
  GridField(lattice, values).write_csv(os, name, time_index);
}

double sup_error(const Lattice& lat, const std::vector<double>& u, const CatalogProblem& cp, double t) {
  double err = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) err = std::max(err, std::abs(u[i] - cp.exact(lat.node(i), t)));
  return err;
}

void write_summary_header(std::ostream& os, const RunConfig& cfg, double eps) {
  const GameParams p = cli::make_params(cfg, eps);
  os << std::setprecision(17) << "eps=" << eps << "\nalpha=" << p.alpha << "\nbeta=" << p.beta
     << "\ngamma=" << p.gamma << "\nrho=" << p.rho << "\nkappa=" << p.kappa << "\n";
}

int cmd_solve(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const bool ell = is_elliptic(cfg);
  const CatalogProblem cp = load_problem(cfg, ell);
  auto summary = open_out(cfg, "summary.txt");
  write_summary_header(summary, cfg, cfg.eps);
  if (ell) {
    if (cfg.mode == "mixed" && !cp.elliptic->dirichlet_patch) {
      throw ValidationError("mode mixed needs a problem with a Dirichlet patch");
    }
    if (cfg.mode == "elliptic" && cp.elliptic->dirichlet_patch) {
      throw ValidationError("problem " + cp.name + " has a Dirichlet patch; use mode mixed");
    }
    const EllipticRun run = run_elliptic(cfg, *cp.elliptic, cfg.eps);
    write_field(cfg, "u.csv", "u", run.V.lattice, run.u, 0);
    write_field(cfg, "v.csv", "v", run.V.lattice, run.v, 0);
    auto it = open_out(cfg, "iterations.csv");
    it << "iteration,pass,residual\n";
    std::size_t j = 0;
    for (std::size_t pass = 0; pass < run.V.pass_iterations.size(); ++pass) {
      for (long n = 0; n < run.V.pass_iterations[pass]; ++n, ++j) {
        it << j + 1 << "," << pass << "," << run.V.residual_history[j] << "\n";
      }
    }
    auto ac = open_out(cfg, "anchor_changes.csv");
    ac << "pass,change\n";
    for (std::size_t pass = 0; pass < run.V.anchor_changes.size(); ++pass) ac << pass << "," << run.V.anchor_changes[pass] << "\n";
    summary << "cap_M=" << run.caps.cap_M << "\ncap_m=" << run.caps.cap_m << "\niterations=" << run.V.iterations << "\npasses=" << run.V.pass_iterations.size()
            << "\nanchor_change=" << run.V.anchor_changes.back()
            << "\nresidual=" << run.V.residual << "\ndirichlet_hits=" << run.V.dirichlet_hits << "\n";
    for (const auto& w : run.V.warnings) summary << "warning=" << w << "\n";
    if (cp.exact) summary << "sup_error=" << sup_error(*run.V.lattice, run.u, cp, 0.0) << "\n";
  } else {
    const ParabolicRun run = run_parabolic(cfg, *cp.parabolic, cfg.eps);
    write_field(cfg, "u.csv", "u", run.lattice, run.u, run.steps);
    if (cfg.levelset) write_field(cfg, "v.csv", "v", run.lattice, run.v, run.steps);
    summary << "t_start=" << run.t_start << "\nsteps=" << run.steps << "\n";
    if (cfg.levelset) summary << "z_overflow=" << run.overflow << "\n";
    if (cp.exact) summary << "sup_error=" << sup_error(*run.lattice, run.u, cp, run.t_start) << "\n";
  }
  summary << "wall_time_s=" << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << "\n";
  return 0;
}

int cmd_convergence(const RunConfig& cfg) {
  const bool ell = is_elliptic(cfg);
  const CatalogProblem cp = load_problem(cfg, ell);
  if (!cp.exact) throw ValidationError("problem " + cp.name + " has no exact solution to converge to");
  const std::vector<double> ladder = cli::parse_ladder(cfg.eps_ladder);
  auto os = open_out(cfg, "convergence.csv");
  os << "eps,sup_error,order\n";
  double prev_eps = 0.0, prev_err = 0.0;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const double eps = ladder[k];
    double err = 0.0;
    if (ell) {
      const EllipticRun run = run_elliptic(cfg, *cp.elliptic, eps);
      err = sup_error(*run.V.lattice, run.u, cp, 0.0);
    } else {
      const ParabolicRun run = run_parabolic(cfg, *cp.parabolic, eps);
      err = sup_error(*run.lattice, run.u, cp, run.t_start);
    }
    os << eps << "," << err << ",";
    if (k > 0 && err > 0.0 && prev_err > 0.0) os << std::log(prev_err / err) / std::log(prev_eps / eps);
    os << "\n";
    std::cout << "eps=" << eps << " sup_error=" << err << "\n";
    prev_eps = eps;
    prev_err = err;
  }
  return 0;
}

int cmd_consistency(const RunConfig& cfg) {
  const std::vector<double> ladder = cli::parse_ladder(cfg.eps_ladder);
  const double c = cfg.c_slack > 0.0 ? cfg.c_slack : kConsistencySlack;
  const auto rows = consistency_suite(ladder, c, cli::candidate_options(cfg), cfg.threads);
  auto os = open_out(cfg, "consistency.csv");
  write_consistency_csv(os, rows);
  std::map<std::string, std::pair<int, int>> tally;
  for (const auto& r : rows) {
    auto& t = tally[r.side + " " + r.kase];
    ++t.first;
    if (!r.pass) ++t.second;
  }
  for (const auto& [k, t] : tally) std::cout << k << ": " << t.first << " rows, " << t.second << " failing\n";
  std::cout << "c_slack=" << c << "\n";
  return 0;
}

int cmd_audit_elliptic(const RunConfig& cfg) {
  const CatalogProblem cp = load_problem(cfg, true);
  const EllipticProblem& pb = *cp.elliptic;
  GameParams params = cli::make_params(cfg, cfg.eps);
  params.lambda_rate = pb.lambda;
  auto os = open_out(cfg, "audit_elliptic.csv");
  os << "check,value,limit,pass\n";
  auto row = [&](const std::string& name, double value, double limit, bool pass) {
    os << name << "," << value << "," << limit << "," << (pass ? 1 : 0) << "\n";
    std::cout << (pass ? "ok   " : "FAIL ") << name << " = " << value << " (limit " << limit << ")\n";
  };

  const PsiNorms norms = psi_norms(pb.domain, pb.h.sup(), 1e-4, 400, cfg.seed);
  const double e0 = eps0(norms, params.alpha);
  row("eps0", e0, cfg.eps, cfg.eps < e0);
  const double h_fd = 1e-5;
  const double dn = psi_normal_derivative_error(pb.domain, pb.h.sup(), h_fd, cfg.samples, cfg.seed);
  row("psi_normal_derivative_error", dn, 10.0 * h_fd, dn <= 10.0 * h_fd);
  const PsiBoundary pbnd = audit_psi_boundary(pb.domain, pb.h, params, 1e-5, cfg.samples, cfg.seed);
  row("max_M_eps_psi", pbnd.max_M_psi, -0.5, pbnd.max_M_psi <= -0.5);
  row("min_m_eps_minus_psi", pbnd.min_m_minus_psi, 0.5, pbnd.min_m_minus_psi >= 0.5);

  EllipticRun run = run_elliptic(cfg, pb, cfg.eps);
  const double m0 = m0_estimate(pb, run.caps, norms, 2000, cfg.seed);
  row("cap_M_minus_M0", run.caps.cap_M - m0, 0.0, run.caps.cap_M > m0);
  const double disc = params.discount();
  row("residual_ratio", residual_ratio(run.V, 5), disc + 1e-6, residual_ratio(run.V, 5) <= disc + 1e-6);
  row("cap_excess", cap_excess(run.V, run.caps), 0.0, cap_excess(run.V, run.caps) <= 0.0);
  double uv = -1e300;
  for (std::size_t i = 0; i < run.V.nx(); ++i) {
    uv = std::max(uv, std::max(std::abs(run.u[i]), std::abs(run.v[i])) - run.caps.chi[i]);
  }
  row("extracted_excess", uv, 0.0, uv <= 0.0);

  // Contraction on random members of F_chi with a common anchor.
  std::mt19937_64 rng(cfg.seed);
  const GridField anchor = extracted_anchor(run.V);
  EllipticOptions o;
  o.cand = cli::candidate_options(cfg);
  o.threads = cfg.threads;
  double ratio = 0.0;
  for (int k = 0; k < 5; ++k) {
    const FixedPointValue a = random_in_ball(run.V, run.caps, rng), b = random_in_ball(run.V, run.caps, rng);
    const FixedPointValue ra = r_eps_apply(a, pb, run.caps, params, &anchor, o);
    const FixedPointValue rb = r_eps_apply(b, pb, run.caps, params, &anchor, o);
    double num = 0.0, den = 0.0;
    for (std::size_t q = 0; q < a.V.size(); ++q) {
      num = std::max(num, std::abs(ra.V[q] - rb.V[q]));
      den = std::max(den, std::abs(a.V[q] - b.V[q]));
    }
    ratio = std::max(ratio, num / den);
  }
  row("contraction_ratio", ratio, disc + 1e-10, ratio <= disc + 1e-10);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    cfg = cli::parse_command_line(argc, argv);
  } catch (const cli::ParseExit& e) {
    return e.code == 0 ? 0 : kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  try {
    validate(cfg);
    fs::create_directories(cfg.out);
    {
      auto os = open_out(cfg, "config.txt");
      os << cli::dump_config(cfg);
    }
    if (cfg.command == "solve") return cmd_solve(cfg);
    if (cfg.command == "convergence") return cmd_convergence(cfg);
    if (cfg.command == "consistency") return cmd_consistency(cfg);
    return cmd_audit_elliptic(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericAbort& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
