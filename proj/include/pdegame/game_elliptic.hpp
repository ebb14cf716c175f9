#pragma once

#include "pdegame/fields.hpp"
#include "pdegame/game_parabolic.hpp"
#include "pdegame/params.hpp"
#include "pdegame/problems.hpp"
#include "pdegame/strategies.hpp"

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace pdegame {

/// exp[-d / (1 - d/(r/2))] for d < r/2, zero beyond.
double psi1(double d, double r);
/// psi = (h_sup + 1) psi1(d(x)) with r = r_int of the domain.
ScalarFn psi_function(const Domain& domain, double h_sup);
GridField build_psi(std::shared_ptr<const Lattice> lattice, double h_sup);

struct PsiNorms {
  double sup = 0.0;
  double grad_sup = 0.0;
  double hess_sup = 0.0;  // operator norm
};
/// Sup norms of psi and its derivatives, by finite differences at random points.
PsiNorms psi_norms(const Domain& domain, double h_sup, double h_fd, int samples, std::uint64_t seed);
/// (4 ||D^2 psi|| + 2)^(-1/(1-alpha)).
double eps0(const PsiNorms& n, double alpha);

struct CapSpec {
  double cap_M = 0.0;
  double cap_m = 0.0;  // M - 1 - 2 ||psi||
  double psi_sup = 0.0;
  GridField psi;
  GridField chi;  // m + ||psi|| + psi
};
/// Throws ValidationError unless M > 1 + 2 ||psi||, which keeps m and chi positive.
CapSpec make_caps(std::shared_ptr<const Lattice> lattice, double h_sup, double cap_M);

/// Discounted one-step operator over the finite candidate sets.
GameChoice q_eps_detail(const Vec& x, double z, const Field& phi, const EllipticProblem& pb, const GameParams& params,
                        const CandidateOptions& opts = {}, const Field* anchor = nullptr);
double q_eps(const Vec& x, double z, const Field& phi, const EllipticProblem& pb, const GameParams& params,
             const CandidateOptions& opts = {}, const Field* anchor = nullptr);

/// V(x, z) on lattice nodes x z-nodes strictly inside (-M, M), laid out as
/// k * nx + i. U = V - z.
struct FixedPointValue {
  std::shared_ptr<const Lattice> lattice;
  std::vector<double> z_grid;
  double dz = 0.0;
  double M = 0.0;
  std::vector<double> V;
  long iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
  std::vector<long> pass_iterations;
  std::vector<double> anchor_changes;  // sup change of the extracted u over each pass
  long dirichlet_hits = 0;  // Dirichlet-branch evaluations in the last sweep
  std::vector<std::string> warnings;

  std::size_t nx() const { return lattice->size(); }
  std::size_t nz() const { return z_grid.size(); }
  double at(std::size_t node, std::size_t k) const { return V[k * nx() + node]; }
  std::vector<double> column_U(std::size_t node) const;
};

/// Layout with z-nodes -M + k dz, k = 1 .. 2K-1, where dz = M/K is the
/// largest spacing not above dz_target. All values set to `init`.
FixedPointValue make_fixed_point_value(std::shared_ptr<const Lattice> lattice, double M, double dz_target,
                                       double init = 0.0);

struct EllipticOptions {
  CandidateOptions cand;
  int threads = 1;
  double spacing = 0.0;      // lattice spacing; 0 picks Lattice::default_spacing
  double dz = 0.0;           // z spacing target; 0 picks eps^2
  int anchor_passes = 200;   // most passes, each with a frozen candidate set
  long anchor_stride = 0;    // sweeps before re-anchoring; 0 picks ceil(1 / (lambda eps^2))
  double anchor_tol = 0.0;   // anchor change that ends tracking; 0 picks eps^3
  long max_iterations = 0;   // final pass; 0 picks 10 ceil(log(1/tol) / (lambda eps^2))
};

/// R_eps with candidate sets frozen from an anchor field. With `mixed`, a
/// landing on the Dirichlet patch with |z'| < M pays e^(-lambda eps^2) g_exit - delta,
/// the V form of the exit payoff.
/// V(x', z') is bilinear in (x, z).
class EllipticOperator {
 public:
  EllipticOperator(const EllipticProblem& pb, const CapSpec& caps, const GameParams& params,
                   const FixedPointValue& layout, const Field& anchor, bool mixed, const EllipticOptions& opts);

  /// One sweep. `dirichlet_hits` receives the number of Dirichlet-branch evaluations.
  std::vector<double> apply(const std::vector<double>& V, long* dirichlet_hits = nullptr) const;

 private:
  struct NodeGame {
    std::vector<Stencil> stencil;       // per move
    std::vector<char> dirichlet;        // per move
    std::vector<double> exit_value;     // per move
    std::vector<double> base;           // per (strategy, move): quadratic cost - coupon
    std::vector<double> eps2_f;         // per (z-node, strategy)
    std::size_t ns = 0, nm = 0;
  };

  double interp(const std::vector<double>& V, const Stencil& st, double zq) const;

  const FixedPointValue* layout_;
  std::vector<NodeGame> games_;
  std::vector<double> chi_;
  double discount_, growth_, M_;
  int threads_;
};

/// Extracted u(x) = sup{z : V(x,z) - z >= 0} per node, clamped to [-M, M].
GridField extracted_anchor(const FixedPointValue& V);

/// One application of R_eps. The anchor defaults to extracted_anchor(V).
FixedPointValue r_eps_apply(const FixedPointValue& V, const EllipticProblem& pb, const CapSpec& caps,
                            const GameParams& params, const Field* anchor = nullptr, const EllipticOptions& opts = {});
/// R_eps with the Dirichlet exit branch on `dirichlet_patch`.
FixedPointValue r_eps_mixed(const FixedPointValue& V, const EllipticProblem& pb, const CapSpec& caps,
                            const GameParams& params, const std::function<bool(const Vec&)>& dirichlet_patch,
                            const ScalarFn& g_exit, const Field* anchor = nullptr, const EllipticOptions& opts = {});

/// (1 + lambda (1 + 2 ||psi||) + C*) / eta with C* sampled from f.
double m0_estimate(const EllipticProblem& pb, const CapSpec& caps, const PsiNorms& norms, int samples,
                   std::uint64_t seed);

/// Fixed point of R_eps from V = 0. Each pass freezes the candidate set on the
/// extracted u of the current iterate. Tracking passes run anchor_stride sweeps
/// until the extracted u moves by less than anchor_tol over a pass; a final
/// pass then sweeps with its frozen set until the sup-change is below tol.
/// Running out of tracking passes adds a warning. Uses the mixed operator when
/// the problem has a Dirichlet patch.
FixedPointValue solve_fixed_point(const EllipticProblem& pb, const CapSpec& caps, const GameParams& params, double tol,
                                  const EllipticOptions& opts = {});

/// Largest ratio of successive residuals inside each anchor pass, skipping the
/// first burn_in iterations of the pass and residuals below `floor`. Residuals
/// jump between passes because the candidate set changes there.
double residual_ratio(const FixedPointValue& V, int burn_in, double floor = 1e-12);
/// max over (x, z) of |V| - chi(x); at most zero inside F_chi.
double cap_excess(const FixedPointValue& V, const CapSpec& caps);
/// Same layout with values uniform in [-chi(x), chi(x)].
FixedPointValue random_in_ball(const FixedPointValue& layout, const CapSpec& caps, std::mt19937_64& rng);

/// Strict extraction: sup{z : U > 0} and inf{z : U < 0}.
double extract_u_elliptic(const FixedPointValue& V, std::size_t node);
double extract_v_elliptic(const FixedPointValue& V, std::size_t node);

}  // namespace pdegame
