#pragma once

#include "pdegame/fields.hpp"
#include "pdegame/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace pdegame {

using ParabolicF = std::function<double(double t, const Vec& x, double z, const Vec& p, const Mat& G)>;
using EllipticF = std::function<double(const Vec& x, double z, const Vec& p, const Mat& G)>;

/// Neumann data. Defined on the boundary only: evaluating it anywhere else
/// is an error, since a positive overshoot always lands on the boundary.
class BoundaryData {
 public:
  BoundaryData() = default;
  BoundaryData(Domain domain, ScalarFn fn, double sup);
  /// Sup norm estimated by sampling the boundary.
  static BoundaryData sampled_sup(Domain domain, ScalarFn fn);

  double operator()(const Vec& x_b) const;
  double sup() const { return sup_; }

 private:
  std::optional<Domain> domain_;
  ScalarFn fn_;
  double sup_ = 0.0;
};

/// -u_t + f(t, x, u, Du, D^2u) = 0 backward from T with u(T) = g and du/dn = h.
struct ParabolicProblem {
  std::string name;
  Domain domain = Domain::interval(0.0, 1.0);
  ParabolicF f;
  ScalarFn g;
  BoundaryData h;
  double T = 1.0;
  double q = 1.0, r = 1.0;
  bool z_dependent = false;
  bool z_nondecreasing = true;
  double g_sup = 0.0;
};

/// f(x, u, Du, D^2u) + lambda u = 0 with du/dn = h, optionally with a
/// Dirichlet patch carrying exit data.
struct EllipticProblem {
  std::string name;
  Domain domain = Domain::interval(0.0, 1.0);
  EllipticF f;
  BoundaryData h;
  double lambda = 1.0;
  double eta = 1.0;
  double q = 1.0, r = 1.0;
  bool z_dependent = false;
  std::function<bool(const Vec&)> dirichlet_patch;  // empty: pure Neumann
  ScalarFn g_exit;
};

struct CatalogProblem {
  std::string name;
  std::optional<ParabolicProblem> parabolic;
  std::optional<EllipticProblem> elliptic;
  /// Exact u(x, t) (t ignored for elliptic entries); empty when unknown.
  std::function<double(const Vec&, double)> exact;
};

std::vector<std::string> catalog_names();
/// Throws std::invalid_argument listing the catalog for unknown names.
CatalogProblem catalog_lookup(const std::string& name);

/// Parabolic problem from configuration expressions (see Expr).
ParabolicProblem custom_parabolic(const Domain& domain, const std::string& f, const std::string& g,
                                  const std::string& h, double T, double q, double r);
EllipticProblem custom_elliptic(const Domain& domain, const std::string& f, const std::string& h, double lambda,
                                double eta, double q, double r);

struct SampleCheck {
  bool ok = true;
  double worst = 0.0;  // largest violation found (<= 0 when ok)
  std::string detail;
};

/// f(..., G + s v v^T) <= f(..., G) + 1e-12 for s in {0.1, 1} and random unit v.
SampleCheck check_ellipticity(const ParabolicProblem& pb, int samples, std::uint64_t seed);
SampleCheck check_ellipticity(const EllipticProblem& pb, int samples, std::uint64_t seed);
/// |f(x,z,p,G)| <= (lambda - eta)|z| + C_K for ||(p,G)|| <= K, with C_K taken
/// as the largest |f(x,0,p,G)| over the same samples.
SampleCheck check_eta_bound(const EllipticProblem& pb, double K, int samples, std::uint64_t seed);

/// Largest |f(x, 0, p, G)| over samples with ||p|| <= Kp and ||G|| <= Kg.
double sample_f_bound(const EllipticProblem& pb, double Kp, double Kg, int samples, std::uint64_t seed);

/// Uniform random point of the closure.
Vec random_point(const Domain& domain, std::mt19937_64& rng);
/// Uniform random boundary point.
Vec random_boundary_point(const Domain& domain, std::mt19937_64& rng);
/// Random point at distance at most `width` from the boundary.
Vec random_layer_point(const Domain& domain, double width, std::mt19937_64& rng);

}  // namespace pdegame
