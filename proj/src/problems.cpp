#include "pdegame/problems.hpp"

#include "pdegame/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pdegame {

BoundaryData::BoundaryData(Domain domain, ScalarFn fn, double sup)
    : domain_(std::move(domain)), fn_(std::move(fn)), sup_(sup) {}

BoundaryData BoundaryData::sampled_sup(Domain domain, ScalarFn fn) {
  double sup = 0.0;
  if (domain.dim() == 1) {
    sup = std::max(std::abs(fn(Vec(domain.a(), 0.0))), std::abs(fn(Vec(domain.c(), 0.0))));
  } else {
    const int n = 4096;
    std::vector<double> radii = {domain.radius()};
    if (domain.kind() == DomainKind::annulus) radii.push_back(domain.inner_radius());
    for (double r : radii) {
      for (int k = 0; k < n; ++k) {
        const double th = 2.0 * std::numbers::pi * k / n;
        sup = std::max(sup, std::abs(fn(domain.center() + r * Vec(std::cos(th), std::sin(th)))));
      }
    }
  }
  return BoundaryData(std::move(domain), std::move(fn), sup);
}

double BoundaryData::operator()(const Vec& x_b) const {
  if (!fn_) return 0.0;
  // Same slack as outward_normal: landings carry projection roundoff.
  if (std::abs(domain_->signed_distance(x_b)) > 1e3 * domain_->tolerance()) {
    throw DomainError("Neumann data evaluated off the boundary at " + format_point(x_b, domain_->dim()));
  }
  return fn_(x_b);
}

namespace {

constexpr double kT = 1.0;

ParabolicProblem heat1d(const std::string& name, double a, double c, ScalarFn g, double g_sup, ScalarFn h,
                        double h_sup) {
  ParabolicProblem pb;
  pb.name = name;
  pb.domain = Domain::interval(a, c);
  pb.f = [](double, const Vec&, double, const Vec&, const Mat& G) { return -G(0, 0); };
  pb.g = std::move(g);
  pb.g_sup = g_sup;
  pb.h = BoundaryData(pb.domain, std::move(h), h_sup);
  pb.T = kT;
  return pb;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"heat1d_homogeneous",  "heat1d_linear_profile",   "heat1d_cosine",
          "laplace_elliptic_1d", "degenerate_parabolic_2d", "mixed_dn_elliptic_1d"};
}

CatalogProblem catalog_lookup(const std::string& name) {
  CatalogProblem out;
  out.name = name;
  if (name == "heat1d_homogeneous") {
    out.parabolic = heat1d(
        name, 0.0, 1.0, [](const Vec&) { return 5.0; }, 5.0, [](const Vec&) { return 0.0; }, 0.0);
    out.exact = [](const Vec&, double) { return 5.0; };
  } else if (name == "heat1d_linear_profile") {
    out.parabolic = heat1d(
        name, 0.0, 1.0, [](const Vec& x) { return x(0); }, 1.0,
        [](const Vec& x) { return x(0) < 0.5 ? -1.0 : 1.0; }, 1.0);
    out.exact = [](const Vec& x, double) { return x(0); };
  } else if (name == "heat1d_cosine") {
    out.parabolic = heat1d(
        name, 0.0, std::numbers::pi, [](const Vec& x) { return std::cos(x(0)); }, 1.0,
        [](const Vec&) { return 0.0; }, 0.0);
    out.exact = [](const Vec& x, double t) { return std::exp(-(kT - t)) * std::cos(x(0)); };
  } else if (name == "laplace_elliptic_1d") {
    EllipticProblem pb;
    pb.name = name;
    pb.domain = Domain::interval(0.0, 1.0);
    pb.f = [](const Vec&, double, const Vec&, const Mat& G) { return -G(0, 0); };
    pb.h = BoundaryData(
        pb.domain, [](const Vec& x) { return x(0) < 0.5 ? 0.0 : std::sinh(1.0); }, std::sinh(1.0));
    pb.lambda = 1.0;
    pb.eta = 1.0;
    out.elliptic = pb;
    out.exact = [](const Vec& x, double) { return std::cosh(x(0)); };
  } else if (name == "degenerate_parabolic_2d") {
    // Diffusion along x1 only, with a z-coupling that vanishes on the exact
    // solution u = x1^2/2 + (T - t).
    constexpr double mu = 0.5;
    ParabolicProblem pb;
    pb.name = name;
    pb.domain = Domain::ball(Vec::Zero(), 1.0);
    pb.f = [](double t, const Vec& x, double z, const Vec&, const Mat& G) {
      return -G(0, 0) + mu * (z - (0.5 * x(0) * x(0) + (kT - t)));
    };
    pb.g = [](const Vec& x) { return 0.5 * x(0) * x(0); };
    pb.g_sup = 0.5;
    pb.h = BoundaryData(
        pb.domain, [](const Vec& x) { return x(0) * x(0); }, 1.0);
    pb.T = kT;
    pb.z_dependent = true;
    pb.z_nondecreasing = true;
    out.parabolic = pb;
    out.exact = [](const Vec& x, double t) { return 0.5 * x(0) * x(0) + (kT - t); };
  } else if (name == "mixed_dn_elliptic_1d") {
    EllipticProblem pb;
    pb.name = name;
    pb.domain = Domain::interval(0.0, 1.0);
    pb.f = [](const Vec&, double, const Vec&, const Mat&) { return 0.0; };
    pb.h = BoundaryData(
        pb.domain, [](const Vec&) { return 0.0; }, 0.0);
    pb.lambda = 1.0;
    pb.eta = 1.0;
    const double tol = pb.domain.tolerance();
    pb.dirichlet_patch = [tol](const Vec& x) { return x(0) <= tol; };
    pb.g_exit = [](const Vec&) { return 1.0; };
    out.elliptic = pb;
  } else {
    std::ostringstream os;
    os << "unknown problem '" << name << "'; catalog:";
    for (const auto& n : catalog_names()) os << " " << n;
    throw std::invalid_argument(os.str());
  }
  return out;
}

namespace {

ExprVars vars_of(double t, const Vec& x, double z, const Vec& p, const Mat& G) {
  return {t, x(0), x(1), z, p(0), p(1), G(0, 0), G(0, 1), G(1, 1)};
}

}  // namespace

ParabolicProblem custom_parabolic(const Domain& domain, const std::string& f, const std::string& g,
                                  const std::string& h, double T, double q, double r) {
  const Expr fe = Expr::parse(f), ge = Expr::parse(g), he = Expr::parse(h);
  ParabolicProblem pb;
  pb.name = "custom";
  pb.domain = domain;
  pb.f = [fe](double t, const Vec& x, double z, const Vec& p, const Mat& G) { return fe.eval(vars_of(t, x, z, p, G)); };
  pb.g = [ge](const Vec& x) { return ge.eval(vars_of(0.0, x, 0.0, Vec::Zero(), Mat::Zero())); };
  pb.h = BoundaryData::sampled_sup(domain, [he](const Vec& x) {
    return he.eval(vars_of(0.0, x, 0.0, Vec::Zero(), Mat::Zero()));
  });
  pb.T = T;
  pb.q = q;
  pb.r = r;
  pb.z_dependent = fe.uses("z");
  pb.z_nondecreasing = !pb.z_dependent;
  // Sup of g over a fine sample of the closure.
  const GridField gs = GridField::sample(domain, domain.diameter() / 256.0, pb.g);
  pb.g_sup = gs.sup_norm();
  return pb;
}

EllipticProblem custom_elliptic(const Domain& domain, const std::string& f, const std::string& h, double lambda,
                                double eta, double q, double r) {
  const Expr fe = Expr::parse(f), he = Expr::parse(h);
  EllipticProblem pb;
  pb.name = "custom";
  pb.domain = domain;
  pb.f = [fe](const Vec& x, double z, const Vec& p, const Mat& G) { return fe.eval(vars_of(0.0, x, z, p, G)); };
  pb.h = BoundaryData::sampled_sup(domain, [he](const Vec& x) {
    return he.eval(vars_of(0.0, x, 0.0, Vec::Zero(), Mat::Zero()));
  });
  pb.lambda = lambda;
  pb.eta = eta;
  pb.q = q;
  pb.r = r;
  pb.z_dependent = fe.uses("z");
  return pb;
}

// ---------------------------------------------------------------------------
// Sampling helpers

Vec random_point(const Domain& domain, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vec lo = domain.box_lo(), hi = domain.box_hi();
  for (;;) {
    Vec x(lo(0) + u(rng) * (hi(0) - lo(0)), domain.dim() == 2 ? lo(1) + u(rng) * (hi(1) - lo(1)) : 0.0);
    if (domain.contains(x)) return x;
  }
}

Vec random_boundary_point(const Domain& domain, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (domain.dim() == 1) return Vec(u(rng) < 0.5 ? domain.a() : domain.c(), 0.0);
  const double th = 2.0 * std::numbers::pi * u(rng);
  double r = domain.radius();
  if (domain.kind() == DomainKind::annulus) {
    const double ri = domain.inner_radius();
    if (u(rng) * (r + ri) < ri) r = ri;
  }
  return domain.center() + r * Vec(std::cos(th), std::sin(th));
}

Vec random_layer_point(const Domain& domain, double width, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double d = width * u(rng);
  if (domain.dim() == 1) return u(rng) < 0.5 ? Vec(domain.a() + d, 0.0) : Vec(domain.c() - d, 0.0);
  const Vec xb = random_boundary_point(domain, rng);
  return xb - d * domain.normal_at_projection(xb);
}

// ---------------------------------------------------------------------------
// Sampled hypothesis checks

namespace {

struct RandomArgs {
  double tfrac;
  Vec x;
  double z;
  Vec p;
  Mat G;
};

RandomArgs random_args(const Domain& domain, double Kp, double Kg, double Kz, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RandomArgs a;
  a.tfrac = 0.5 * (1.0 + u(rng));
  a.x = random_point(domain, rng);
  a.z = Kz * u(rng);
  a.p = Vec(u(rng), domain.dim() == 2 ? u(rng) : 0.0) * Kp;
  Mat G = Mat::Zero();
  G(0, 0) = u(rng);
  if (domain.dim() == 2) {
    G(1, 1) = u(rng);
    G(0, 1) = G(1, 0) = u(rng);
  }
  const double n = op_norm(G);
  a.G = n > 0 ? Mat(G * (Kg * std::abs(u(rng)) / n)) : G;
  return a;
}

Vec random_unit(int dim, std::mt19937_64& rng) {
  if (dim == 1) return Vec(std::uniform_int_distribution<int>(0, 1)(rng) ? 1.0 : -1.0, 0.0);
  const double th = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  return Vec(std::cos(th), std::sin(th));
}

template <class Eval>
SampleCheck ellipticity_loop(const Domain& domain, int samples, std::uint64_t seed, Eval eval) {
  std::mt19937_64 rng(seed);
  SampleCheck res;
  res.worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const RandomArgs a = random_args(domain, 10.0, 10.0, 10.0, rng);
    const Vec v = random_unit(domain.dim(), rng);
    for (double s : {0.1, 1.0}) {
      const double viol = eval(a, Mat(a.G + s * v * v.transpose())) - eval(a, a.G);
      if (viol > res.worst) res.worst = viol;
      if (viol > 1e-12) {
        res.ok = false;
        res.detail = "f increases along a positive direction at x=" + format_point(a.x, domain.dim());
      }
    }
  }
  return res;
}

}  // namespace

SampleCheck check_ellipticity(const ParabolicProblem& pb, int samples, std::uint64_t seed) {
  return ellipticity_loop(pb.domain, samples, seed, [&](const RandomArgs& a, const Mat& G) {
    return pb.f(a.tfrac * pb.T, a.x, a.z, a.p, G);
  });
}

SampleCheck check_ellipticity(const EllipticProblem& pb, int samples, std::uint64_t seed) {
  return ellipticity_loop(pb.domain, samples, seed,
                          [&](const RandomArgs& a, const Mat& G) { return pb.f(a.x, a.z, a.p, G); });
}

SampleCheck check_eta_bound(const EllipticProblem& pb, double K, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RandomArgs> args;
  double C = 0.0;
  for (int i = 0; i < samples; ++i) {
    args.push_back(random_args(pb.domain, K, K, 1e3, rng));
    const RandomArgs& a = args.back();
    C = std::max(C, std::abs(pb.f(a.x, 0.0, a.p, a.G)));
  }
  SampleCheck res;
  res.worst = -std::numeric_limits<double>::infinity();
  for (const RandomArgs& a : args) {
    const double viol = std::abs(pb.f(a.x, a.z, a.p, a.G)) - ((pb.lambda - pb.eta) * std::abs(a.z) + C);
    res.worst = std::max(res.worst, viol);
    if (viol > 1e-9 * (1.0 + std::abs(a.z))) {
      res.ok = false;
      res.detail = "growth in z exceeds lambda - eta at z=" + std::to_string(a.z);
    }
  }
  return res;
}

double sample_f_bound(const EllipticProblem& pb, double Kp, double Kg, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double C = 0.0;
  for (int i = 0; i < samples; ++i) {
    const RandomArgs a = random_args(pb.domain, Kp, Kg, 0.0, rng);
    C = std::max(C, std::abs(pb.f(a.x, 0.0, a.p, a.G)));
  }
  // Corners of the (p, G) box are where linear growth peaks.
  for (double sp : {-1.0, 1.0}) {
    for (double sg : {-1.0, 1.0}) {
      Mat G = Mat::Zero();
      G(0, 0) = sg * Kg;
      if (pb.domain.dim() == 2) G(1, 1) = sg * Kg;
      C = std::max(C, std::abs(pb.f(pb.domain.boundary_projection(pb.domain.center()), 0.0, Vec(sp * Kp, 0.0), G)));
    }
  }
  return C;
}

}  // namespace pdegame
