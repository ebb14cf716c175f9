#include "doctest.h"
#include "pdegame/consistency.hpp"
#include "pdegame/game_elliptic.hpp"

#include <cmath>
#include <random>

using namespace pdegame;

namespace {

const Domain kI = Domain::interval(0, 1);

EllipticProblem trivial(const std::string& f = "0") { return custom_elliptic(kI, f, "0", 1.0, 1.0, 1, 1); }

GameParams params_at(double eps, double lambda = 1.0) {
  GameParams p = GameParams::from(eps, select_exponents(1, 1));
  p.lambda_rate = lambda;
  return p;
}

std::shared_ptr<const Lattice> lattice_for(const Domain& D, double eps) {
  return std::make_shared<const Lattice>(D, Lattice::default_spacing(D, eps, 0.25));
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_CASE("psi equals h_sup + 1 on the boundary and vanishes past r/2") {
  CHECK(psi1(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(psi1(0.5, 1.0) == 0.0);
  CHECK(psi1(0.7, 1.0) == 0.0);
  CHECK(psi1(0.25, 1.0) == doctest::Approx(std::exp(-0.5)));
  const ScalarFn psi = psi_function(kI, 2.0);
  CHECK(psi(Vec(0.0, 0)) == doctest::Approx(3.0));
  CHECK(psi(Vec(1.0, 0)) == doctest::Approx(3.0));
  CHECK(psi(Vec(0.5, 0)) == 0.0);

  const Domain disk = Domain::ball(Vec::Zero(), 1);
  const GridField g = build_psi(lattice_for(disk, 0.2), 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = disk.dist_to_boundary(g.lattice().node(i));
    if (d < 1e-12) CHECK(g[i] == doctest::Approx(1.5));
    if (d >= 0.5) CHECK(g[i] == 0.0);
  }
}

TEST_CASE("psi normal derivative matches h_sup + 1") {
  const double h_fd = 1e-5;
  for (const Domain& D : {kI, Domain::ball(Vec::Zero(), 1), Domain::annulus(Vec::Zero(), 1, 2)}) {
    CHECK(psi_normal_derivative_error(D, 0.7, h_fd, 50, 11) <= 10.0 * h_fd);
  }
}

TEST_CASE("make_caps binds m to M and rejects small caps") {
  auto lat = lattice_for(kI, 0.2);
  const CapSpec c = make_caps(lat, 1.0, 10.0);
  CHECK(c.psi_sup == doctest::Approx(2.0));
  CHECK(c.cap_m == doctest::Approx(10.0 - 1.0 - 4.0));
  for (std::size_t i = 0; i < c.chi.size(); ++i) {
    CHECK(c.chi[i] == doctest::Approx(c.cap_m + c.psi_sup + c.psi[i]));
    CHECK(c.chi[i] > 0.0);
  }
  CHECK_THROWS_AS(make_caps(lat, 1.0, 5.0), ValidationError);
}

TEST_CASE("Q_eps on constants and shifted fields") {
  const EllipticProblem pb = custom_elliptic(kI, "-g + 0.3*p", "0.5", 1.0, 1.0, 1, 1);
  const GameParams p = params_at(0.1);
  const double disc = std::exp(-0.01);
  const AnalyticField phi(kI, 1e-4, [](const Vec& x) { return std::sin(2.0 * x(0)); });
  const AnalyticField c(kI, 1e-4, [](const Vec&) { return 1.7; });
  const EllipticProblem flat = trivial();
  for (double x : {0.0, 0.03, 0.4, 0.99, 1.0}) {
    CHECK(q_eps(Vec(x, 0), 0.2, c, flat, p) == doctest::Approx(disc * 1.7).epsilon(1e-12));
    const AnalyticField shifted(kI, 1e-4, [&](const Vec& y) { return 1.7 + phi.eval(y); });
    // Same anchor on both sides keeps the candidate sets identical.
    const double lhs = q_eps(Vec(x, 0), 0.2, shifted, pb, p, {}, &phi);
    const double rhs = disc * 1.7 + q_eps(Vec(x, 0), 0.2, phi, pb, p, {}, &phi);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("Q_eps is monotone in phi") {
  const EllipticProblem pb = custom_elliptic(kI, "-g", "1", 1.0, 1.0, 1, 1);
  const GameParams p = params_at(0.1);
  auto lat = lattice_for(kI, 0.1);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1), pos(0, 0.5);
  for (int k = 0; k < 10; ++k) {
    GridField lo(lat), hi(lat);
    for (std::size_t i = 0; i < lo.size(); ++i) {
      lo[i] = u(rng);
      hi[i] = lo[i] + pos(rng);
    }
    for (double x : {0.0, 0.02, 0.5, 1.0}) {
      CHECK(q_eps(Vec(x, 0), 0.0, lo, pb, p, {}, &lo) <= q_eps(Vec(x, 0), 0.0, hi, pb, p, {}, &lo) + 1e-12);
    }
  }
}

TEST_CASE("one sweep of the trivial game keeps V = 0 away from the caps") {
  const EllipticProblem pb = trivial();
  const GameParams p = params_at(0.2);
  auto lat = lattice_for(kI, 0.2);
  const CapSpec caps = make_caps(lat, 0.0, 6.0);
  const FixedPointValue V0 = make_fixed_point_value(lat, 6.0, 0.25);
  const FixedPointValue V1 = r_eps_apply(V0, pb, caps, p);
  for (std::size_t k = 0; k < V1.nz(); ++k) {
    if (std::abs(V1.z_grid[k]) > 6.0 - 1.0) continue;
    for (std::size_t i = 0; i < V1.nx(); ++i) CHECK(V1.at(i, k) == 0.0);
  }
}

TEST_CASE("a debt pushed past M is capped at -chi") {
  const EllipticProblem pb = trivial("1000");
  const GameParams p = params_at(0.2);
  auto lat = lattice_for(kI, 0.2);
  const CapSpec caps = make_caps(lat, 0.0, 6.0);
  const FixedPointValue V1 = r_eps_apply(make_fixed_point_value(lat, 6.0, 0.25), pb, caps, p);
  for (std::size_t k = 0; k < V1.nz(); ++k) {
    for (std::size_t i = 0; i < V1.nx(); ++i) CHECK(V1.at(i, k) == doctest::Approx(-caps.chi[i]));
  }
}

TEST_CASE("R_eps contracts by the discount on random pairs") {
  const EllipticProblem pb = custom_elliptic(kI, "-g + 0.5*z", "x - 0.5", 1.0, 0.5, 1, 1);
  for (double eps : {0.2, 0.1}) {
    const GameParams p = params_at(eps);
    auto lat = lattice_for(kI, eps);
    const CapSpec caps = make_caps(lat, pb.h.sup(), 6.0);
    const FixedPointValue layout = make_fixed_point_value(lat, 6.0, 0.3);
    const GridField anchor(lat, 0.0);
    std::mt19937_64 rng(9);
    for (int k = 0; k < 4; ++k) {
      const FixedPointValue a = random_in_ball(layout, caps, rng), b = random_in_ball(layout, caps, rng);
      const double ratio = sup_diff(r_eps_apply(a, pb, caps, p, &anchor).V, r_eps_apply(b, pb, caps, p, &anchor).V) /
                           sup_diff(a.V, b.V);
      CHECK(ratio <= p.discount() + 1e-10);
    }
  }
}

TEST_CASE("with M above M0 the ball F_chi is preserved by R_eps") {
  const Domain D = Domain::interval(0, 8);
  const EllipticProblem pb = custom_elliptic(D, "-g", "(x-4)/8", 1.0, 1.0, 1, 1);
  const GameParams p = params_at(0.2);
  auto lat = lattice_for(D, 0.2);
  const PsiNorms n = psi_norms(D, pb.h.sup(), 1e-4, 400, 1);
  const double m0 = m0_estimate(pb, make_caps(lat, pb.h.sup(), 10.0), n, 2000, 1);
  const CapSpec caps = make_caps(lat, pb.h.sup(), m0 + 1.0);
  std::mt19937_64 rng(2);
  const GridField anchor(lat, 0.0);
  for (int k = 0; k < 3; ++k) {
    const FixedPointValue V = random_in_ball(make_fixed_point_value(lat, caps.cap_M, 0.4), caps, rng);
    CHECK(cap_excess(V, caps) <= 0.0);
    CHECK(cap_excess(r_eps_apply(V, pb, caps, p, &anchor), caps) <= 1e-12);
  }
}

TEST_CASE("the trivial game solves to a zero crossing at z = 0") {
  const EllipticProblem pb = trivial();
  const GameParams p = params_at(0.2);
  auto lat = lattice_for(kI, 0.2);
  const CapSpec caps = make_caps(lat, 0.0, 6.0);
  EllipticOptions o;
  o.dz = 0.25;
  const FixedPointValue V = solve_fixed_point(pb, caps, p, 1e-9, o);
  CHECK(V.residual < 1e-9);
  CHECK(cap_excess(V, caps) <= 1e-12);
  for (std::size_t i = 0; i < V.nx(); ++i) {
    CHECK(std::abs(extract_u_elliptic(V, i)) <= 1e-12);
    CHECK(std::abs(extract_v_elliptic(V, i)) <= 1e-12);
  }
  CHECK(residual_ratio(V, 5) <= p.discount() + 1e-6);
}

TEST_CASE("extraction from V = 0 gives zero and stays within chi") {
  auto lat = lattice_for(kI, 0.2);
  const FixedPointValue V = make_fixed_point_value(lat, 6.0, 0.25);
  for (std::size_t i = 0; i < V.nx(); ++i) {
    CHECK(extract_u_elliptic(V, i) == doctest::Approx(0.0));
    CHECK(extract_v_elliptic(V, i) == doctest::Approx(0.0));
  }
}

TEST_CASE("with M above M0 the solved values are ordered in z and bounded by chi") {
  // On [0, 1] the estimated M0 is in the thousands; a wide interval keeps it small.
  const Domain D = Domain::interval(0, 8);
  const EllipticProblem pb = custom_elliptic(D, "-g + 0.5*z", "(x-4)/8", 1.0, 0.5, 1, 1);
  const GameParams p = params_at(0.2, pb.lambda);
  auto lat = lattice_for(D, 0.2);
  const PsiNorms n = psi_norms(D, pb.h.sup(), 1e-4, 400, 1);
  const double m0 = m0_estimate(pb, make_caps(lat, pb.h.sup(), 10.0), n, 2000, 1);
  const CapSpec caps = make_caps(lat, pb.h.sup(), m0 + 1.0);
  EllipticOptions o;
  o.dz = 0.2;
  const FixedPointValue V = solve_fixed_point(pb, caps, p, 1e-8, o);
  CHECK(V.warnings.empty());
  CHECK(cap_excess(V, caps) <= 0.0);
  for (std::size_t i = 0; i < V.nx(); ++i) {
    const double u = extract_u_elliptic(V, i), v = extract_v_elliptic(V, i);
    CHECK(std::abs(u) <= caps.chi[i]);
    CHECK(std::abs(v) <= caps.chi[i]);
    CHECK(u - v <= 2.0 * V.dz);
    const std::vector<double> U = V.column_U(i);
    for (std::size_t k = 1; k < U.size(); ++k) CHECK(U[k] - U[k - 1] <= -(V.z_grid[k] - V.z_grid[k - 1]) + 1e-8);
  }
}

TEST_CASE("mixed game pays the exit at the Dirichlet end") {
  const CatalogProblem cp = catalog_lookup("mixed_dn_elliptic_1d");
  const EllipticProblem& pb = *cp.elliptic;
  REQUIRE(pb.dirichlet_patch);
  CHECK(pb.dirichlet_patch(Vec(0.0, 0)));
  CHECK_FALSE(pb.dirichlet_patch(Vec(1.0, 0)));
  const GameParams p = params_at(0.2, pb.lambda);
  auto lat = lattice_for(pb.domain, 0.2);
  const CapSpec caps = make_caps(lat, pb.h.sup(), 6.0);
  EllipticOptions o;
  o.dz = 0.25;
  const FixedPointValue V = solve_fixed_point(pb, caps, p, 1e-8, o);
  CHECK(V.dirichlet_hits > 0);
  for (std::size_t i = 0; i < V.nx(); ++i) CHECK(std::abs(extract_u_elliptic(V, i)) <= caps.chi[i]);
  CHECK(residual_ratio(V, 5) <= p.discount() + 1e-6);
}

TEST_CASE("M0 estimate grows with the boundary function") {
  const EllipticProblem pb = custom_elliptic(kI, "-g", "1", 1.0, 1.0, 1, 1);
  auto lat = lattice_for(kI, 0.2);
  const CapSpec caps = make_caps(lat, 1.0, 8.0);
  const PsiNorms n = psi_norms(kI, 1.0, 1e-4, 200, 3);
  CHECK(n.sup == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(m0_estimate(pb, caps, n, 200, 3) >= 1.0 + (1.0 + 2.0 * caps.psi_sup));
  CHECK(eps0(n, 0.25) == doctest::Approx(std::pow(4.0 * n.hess_sup + 2.0, -1.0 / 0.75)));
}
