#include "doctest.h"
#include "pdegame/fields.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace pdegame;

TEST_CASE("affine and constant fields interpolate exactly") {
  const Domain I = Domain::interval(0, 1);
  const GridField g = GridField::sample(I, 0.05, [](const Vec& x) { return x(0); });
  CHECK(g.eval(Vec(0.37, 0)) == doctest::Approx(0.37).epsilon(1e-12));
  auto lat = std::make_shared<const Lattice>(I, 0.1);
  const GridField c(lat, 2.5);
  CHECK(c.eval(Vec(0.123, 0)) == doctest::Approx(2.5));
  CHECK_THROWS_AS(g.eval(Vec(1.5, 0)), DomainError);
}

TEST_CASE("interpolation error of x^2 is within h^2/4 sup|phi''| / 2") {
  const GridField g = GridField::sample(Domain::interval(0, 1), 0.01, [](const Vec& x) { return x(0) * x(0); });
  CHECK(std::abs(g.eval(Vec(0.5, 0)) - 0.25) <= 2.5e-5);
  CHECK(std::abs(g.eval(Vec(0.505, 0)) - 0.505 * 0.505) <= 2.5e-5);
}

TEST_CASE("finite-difference derivatives") {
  const Domain I = Domain::interval(0, 1);
  const AnalyticField sq(I, 1e-3, [](const Vec& x) { return x(0) * x(0); });
  CHECK(sq.fd_hessian(Vec(0.5, 0))(0, 0) == doctest::Approx(2.0).epsilon(1e-6));
  const AnalyticField c(I, 1e-3, [](const Vec&) { return 4.0; });
  CHECK(c.fd_gradient(Vec(0.3, 0)).norm() == doctest::Approx(0.0));
  CHECK(c.fd_hessian(Vec(0.3, 0)).norm() == doctest::Approx(0.0));
  const AnalyticField xy(Domain::ball(Vec::Zero(), 1), 1e-3, [](const Vec& x) { return x(0) * x(1); });
  CHECK(std::abs(xy.fd_hessian(Vec::Zero())(0, 1) - 1.0) <= 1e-6);
}

TEST_CASE("one-sided stencils near the boundary stay in the closure") {
  const Domain I = Domain::interval(0, 1);
  const AnalyticField sq(I, 1e-3, [](const Vec& x) {
    if (x(0) < -1e-12 || x(0) > 1.0 + 1e-12) throw DomainError("left the closure");
    return x(0) * x(0);
  });
  CHECK(sq.fd_gradient(Vec(0.0, 0))(0) == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(sq.fd_gradient(Vec(1.0, 0))(0) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(sq.fd_hessian(Vec(1.0, 0))(0, 0) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("2D lattice interpolation is exact for bilinear functions") {
  const Domain D = Domain::ball(Vec::Zero(), 1);
  const GridField g = GridField::sample(D, 0.05, [](const Vec& x) { return 1.0 + 2.0 * x(0) - x(1) + 0.5 * x(0) * x(1); });
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 200; ++k) {
    const Vec x(u(rng), u(rng));
    // Cells cut by the boundary carry projected samples at their outside corners.
    if (!D.contains(x) || D.dist_to_boundary(x) < 0.08) continue;
    CHECK(g.eval(x) == doctest::Approx(1.0 + 2.0 * x(0) - x(1) + 0.5 * x(0) * x(1)).epsilon(1e-10));
  }
}

TEST_CASE("csv output has a header and one row per node") {
  const GridField g = GridField::sample(Domain::interval(0, 1), 0.25, [](const Vec& x) { return x(0); });
  std::ostringstream os;
  g.write_csv(os, "u", 3);
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  std::getline(is, line);
  CHECK(line == "x,u@t3");
  while (std::getline(is, line)) ++rows;
  CHECK(rows == static_cast<int>(g.size()));
}
