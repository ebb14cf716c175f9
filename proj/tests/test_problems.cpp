#include "doctest.h"
#include "pdegame/expr.hpp"
#include "pdegame/problems.hpp"

#include <cmath>

using namespace pdegame;

TEST_CASE("catalog lookup") {
  CHECK(catalog_names().size() == 6);
  for (const auto& name : catalog_names()) CHECK(catalog_lookup(name).name == name);
  CHECK_THROWS_AS(catalog_lookup("nope"), std::invalid_argument);
  const CatalogProblem h = catalog_lookup("heat1d_homogeneous");
  REQUIRE(h.parabolic);
  CHECK(h.exact(Vec(0.3, 0), 0.5) == 5.0);
  CHECK(h.parabolic->g(Vec(0.7, 0)) == 5.0);
}

TEST_CASE("catalog problems are degenerate elliptic") {
  for (const auto& name : catalog_names()) {
    const CatalogProblem cp = catalog_lookup(name);
    if (cp.parabolic) CHECK(check_ellipticity(*cp.parabolic, 1000, 1).ok);
    if (cp.elliptic) CHECK(check_ellipticity(*cp.elliptic, 1000, 1).ok);
  }
}

TEST_CASE("elliptic catalog entries satisfy the growth bound with their eta") {
  for (const auto& name : catalog_names()) {
    const CatalogProblem cp = catalog_lookup(name);
    if (cp.elliptic) CHECK(check_eta_bound(*cp.elliptic, 10.0, 1000, 1).ok);
  }
}

TEST_CASE("Neumann data is defined on the boundary only") {
  const CatalogProblem cp = catalog_lookup("heat1d_linear_profile");
  CHECK(cp.parabolic->h(Vec(0, 0)) == -1.0);
  CHECK(cp.parabolic->h(Vec(1, 0)) == 1.0);
  CHECK_THROWS(cp.parabolic->h(Vec(0.5, 0)));
}

TEST_CASE("expressions") {
  ExprVars v;
  v.x = 2.0;
  v.g11 = 3.0;
  CHECK(Expr::parse("-g11 + x*x").eval(v) == doctest::Approx(1.0));
  CHECK(Expr::parse("exp(0)*sin(0) + abs(-2)").eval(v) == doctest::Approx(2.0));
  // g and p are shorthands for g11 and p1.
  CHECK(Expr::parse("g").uses("g11"));
  CHECK(Expr::parse("-g").eval(v) == doctest::Approx(-3.0));
  CHECK_FALSE(Expr::parse("g11").uses("z"));
  CHECK_THROWS(Expr::parse("x +"));
  CHECK_THROWS(Expr::parse("cosh(x)"));
}

TEST_CASE("custom problems from expressions") {
  const ParabolicProblem pb = custom_parabolic(Domain::interval(0, 1), "-g11 + z", "x", "2*x-1", 1.0, 1, 1);
  Mat G = Mat::Zero();
  G(0, 0) = 2.0;
  CHECK(pb.f(0.0, Vec(0.5, 0), 1.5, Vec::Zero(), G) == doctest::Approx(-0.5));
  CHECK(pb.z_dependent);
  CHECK(pb.h(Vec(0, 0)) == doctest::Approx(-1.0));
  CHECK(pb.g_sup == doctest::Approx(1.0).epsilon(1e-2));
  const EllipticProblem eb = custom_elliptic(Domain::interval(0, 1), "-g11", "0", 1.0, 1.0, 1, 1);
  CHECK_FALSE(eb.z_dependent);
}
