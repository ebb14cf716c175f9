#include "doctest.h"
#include "pdegame/geometry.hpp"

#include <cmath>
#include <random>

using namespace pdegame;

namespace {
Vec v1(double x) { return Vec(x, 0.0); }
}  // namespace

TEST_CASE("distance to the boundary") {
  CHECK(Domain::interval(0, 1).dist_to_boundary(v1(0.3)) == doctest::Approx(0.3));
  CHECK(Domain::ball(Vec::Zero(), 1).dist_to_boundary(Vec::Zero()) == doctest::Approx(1.0));
  CHECK(Domain::annulus(Vec::Zero(), 1, 2).dist_to_boundary(Vec(1.25, 0)) == doctest::Approx(0.25));
  CHECK_THROWS_AS(Domain::interval(0, 1).dist_to_boundary(v1(1.5)), DomainError);
}

TEST_CASE("projection onto the closure") {
  const Domain I = Domain::interval(0, 1);
  CHECK(I.project_to_closure(v1(1.2))(0) == doctest::Approx(1.0));
  CHECK(I.project_to_closure(v1(0.4))(0) == doctest::Approx(0.4));
  const Vec p = Domain::ball(Vec::Zero(), 1).project_to_closure(Vec(1.5, 0));
  CHECK(p(0) == doctest::Approx(1.0));
  CHECK(p(1) == doctest::Approx(0.0));
}

TEST_CASE("outward normals") {
  const Domain I = Domain::interval(0, 1);
  CHECK(I.outward_normal(v1(1))(0) == doctest::Approx(1.0));
  CHECK(I.outward_normal(v1(0))(0) == doctest::Approx(-1.0));
  const Vec n = Domain::ball(Vec::Zero(), 1).outward_normal(Vec(0, 1));
  CHECK(n(0) == doctest::Approx(0.0));
  CHECK(n(1) == doctest::Approx(1.0));
  CHECK_THROWS(I.outward_normal(v1(0.5)));
  const Vec ni = Domain::annulus(Vec::Zero(), 1, 2).outward_normal(Vec(1, 0));
  CHECK(ni(0) == doctest::Approx(-1.0));
}

TEST_CASE("make_move") {
  const Domain I = Domain::interval(0, 1);
  Move m = I.make_move(v1(0.95), v1(0.1));
  CHECK(m.landing(0) == doctest::Approx(1.0));
  CHECK(m.penal_weight == doctest::Approx(0.05));
  CHECK(m.crossed);
  m = I.make_move(v1(0.5), v1(0.1));
  CHECK(m.landing(0) == doctest::Approx(0.6));
  CHECK(m.penal_weight == 0.0);
  CHECK_FALSE(m.crossed);
  m = Domain::ball(Vec::Zero(), 1).make_move(Vec(0.95, 0), Vec(0.1, 0));
  CHECK(m.landing(0) == doctest::Approx(1.0));
  CHECK(m.landing(1) == doctest::Approx(0.0));
  CHECK(m.penal_weight == doctest::Approx(0.05));
}

TEST_CASE("domain spec parsing") {
  CHECK(Domain::parse("interval:0,2").diameter() == doctest::Approx(2.0));
  CHECK(Domain::parse("ball:0,0,1").kind() == DomainKind::ball);
  CHECK(Domain::parse("annulus:0,0,1,2").inner_radius() == doctest::Approx(1.0));
  CHECK_THROWS(Domain::parse("square:0,1"));
  CHECK_THROWS(Domain::parse("interval:1,0"));
}

TEST_CASE("projection is idempotent and lands in the closure") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const Domain& D : {Domain::interval(0, 1), Domain::ball(Vec::Zero(), 1), Domain::annulus(Vec::Zero(), 1, 2)}) {
    for (int k = 0; k < 500; ++k) {
      Vec y(u(rng), D.dim() == 2 ? u(rng) : 0.0);
      if (D.signed_distance(y) <= -0.5 * D.r_ext()) {
        CHECK_THROWS_AS(D.project_to_closure(y), ProjectionError);
        continue;
      }
      const Vec p = D.project_to_closure(y);
      CHECK(D.contains(p));
      CHECK((D.project_to_closure(p) - p).norm() < 1e-12);
      // The realized step never exceeds the requested one.
      if (D.contains(y)) CHECK((p - y).norm() < 1e-12);
    }
  }
}

TEST_CASE("moves from the closure stay in the closure and weight the overshoot") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Domain D = Domain::ball(Vec::Zero(), 1);
  for (int k = 0; k < 500; ++k) {
    Vec x(u(rng), u(rng));
    if (!D.contains(x)) continue;
    const Vec dh = 0.2 * Vec(u(rng), u(rng));
    const Move m = D.make_move(x, dh);
    CHECK(D.contains(m.landing));
    CHECK(m.penal_weight >= 0.0);
    CHECK(m.penal_weight <= dh.norm() + 1e-12);
    CHECK(m.crossed == (m.penal_weight > 0.0));
  }
}
