#include "doctest.h"
#include "pdegame/strategies.hpp"

#include <algorithm>
#include <cmath>

using namespace pdegame;

namespace {

GameParams params_for_radius(double s) {
  // eps^(3/4) = s for the (1, 1) exponents.
  return GameParams::from(std::pow(s, 4.0 / 3.0), select_exponents(1, 1));
}

BoundaryData interval_data(double at0, double at1) {
  const Domain I = Domain::interval(0, 1);
  return BoundaryData(I, [=](const Vec& x) { return x(0) < 0.5 ? at0 : at1; }, std::max(std::abs(at0), std::abs(at1)));
}

bool has_move(const std::vector<Move>& moves, double dx) {
  return std::any_of(moves.begin(), moves.end(), [&](const Move& m) { return std::abs(m.delta_hat(0) - dx) < 1e-12; });
}

}  // namespace

TEST_CASE("Neumann bounds at a single endpoint") {
  const Domain I = Domain::interval(0, 1);
  const GameParams p = params_for_radius(0.1);
  const AnalyticField phi(I, 1e-4, [](const Vec& x) { return x(0); });
  const NeumannBounds b = neumann_bounds(I, Vec(0.95, 0), phi, interval_data(0.0, 2.0), p);
  CHECK(b.crossing_possible);
  CHECK(b.m_lo == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b.m_hi == doctest::Approx(1.0).epsilon(1e-6));
  const AnalyticField c(I, 1e-4, [](const Vec&) { return 3.0; });
  const NeumannBounds z = neumann_bounds(I, Vec(0.95, 0), c, interval_data(0.0, 0.0), p);
  CHECK(z.m_lo == doctest::Approx(0.0));
  CHECK(z.m_hi == doctest::Approx(0.0));
}

TEST_CASE("Neumann bounds on the disk") {
  const Domain D = Domain::ball(Vec::Zero(), 1);
  const GameParams p = params_for_radius(0.1);
  const AnalyticField phi(D, 1e-4, [](const Vec& x) { return x(0); });
  const BoundaryData h(D, [](const Vec&) { return 0.0; }, 0.0);
  const NeumannBounds b = neumann_bounds(D, Vec(0.95, 0), phi, h, p);
  CHECK(b.crossing_possible);
  CHECK(b.m_hi <= -0.99);
  CHECK(b.m_lo <= b.m_hi);
}

TEST_CASE("optimal gradient and Hessian") {
  const Domain I = Domain::interval(0, 1);
  const GameParams p = params_for_radius(0.1);
  LocalJet jet;
  jet.grad = Vec(0.7, 0);
  jet.hess(0, 0) = 3.0;
  NeumannBounds b;
  b.m_lo = -0.4;
  b.m_hi = 0.6;
  b.crossing_possible = true;

  const BoundaryFrame far = boundary_frame(I, Vec(0.9, 0));  // d = s
  CHECK(p_opt_upper(jet, b, far, p)(0) == doctest::Approx(0.7));
  CHECK(gamma_opt(jet, far, p)(0, 0) == doctest::Approx(3.0));

  const BoundaryFrame edge = boundary_frame(I, Vec(1.0, 0));  // d = 0, n = +1
  LocalJet flat = jet;
  flat.hess.setZero();
  CHECK(p_opt_upper(flat, b, edge, p)(0) == doctest::Approx(0.7 + 0.3));
  CHECK(p_opt_lower(flat, b, edge, p)(0) == doctest::Approx(0.7 - 0.2));
  CHECK(gamma_opt(jet, edge, p)(0, 0) == doctest::Approx(1.5));
  CHECK(gamma_opt(flat, edge, p)(0, 0) == doctest::Approx(0.0));

  NeumannBounds zero;
  zero.crossing_possible = true;
  CHECK(p_opt_lower(flat, zero, edge, p)(0) == doctest::Approx(0.7));
}

TEST_CASE("candidate sets in 1D") {
  const Domain I = Domain::interval(0, 1);
  const GameParams p = params_for_radius(0.1);
  const AnalyticField phi(I, 1e-4, [](const Vec& x) { return x(0) * x(0); });
  const BoundaryData h = interval_data(0.0, 2.0);

  const LocalGame inner = build_local_game(I, Vec(0.5, 0), phi, h, p);
  REQUIRE(inner.strategies.size() == 1);
  CHECK(inner.strategies[0].p(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(inner.strategies[0].Gamma(0, 0) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(inner.moves.size() == 3);
  CHECK(has_move(inner.moves, 0.0));
  CHECK(has_move(inner.moves, 0.1));
  CHECK(has_move(inner.moves, -0.1));

  const LocalGame layer = build_local_game(I, Vec(0.96, 0), phi, h, p);
  const Vec lo = p_opt_lower(layer.jet, layer.bounds, layer.frame, p);
  const Vec hi = p_opt_upper(layer.jet, layer.bounds, layer.frame, p);
  auto has_p = [&](const Vec& q) {
    return std::any_of(layer.strategies.begin(), layer.strategies.end(),
                       [&](const Strategy& s) { return (s.p - q).norm() < 1e-12; });
  };
  CHECK(has_p(lo));
  CHECK(has_p(hi));
  CHECK(has_move(layer.moves, 0.04));
  CHECK(has_move(layer.moves, 0.1));
  for (std::size_t m = 0; m < layer.moves.size(); ++m) {
    if (layer.moves[m].crossed) CHECK(layer.coupon[m] == doctest::Approx(layer.moves[m].penal_weight * 2.0));
  }
}

TEST_CASE("disk candidate moves include the normal moves and a grazing move") {
  const Domain D = Domain::ball(Vec::Zero(), 1);
  const GameParams p = params_for_radius(0.1);
  const AnalyticField phi(D, 1e-4, [](const Vec& x) { return x(0) * x(1); });
  const BoundaryData h(D, [](const Vec&) { return 0.0; }, 0.0);
  const LocalGame g = build_local_game(D, Vec(0.95, 0), phi, h, p);
  auto has = [&](const Vec& v) {
    return std::any_of(g.moves.begin(), g.moves.end(), [&](const Move& m) { return (m.delta_hat - v).norm() < 1e-9; });
  };
  CHECK(has(Vec(0.1, 0)));
  CHECK(has(Vec(-0.1, 0)));
  // A move of full length that ends exactly on the circle.
  CHECK(std::any_of(g.moves.begin(), g.moves.end(), [&](const Move& m) {
    return std::abs(m.delta_hat.norm() - 0.1) < 1e-9 && std::abs((Vec(0.95, 0) + m.delta_hat).norm() - 1.0) < 1e-6;
  }));
}

TEST_CASE("strategies are clipped onto the norm caps") {
  const GameParams p = params_for_radius(0.1);
  Strategy s{Vec(1e6, 0), Mat::Identity() * 1e6};
  s = clip_strategy(s, p);
  CHECK(s.p.norm() == doctest::Approx(p.p_cap()));
  CHECK(op_norm(s.Gamma) == doctest::Approx(p.gamma_cap()));
}

TEST_CASE("landing jet is exact for affine data with matching Neumann values") {
  const Domain I = Domain::interval(0, 1);
  const AnalyticField phi(I, 1e-4, [](const Vec& x) { return 2.0 * x(0) - 1.0; });
  const LocalJet j = landing_jet(phi, interval_data(-2.0, 2.0), Vec(0.02, 0), 0.1);
  CHECK(j.grad(0) == doctest::Approx(2.0));
  CHECK(j.hess(0, 0) == doctest::Approx(0.0).scale(1.0));
}
