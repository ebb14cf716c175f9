#include "doctest.h"
#include "pdegame/consistency.hpp"

#include <cmath>
#include <set>

using namespace pdegame;

namespace {

GameParams params_at(double eps) { return GameParams::from(eps, select_exponents(1, 1)); }

ParabolicProblem flat_problem() { return custom_parabolic(Domain::interval(0, 1), "0", "0", "0", 1.0, 1, 1); }

}  // namespace

TEST_CASE("classify_case thresholds") {
  const GameParams p = params_at(0.01);
  const double s = p.move_radius();
  CHECK(classify_case(s, 0.0, 1.0, p) == UpperCase::far_small_bonus);
  CHECK(classify_case(2.0 * s, 5.0, 1.0, p) == UpperCase::far_small_bonus);
  REQUIRE(-1.0 <= -std::pow(p.eps, 1.0 - p.alpha - p.kappa));
  CHECK(classify_case(0.0, -1.0, 1.0, p) == UpperCase::close_big_penalty);
  CHECK(classify_case(0.0, 1.0, 1.0, p) == UpperCase::big_bonus);
  CHECK(classify_case(0.0, 0.0, 1.0, p) == UpperCase::close_small);
  // Inside the band s - eps^rho <= d < s with a small bonus.
  CHECK(classify_case(s - 0.5 * std::pow(p.eps, p.rho), 0.0, 1.0, p) == UpperCase::far_small_bonus);
}

TEST_CASE("classify_lower thresholds") {
  const GameParams p = params_at(0.05);
  const double s = p.move_radius();
  CHECK(classify_lower(s, -3.0, 1.0, p) == LowerCase::big_bonus);
  CHECK(classify_lower(0.0, 1.6 * s, 1.0, p) == LowerCase::big_bonus);
  CHECK(classify_lower(0.0, 1.4 * s, 1.0, p) == LowerCase::penalty_small_bonus);
  CHECK(classify_lower(0.0, -1.0, 1.0, p) == LowerCase::penalty_small_bonus);
}

TEST_CASE("constant phi with zero data gives zero on both sides") {
  const ParabolicProblem pb = flat_problem();
  const AnalyticField c(pb.domain, 1e-4, [](const Vec&) { return 2.5; });
  const GameParams p = params_at(0.1);
  for (double x : {0.0, 0.01, 0.1, 0.5, 1.0}) {
    const ConsistencyRow up = audit_upper(Vec(x, 0), 0.5, 0.0, c, pb, p, kConsistencySlack);
    const ConsistencyRow lo = audit_lower(Vec(x, 0), 0.5, 0.0, c, pb, p, kConsistencySlack);
    CHECK(std::abs(up.lhs) < 1e-12);
    CHECK(std::abs(lo.lhs) < 1e-12);
    CHECK(up.pass);
    CHECK(lo.pass);
  }
}

TEST_CASE("the built-in suite covers every label and passes") {
  const auto rows = consistency_suite({0.1, 0.05}, kConsistencySlack);
  std::set<std::string> labels;
  for (const auto& r : rows) {
    labels.insert(r.side + ":" + r.kase);
    CHECK_MESSAGE(r.pass, r.side << " " << r.kase << " " << r.function << " eps=" << r.eps << " lhs=" << r.lhs
                                  << " rhs=" << r.rhs);
  }
  for (UpperCase c : {UpperCase::big_bonus, UpperCase::far_small_bonus, UpperCase::close_small,
                      UpperCase::close_big_penalty}) {
    CHECK(labels.count("upper:" + label(c)) == 1);
  }
  for (LowerCase c : {LowerCase::big_bonus, LowerCase::penalty_small_bonus}) CHECK(labels.count("lower:" + label(c)) == 1);
}

TEST_CASE("geometry audit finds no violations") {
  for (const Domain& D : {Domain::interval(0, 1), Domain::ball(Vec::Zero(), 1), Domain::annulus(Vec::Zero(), 1, 2)}) {
    const GeometryAudit a = audit_geometry(D, params_at(0.1), 2000, 5);
    CHECK(a.moves == 2000);
    CHECK(a.eq11_violations == 0);
    CHECK(a.key_bound_violations == 0);
  }
}

TEST_CASE("psi corollary constants stay bounded along a ladder") {
  const ParabolicProblem pb = custom_parabolic(Domain::interval(0, 1), "-g", "0", "1", 1.0, 1, 1);
  const PsiCorollary a = audit_psi_corollary(pb, params_at(0.1), 50, 0.5, 3);
  const PsiCorollary b = audit_psi_corollary(pb, params_at(0.05), 50, 0.5, 3);
  CHECK(a.points == 50);
  CHECK(std::isfinite(a.c_upper));
  CHECK(std::isfinite(b.c_upper));
  CHECK(b.c_upper <= 2.0 * std::max(a.c_upper, 1.0));
  CHECK(b.c_lower <= 2.0 * std::max(a.c_lower, 1.0));
}

TEST_CASE("csv report has the documented columns") {
  const auto rows = consistency_suite({0.1}, kConsistencySlack);
  std::ostringstream os;
  write_consistency_csv(os, rows);
  const std::string text = os.str();
  const std::string header = text.substr(0, text.find('\n'));
  for (const char* col : {"domain", "eps", "case", "lhs", "rhs", "residual", "pass"}) {
    CHECK(header.find(col) != std::string::npos);
  }
}
