#pragma once

#include "pdegame/types.hpp"

#include <string>

namespace pdegame {

enum class DomainKind { interval, ball, annulus };

/// One step of Mark's move: the requested displacement, the displacement
/// actually realized after projecting back onto the closure, and the
/// overshoot length that weights the Neumann coupon.
struct Move {
  Vec delta_hat = Vec::Zero();
  Vec delta = Vec::Zero();
  bool crossed = false;
  double penal_weight = 0.0;
  Vec landing = Vec::Zero();
};

/// Analytic bounded domain with closed-form distance, projection and normal.
///
/// Intervals live in the first coordinate. Balls and annuli are planar.
class Domain {
 public:
  static Domain interval(double a, double c);
  static Domain ball(const Vec& center, double radius);
  static Domain annulus(const Vec& center, double r_in, double r_out);

  /// Parses "interval:a,c", "ball:cx,cy,R" or "annulus:cx,cy,r_in,R_out".
  static Domain parse(const std::string& spec);

  DomainKind kind() const { return kind_; }
  int dim() const { return kind_ == DomainKind::interval ? 1 : 2; }

  double r_int() const;
  /// Exterior-ball radius; infinite for convex domains.
  double r_ext() const;
  double diameter() const;
  double tolerance() const { return 1e-12 * diameter(); }
  Vec box_lo() const;
  Vec box_hi() const;

  /// Positive inside, zero on the boundary, negative outside.
  double signed_distance(const Vec& x) const;
  bool contains(const Vec& x) const { return signed_distance(x) >= -tolerance(); }
  bool on_boundary(const Vec& x) const;

  /// Distance to the boundary for a point of the closure.
  double dist_to_boundary(const Vec& x) const;
  Vec project_to_closure(const Vec& x_hat) const;
  /// Nearest boundary point of a point in the closure (the x-bar of the layer).
  Vec boundary_projection(const Vec& x) const;
  Vec outward_normal(const Vec& x_b) const;
  /// Outward normal at boundary_projection(x); no boundary check on x.
  Vec normal_at_projection(const Vec& x) const;

  Move make_move(const Vec& x, const Vec& delta_hat) const;

  std::string describe() const;

  double a() const { return a_; }
  double c() const { return c_; }
  const Vec& center() const { return center_; }
  double radius() const { return r_out_; }
  double inner_radius() const { return r_in_; }

 private:
  Domain() = default;
  // Unit radial direction from the center; fixed direction at the center.
  Vec radial(const Vec& x) const;

  DomainKind kind_ = DomainKind::interval;
  double a_ = 0.0, c_ = 1.0;
  Vec center_ = Vec::Zero();
  double r_in_ = 0.0, r_out_ = 1.0;
};

}  // namespace pdegame
