#include "pdegame/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace pdegame {

double op_norm(const Mat& m) {
  // Symmetric 2x2: eigenvalues are tr/2 +- sqrt((a-d)^2/4 + b^2).
  const double half_tr = 0.5 * (m(0, 0) + m(1, 1));
  const double rad = std::hypot(0.5 * (m(0, 0) - m(1, 1)), m(0, 1));
  return std::abs(half_tr) + rad;
}

std::string format_point(const Vec& x, int dim) {
  std::ostringstream os;
  os.precision(17);
  if (dim == 1) {
    os << x(0);
  } else {
    os << "(" << x(0) << "," << x(1) << ")";
  }
  return os.str();
}

Domain Domain::interval(double a, double c) {
  if (!(c > a)) throw std::invalid_argument("interval needs a < c");
  Domain d;
  d.kind_ = DomainKind::interval;
  d.a_ = a;
  d.c_ = c;
  return d;
}

Domain Domain::ball(const Vec& center, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("ball needs a positive radius");
  Domain d;
  d.kind_ = DomainKind::ball;
  d.center_ = center;
  d.r_out_ = radius;
  return d;
}

Domain Domain::annulus(const Vec& center, double r_in, double r_out) {
  if (!(r_in > 0 && r_out > r_in)) throw std::invalid_argument("annulus needs 0 < r_in < R_out");
  Domain d;
  d.kind_ = DomainKind::annulus;
  d.center_ = center;
  d.r_in_ = r_in;
  d.r_out_ = r_out;
  return d;
}

Domain Domain::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("domain spec needs kind:params, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  std::vector<double> nums;
  std::stringstream ss(spec.substr(colon + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) nums.push_back(std::stod(tok));
  if (kind == "interval" && nums.size() == 2) return interval(nums[0], nums[1]);
  if ((kind == "ball" || kind == "disk") && nums.size() == 3) return ball(Vec(nums[0], nums[1]), nums[2]);
  if (kind == "annulus" && nums.size() == 4) return annulus(Vec(nums[0], nums[1]), nums[2], nums[3]);
  throw std::invalid_argument("bad domain spec '" + spec + "'");
}

double Domain::r_int() const {
  switch (kind_) {
    case DomainKind::interval: return 0.5 * (c_ - a_);
    case DomainKind::ball: return r_out_;
    case DomainKind::annulus: return std::min(r_in_, 0.5 * (r_out_ - r_in_));
  }
  return 0.0;
}

double Domain::r_ext() const {
  if (kind_ == DomainKind::annulus) return r_in_;
  return std::numeric_limits<double>::infinity();
}

double Domain::diameter() const {
  if (kind_ == DomainKind::interval) return c_ - a_;
  return 2.0 * r_out_;
}

Vec Domain::box_lo() const {
  if (kind_ == DomainKind::interval) return Vec(a_, 0.0);
  return center_ - Vec(r_out_, r_out_);
}

Vec Domain::box_hi() const {
  if (kind_ == DomainKind::interval) return Vec(c_, 0.0);
  return center_ + Vec(r_out_, r_out_);
}

Vec Domain::radial(const Vec& x) const {
  const Vec v = x - center_;
  const double n = v.norm();
  if (n == 0.0) return Vec(1.0, 0.0);
  return v / n;
}

double Domain::signed_distance(const Vec& x) const {
  switch (kind_) {
    case DomainKind::interval: return std::min(x(0) - a_, c_ - x(0));
    case DomainKind::ball: return r_out_ - (x - center_).norm();
    case DomainKind::annulus: {
      const double r = (x - center_).norm();
      return std::min(r - r_in_, r_out_ - r);
    }
  }
  return 0.0;
}

bool Domain::on_boundary(const Vec& x) const { return std::abs(signed_distance(x)) <= tolerance(); }

double Domain::dist_to_boundary(const Vec& x) const {
  const double sd = signed_distance(x);
  if (sd < -tolerance()) {
    throw DomainError("point " + format_point(x, dim()) + " lies outside " + describe());
  }
  return std::max(sd, 0.0);
}

Vec Domain::project_to_closure(const Vec& x_hat) const {
  const double sd = signed_distance(x_hat);
  if (sd >= -tolerance()) return x_hat;
  if (-sd >= 0.5 * r_ext()) {
    throw ProjectionError("projection undefined: " + format_point(x_hat, dim()) + " is " + std::to_string(-sd) +
                          " from the closure of " + describe());
  }
  switch (kind_) {
    case DomainKind::interval: return Vec(std::clamp(x_hat(0), a_, c_), 0.0);
    case DomainKind::ball: return center_ + r_out_ * radial(x_hat);
    case DomainKind::annulus: {
      const double r = (x_hat - center_).norm();
      const double target = r < r_in_ ? r_in_ : r_out_;
      return center_ + target * radial(x_hat);
    }
  }
  return x_hat;
}

Vec Domain::boundary_projection(const Vec& x) const {
  switch (kind_) {
    case DomainKind::interval: return Vec((x(0) - a_ <= c_ - x(0)) ? a_ : c_, 0.0);
    case DomainKind::ball: return center_ + r_out_ * radial(x);
    case DomainKind::annulus: {
      const double r = (x - center_).norm();
      const double target = (r - r_in_ <= r_out_ - r) ? r_in_ : r_out_;
      return center_ + target * radial(x);
    }
  }
  return x;
}

Vec Domain::normal_at_projection(const Vec& x) const {
  switch (kind_) {
    case DomainKind::interval: return Vec((x(0) - a_ <= c_ - x(0)) ? -1.0 : 1.0, 0.0);
    case DomainKind::ball: return radial(x);
    case DomainKind::annulus: {
      const double r = (x - center_).norm();
      return (r - r_in_ <= r_out_ - r) ? Vec(-radial(x)) : radial(x);
    }
  }
  return Vec::Zero();
}

Vec Domain::outward_normal(const Vec& x_b) const {
  // A little slack beyond the membership tolerance: landings come out of a
  // projection and carry a few ulps of noise.
  if (std::abs(signed_distance(x_b)) > 1e3 * tolerance()) {
    throw DomainError("outward_normal: " + format_point(x_b, dim()) + " is not on the boundary of " + describe());
  }
  return normal_at_projection(x_b);
}

Move Domain::make_move(const Vec& x, const Vec& delta_hat) const {
  Move m;
  m.delta_hat = delta_hat;
  const Vec x_hat = x + delta_hat;
  if (signed_distance(x_hat) >= -tolerance()) {
    m.landing = x_hat;
  } else {
    m.landing = project_to_closure(x_hat);
    m.penal_weight = (x_hat - m.landing).norm();
    m.crossed = m.penal_weight > 0.0;
  }
  m.delta = m.landing - x;
  return m;
}

std::string Domain::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DomainKind::interval: os << "interval[" << a_ << "," << c_ << "]"; break;
    case DomainKind::ball: os << "ball(c=(" << center_(0) << "," << center_(1) << "),R=" << r_out_ << ")"; break;
    case DomainKind::annulus:
      os << "annulus(c=(" << center_(0) << "," << center_(1) << "),r=" << r_in_ << ",R=" << r_out_ << ")";
      break;
  }
  return os.str();
}

}  // namespace pdegame
