#include "pdegame/fields.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pdegame {

// ---------------------------------------------------------------------------
// Finite differences

double Field::eval_clamped(const Vec& x) const { return eval(domain_.contains(x) ? x : domain_.project_to_closure(x)); }

Vec Field::fd_gradient(const Vec& x, double h) const {
  Vec g = Vec::Zero();
  const double f0 = eval(x);
  for (int i = 0; i < domain_.dim(); ++i) {
    const Vec e = Vec::Unit(i) * h;
    const bool in_p = domain_.contains(x + e), in_m = domain_.contains(x - e);
    if (in_p && in_m) {
      g(i) = (eval(x + e) - eval(x - e)) / (2 * h);
    } else if (in_p && domain_.contains(x + 2 * e)) {
      g(i) = (-3 * f0 + 4 * eval(x + e) - eval(x + 2 * e)) / (2 * h);
    } else if (in_m && domain_.contains(x - 2 * e)) {
      g(i) = (3 * f0 - 4 * eval(x - e) + eval(x - 2 * e)) / (2 * h);
    } else {
      g(i) = (eval_clamped(x + e) - eval_clamped(x - e)) / (2 * h);
    }
  }
  return g;
}

Mat Field::fd_hessian(const Vec& x, double h) const {
  Mat H = Mat::Zero();
  const double f0 = eval(x);
  const int dim = domain_.dim();
  for (int i = 0; i < dim; ++i) {
    const Vec e = Vec::Unit(i) * h;
    const bool in_p = domain_.contains(x + e), in_m = domain_.contains(x - e);
    if (in_p && in_m) {
      H(i, i) = (eval(x + e) - 2 * f0 + eval(x - e)) / (h * h);
    } else if (in_p && domain_.contains(x + 3 * e)) {
      H(i, i) = (2 * f0 - 5 * eval(x + e) + 4 * eval(x + 2 * e) - eval(x + 3 * e)) / (h * h);
    } else if (in_m && domain_.contains(x - 3 * e)) {
      H(i, i) = (2 * f0 - 5 * eval(x - e) + 4 * eval(x - 2 * e) - eval(x - 3 * e)) / (h * h);
    } else {
      H(i, i) = (eval_clamped(x + e) - 2 * f0 + eval_clamped(x - e)) / (h * h);
    }
  }
  if (dim == 2) {
    const Vec e1 = Vec::UnitX() * h, e2 = Vec::UnitY() * h;
    auto in = [&](const Vec& y) { return domain_.contains(y); };
    double cross = 0.0;
    if (in(x + e1 + e2) && in(x + e1 - e2) && in(x - e1 + e2) && in(x - e1 - e2)) {
      cross = (eval(x + e1 + e2) - eval(x + e1 - e2) - eval(x - e1 + e2) + eval(x - e1 - e2)) / (4 * h * h);
    } else {
      bool done = false;
      for (int s1 : {1, -1}) {
        for (int s2 : {1, -1}) {
          if (done) break;
          const Vec a = s1 * e1, b = s2 * e2;
          if (in(x + a) && in(x + b) && in(x + a + b)) {
            // Exact for quadratics: f(a+b) - f(a) - f(b) + f(0) = f_12 * a_1 * b_2.
            cross = (eval(x + a + b) - eval(x + a) - eval(x + b) + f0) / (s1 * s2 * h * h);
            done = true;
          }
        }
      }
      if (!done) {
        cross = (eval_clamped(x + e1 + e2) - eval_clamped(x + e1 - e2) - eval_clamped(x - e1 + e2) +
                 eval_clamped(x - e1 - e2)) /
                (4 * h * h);
      }
    }
    H(0, 1) = H(1, 0) = cross;
  }
  return H;
}

double Field::fd_directional(const Vec& x, const Vec& v) const {
  const double h = h_fd_;
  const Vec e = v * h;
  const bool in_p = domain_.contains(x + e), in_m = domain_.contains(x - e);
  if (in_p && in_m) return (eval(x + e) - eval(x - e)) / (2 * h);
  const double f0 = eval(x);
  if (in_p && domain_.contains(x + 2 * e)) return (-3 * f0 + 4 * eval(x + e) - eval(x + 2 * e)) / (2 * h);
  if (in_m && domain_.contains(x - 2 * e)) return (3 * f0 - 4 * eval(x - e) + eval(x - 2 * e)) / (2 * h);
  return (eval_clamped(x + e) - eval_clamped(x - e)) / (2 * h);
}

// ---------------------------------------------------------------------------
// Lattice

double Lattice::default_spacing(const Domain& domain, double eps, double alpha) {
  if (domain.dim() == 1) return 0.5 * eps * eps;
  return std::pow(eps, 1.0 - alpha) / 8.0;
}

Lattice::Lattice(const Domain& domain, double h) : domain_(domain), h_(h) {
  if (!(h > 0)) throw std::invalid_argument("lattice spacing must be positive");
  if (domain.dim() == 1) {
    const double a = domain.a(), c = domain.c();
    const long n = static_cast<long>(std::floor((c - a) / h + 1e-9));
    for (long i = 0; i <= n; ++i) points_.emplace_back(std::min(a + i * h, c), 0.0);
    if (c - points_.back()(0) > 1e-9 * h) {
      points_.emplace_back(c, 0.0);
    } else {
      points_.back()(0) = c;
    }
    projected_.assign(points_.size(), 0);
    return;
  }
  origin_ = domain.box_lo() - Vec(h, h);
  const Vec span = domain.box_hi() - origin_;
  nx_ = static_cast<int>(std::ceil(span(0) / h)) + 2;
  ny_ = static_cast<int>(std::ceil(span(1) / h)) + 2;
  id_.assign(static_cast<std::size_t>(nx_) * ny_, -1);
  const double reach = std::sqrt(2.0) * h + domain.tolerance();
  if (reach >= 0.5 * domain.r_ext()) throw ProjectionError("lattice spacing too coarse for " + domain.describe());
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const Vec p = origin_ + Vec(i * h, j * h);
      const double sd = domain.signed_distance(p);
      if (sd >= -domain.tolerance()) {
        id_[static_cast<std::size_t>(j) * nx_ + i] = static_cast<long>(points_.size());
        points_.push_back(p);
        projected_.push_back(0);
      } else if (-sd <= reach) {
        id_[static_cast<std::size_t>(j) * nx_ + i] = static_cast<long>(points_.size());
        points_.push_back(domain.project_to_closure(p));
        projected_.push_back(1);
      }
    }
  }
}

Stencil Lattice::stencil(const Vec& x) const {
  Stencil s;
  if (!domain_.contains(x)) {
    throw DomainError("evaluation point " + format_point(x, domain_.dim()) + " outside " + domain_.describe());
  }
  if (domain_.dim() == 1) {
    const std::size_t n = points_.size();
    long i = static_cast<long>(std::floor((x(0) - domain_.a()) / h_));
    i = std::clamp<long>(i, 0, static_cast<long>(n) - 2);
    const double x0 = points_[i](0), x1 = points_[i + 1](0);
    const double t = std::clamp((x(0) - x0) / (x1 - x0), 0.0, 1.0);
    s.idx = {static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1), 0, 0};
    s.w = {1.0 - t, t, 0.0, 0.0};
    s.n = 2;
    return s;
  }
  const double fx = (x(0) - origin_(0)) / h_, fy = (x(1) - origin_(1)) / h_;
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nx_ - 2);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, ny_ - 2);
  const double tx = std::clamp(fx - i, 0.0, 1.0), ty = std::clamp(fy - j, 0.0, 1.0);
  const double w[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
  const int ci[4] = {i, i + 1, i, i + 1};
  const int cj[4] = {j, j, j + 1, j + 1};
  for (int k = 0; k < 4; ++k) {
    if (w[k] == 0.0) continue;
    const long id = id_[static_cast<std::size_t>(cj[k]) * nx_ + ci[k]];
    if (id < 0) throw DomainError("incomplete interpolation cell at " + format_point(x, 2));
    s.idx[s.n] = static_cast<std::size_t>(id);
    s.w[s.n] = w[k];
    ++s.n;
  }
  return s;
}

// ---------------------------------------------------------------------------
// GridField

GridField::GridField(std::shared_ptr<const Lattice> lattice, double value)
    : Field(lattice->domain(), lattice->spacing()), lattice_(std::move(lattice)), values_(lattice_->size(), value) {}

GridField::GridField(std::shared_ptr<const Lattice> lattice, std::vector<double> values)
    : Field(lattice->domain(), lattice->spacing()), lattice_(std::move(lattice)), values_(std::move(values)) {
  if (values_.size() != lattice_->size()) throw std::invalid_argument("value count does not match lattice");
}

GridField GridField::sample(std::shared_ptr<const Lattice> lattice, const ScalarFn& fn) {
  std::vector<double> v(lattice->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(lattice->node(i));
  return GridField(std::move(lattice), std::move(v));
}

GridField GridField::sample(const Domain& domain, double h, const ScalarFn& fn) {
  return sample(std::make_shared<const Lattice>(domain, h), fn);
}

double GridField::eval(const Vec& x) const {
  const Stencil s = lattice_->stencil(x);
  double v = 0.0;
  for (int k = 0; k < s.n; ++k) v += s.w[k] * values_[s.idx[k]];
  return v;
}

double GridField::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void GridField::write_csv(std::ostream& os, const std::string& name, long time_index) const {
  const int dim = lattice_->domain().dim();
  os << (dim == 1 ? "x," : "x,y,") << name << "@t" << time_index << "\n";
  os.precision(17);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const Vec& p = lattice_->node(i);
    os << p(0) << ",";
    if (dim == 2) os << p(1) << ",";
    os << values_[i] << "\n";
  }
}

double AnalyticField::eval(const Vec& x) const {
  if (!domain().contains(x)) {
    throw DomainError("evaluation point " + format_point(x, domain().dim()) + " outside " + domain().describe());
  }
  return fn_(x);
}

}  // namespace pdegame
