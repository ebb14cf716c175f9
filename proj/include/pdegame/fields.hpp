#pragma once

#include "pdegame/geometry.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace pdegame {

using ScalarFn = std::function<double(const Vec&)>;

/// Anything that can be evaluated on the closure of a domain. Derivatives
/// are finite differences with step fd_step(), one-sided near the boundary.
class Field {
 public:
  Field(Domain domain, double h_fd) : domain_(std::move(domain)), h_fd_(h_fd) {}
  virtual ~Field() = default;

  virtual double eval(const Vec& x) const = 0;

  const Domain& domain() const { return domain_; }
  double fd_step() const { return h_fd_; }

  Vec fd_gradient(const Vec& x) const { return fd_gradient(x, h_fd_); }
  Mat fd_hessian(const Vec& x) const { return fd_hessian(x, h_fd_); }
  /// Same stencils with an explicit step.
  Vec fd_gradient(const Vec& x, double h) const;
  Mat fd_hessian(const Vec& x, double h) const;
  /// Derivative along unit vector v; uses a one-sided stencil when x+v*h leaves
  /// the closure on one side.
  double fd_directional(const Vec& x, const Vec& v) const;

 private:
  double eval_clamped(const Vec& x) const;

  Domain domain_;
  double h_fd_;
};

/// Interpolation stencil: up to four (node, weight) pairs with nonnegative
/// weights summing to one.
struct Stencil {
  std::array<std::size_t, 4> idx{};
  std::array<double, 4> w{};
  int n = 0;
};

/// Node layout for sampled fields. In 1D the nodes are a + i*h plus the right
/// endpoint. In 2D the nodes are the square lattice points of the closure
/// plus, for cells straddling the boundary, the outside corners, which carry
/// the sample taken at their projection onto the boundary.
class Lattice {
 public:
  Lattice(const Domain& domain, double h);

  const Domain& domain() const { return domain_; }
  double spacing() const { return h_; }
  std::size_t size() const { return points_.size(); }
  /// Where the node is sampled (the projection for outside corners).
  const Vec& node(std::size_t i) const { return points_[i]; }
  bool projected(std::size_t i) const { return projected_[i] != 0; }

  Stencil stencil(const Vec& x) const;

  static double default_spacing(const Domain& domain, double eps, double alpha);

 private:
  Domain domain_;
  double h_;
  std::vector<Vec> points_;
  std::vector<char> projected_;
  // 2D lattice bookkeeping.
  Vec origin_ = Vec::Zero();
  int nx_ = 0, ny_ = 0;
  std::vector<long> id_;  // lattice slot -> node index or -1
};

/// Field sampled on a Lattice, evaluated by multilinear interpolation.
class GridField : public Field {
 public:
  explicit GridField(std::shared_ptr<const Lattice> lattice, double value = 0.0);
  GridField(std::shared_ptr<const Lattice> lattice, std::vector<double> values);

  static GridField sample(std::shared_ptr<const Lattice> lattice, const ScalarFn& fn);
  static GridField sample(const Domain& domain, double h, const ScalarFn& fn);

  double eval(const Vec& x) const override;

  const Lattice& lattice() const { return *lattice_; }
  const std::shared_ptr<const Lattice>& lattice_ptr() const { return lattice_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double sup_norm() const;

  /// CSV: one header line naming the field and time index, then coordinates and value.
  void write_csv(std::ostream& os, const std::string& name, long time_index) const;

 private:
  std::shared_ptr<const Lattice> lattice_;
  std::vector<double> values_;
};

/// Closed-form field, exact evaluation, finite-difference derivatives.
class AnalyticField : public Field {
 public:
  AnalyticField(Domain domain, double h_fd, ScalarFn fn) : Field(std::move(domain), h_fd), fn_(std::move(fn)) {}
  double eval(const Vec& x) const override;

 private:
  ScalarFn fn_;
};

}  // namespace pdegame
