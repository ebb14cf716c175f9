#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace pdegame {

/// Points and vectors are stored in R^2; one-dimensional problems use the
/// first component only and keep the second at zero.
using Vec = Eigen::Vector2d;
using Mat = Eigen::Matrix2d;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a solver produces a non-finite value or leaves its grid.
class NumericAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operator (spectral) norm of a symmetric 2x2 matrix.
double op_norm(const Mat& m);

std::string format_point(const Vec& x, int dim);

}  // namespace pdegame
