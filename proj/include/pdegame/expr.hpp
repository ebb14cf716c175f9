#pragma once

#include <array>
#include <memory>
#include <string>

namespace pdegame {

/// Variables visible to configuration expressions.
struct ExprVars {
  double t = 0.0;
  double x = 0.0, y = 0.0;
  double z = 0.0;
  double p1 = 0.0, p2 = 0.0;
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
};

/// Small arithmetic language for custom problems.
///
/// Grammar: numbers, the variables t x y z p p1 p2 g g11 g12 g22 (p = p1,
/// g = g11), the constant pi, binary + - * /, unary minus, parentheses, and
/// calls min max abs sin cos tan exp sqrt log norm. min, max and norm take
/// one or more arguments.
class Expr {
 public:
  static Expr parse(const std::string& text);

  double eval(const ExprVars& v) const;
  const std::string& text() const { return text_; }
  /// True when the variable occurs anywhere in the expression.
  bool uses(const std::string& var) const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace pdegame
