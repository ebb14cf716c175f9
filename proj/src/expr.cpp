#include "pdegame/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pdegame {

struct Expr::Node {
  enum class Kind { number, var, neg, add, sub, mul, div, call } kind;
  double value = 0.0;
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}, double value = 0.0, std::string name = {}) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->args = std::move(args);
  n->value = value;
  n->name = std::move(name);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("expression '" + s_ + "' at " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) {
        lhs = make(Kind::add, {lhs, term()});
      } else if (eat('-')) {
        lhs = make(Kind::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) {
        lhs = make(Kind::mul, {lhs, unary()});
      } else if (eat('/')) {
        lhs = make(Kind::div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Kind::neg, {unary()});
    if (eat('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return make(Kind::number, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (eat('(')) {
        std::vector<NodePtr> args{expr()};
        while (eat(',')) args.push_back(expr());
        if (!eat(')')) fail("expected ')' after arguments of " + id);
        static const std::vector<std::string> unary_fns = {"abs", "sin", "cos", "tan", "exp", "sqrt", "log"};
        bool known = id == "min" || id == "max" || id == "norm";
        for (const auto& f : unary_fns) {
          if (id == f) {
            known = true;
            if (args.size() != 1) fail(id + " takes one argument");
          }
        }
        if (!known) fail("unknown function " + id);
        return make(Kind::call, std::move(args), 0.0, id);
      }
      if (id == "pi") return make(Kind::number, {}, std::numbers::pi);
      static const std::vector<std::string> vars = {"t", "x", "y", "z", "p", "p1", "p2", "g", "g11", "g12", "g22"};
      for (const auto& v : vars) {
        if (id == v) return make(Kind::var, {}, 0.0, id == "p" ? "p1" : id == "g" ? "g11" : id);
      }
      fail("unknown identifier " + id);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double var_value(const std::string& name, const ExprVars& v) {
  if (name == "t") return v.t;
  if (name == "x") return v.x;
  if (name == "y") return v.y;
  if (name == "z") return v.z;
  if (name == "p1") return v.p1;
  if (name == "p2") return v.p2;
  if (name == "g11") return v.g11;
  if (name == "g12") return v.g12;
  return v.g22;
}

double eval_node(const Expr::Node& n, const ExprVars& v) {
  switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::var: return var_value(n.name, v);
    case Kind::neg: return -eval_node(*n.args[0], v);
    case Kind::add: return eval_node(*n.args[0], v) + eval_node(*n.args[1], v);
    case Kind::sub: return eval_node(*n.args[0], v) - eval_node(*n.args[1], v);
    case Kind::mul: return eval_node(*n.args[0], v) * eval_node(*n.args[1], v);
    case Kind::div: return eval_node(*n.args[0], v) / eval_node(*n.args[1], v);
    case Kind::call: break;
  }
  const std::string& f = n.name;
  if (f == "min" || f == "max") {
    double acc = eval_node(*n.args[0], v);
    for (std::size_t i = 1; i < n.args.size(); ++i) {
      const double a = eval_node(*n.args[i], v);
      acc = f == "min" ? std::min(acc, a) : std::max(acc, a);
    }
    return acc;
  }
  if (f == "norm") {
    double s = 0.0;
    for (const auto& a : n.args) {
      const double x = eval_node(*a, v);
      s += x * x;
    }
    return std::sqrt(s);
  }
  const double a = eval_node(*n.args[0], v);
  if (f == "abs") return std::abs(a);
  if (f == "sin") return std::sin(a);
  if (f == "cos") return std::cos(a);
  if (f == "tan") return std::tan(a);
  if (f == "exp") return std::exp(a);
  if (f == "sqrt") return std::sqrt(a);
  return std::log(a);
}

bool node_uses(const Expr::Node& n, const std::string& var) {
  if (n.kind == Kind::var && n.name == var) return true;
  for (const auto& a : n.args) {
    if (node_uses(*a, var)) return true;
  }
  return false;
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

double Expr::eval(const ExprVars& v) const { return eval_node(*root_, v); }

bool Expr::uses(const std::string& var) const {
  const std::string canon = var == "p" ? "p1" : var == "g" ? "g11" : var;
  return node_uses(*root_, canon);
}

}  // namespace pdegame
