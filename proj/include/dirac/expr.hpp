#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dirac/types.hpp"

namespace dirac {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset,
                         const std::vector<std::string>& declared);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& message, std::string subexpression);
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

struct ExprNode {
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Power, Sin, Cos, Exp, Sqrt };
  Kind kind = Kind::Number;
  double number = 0.0;
  int index = 0;
  int exponent = 0;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

std::string to_string(const ExprNode& node, const std::vector<std::string>& variables);

template <class T>
T eval_node(const ExprNode& n, const VecX<T>& x, const std::vector<std::string>& names);

class Expr {
 public:
  Expr();
  Expr(std::shared_ptr<const ExprNode> root, std::vector<std::string> variables);

  static Expr constant(double value, std::vector<std::string> variables = {});

  const ExprNode& root() const { return *root_; }
  const std::vector<std::string>& variables() const { return variables_; }
  int arity() const { return static_cast<int>(variables_.size()); }
  std::string str() const { return to_string(*root_, variables_); }

  template <class T>
  T eval(const VecX<T>& x) const {
    if (x.size() != arity())
      throw std::invalid_argument("expression expects " + std::to_string(arity()) +
                                  " coordinates, got " + std::to_string(x.size()));
    return eval_node(*root_, x, variables_);
  }

 private:
  std::shared_ptr<const ExprNode> root_;
  std::vector<std::string> variables_;
};

std::vector<std::string> default_variables(int n);

Expr parse(std::string_view src, const std::vector<std::string>& variables);
bool structurally_equal(const Expr& a, const Expr& b);
int node_count(const Expr& e);

// Value and one partial per direction; at most kJetCapacity directions.
J1 eval_jet(const Expr& e, const Vec& point, const std::vector<Vec>& directions);

template <class T>
T int_power(const T& base, int n) {
  T result(1.0);
  T b = base;
  int m = n < 0 ? -n : n;
  while (m > 0) {
    if (m & 1) result = result * b;
    m >>= 1;
    if (m > 0) b = b * b;
  }
  return result;
}

template <class T>
T eval_node(const ExprNode& n, const VecX<T>& x, const std::vector<std::string>& names) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Number:
      return T(n.number);
    case K::Variable:
      return x[n.index];
    case K::Negate:
      return -eval_node(*n.lhs, x, names);
    case K::Add:
      return eval_node(*n.lhs, x, names) + eval_node(*n.rhs, x, names);
    case K::Sub:
      return eval_node(*n.lhs, x, names) - eval_node(*n.rhs, x, names);
    case K::Mul:
      return eval_node(*n.lhs, x, names) * eval_node(*n.rhs, x, names);
    case K::Div: {
      T num = eval_node(*n.lhs, x, names);
      T den = eval_node(*n.rhs, x, names);
      if (value_of(den) == 0.0)
        throw DomainError("division by zero", to_string(*n.rhs, names));
      return num / den;
    }
    case K::Power: {
      T base = eval_node(*n.lhs, x, names);
      if (n.exponent < 0) {
        if (value_of(base) == 0.0)
          throw DomainError("division by zero", to_string(*n.lhs, names));
        return T(1.0) / int_power(base, n.exponent);
      }
      return int_power(base, n.exponent);
    }
    case K::Sin:
      return sin(eval_node(*n.lhs, x, names));
    case K::Cos:
      return cos(eval_node(*n.lhs, x, names));
    case K::Exp:
      return exp(eval_node(*n.lhs, x, names));
    case K::Sqrt: {
      T a = eval_node(*n.lhs, x, names);
      if (value_of(a) < 0.0)
        throw DomainError("square root of a negative value", to_string(*n.lhs, names));
      return sqrt(a);
    }
  }
  return T(0.0);
}

}  // namespace dirac
