#include "dirac/expr.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace dirac {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

namespace {
std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}
}  // namespace

UnknownIdentifierError::UnknownIdentifierError(const std::string& name, std::size_t offset,
                                               const std::vector<std::string>& declared)
    : ParseError("unknown identifier '" + name + "' (declared: " + join_names(declared) + ")",
                 offset),
      name_(name) {}

DomainError::DomainError(const std::string& message, std::string subexpression)
    : std::runtime_error(message + " in '" + subexpression + "'"),
      subexpression_(std::move(subexpression)) {}

std::vector<std::string> default_variables(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::string to_string(const ExprNode& n, const std::vector<std::string>& vars) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Number: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      return buf;
    }
    case K::Variable:
      return vars.at(n.index);
    case K::Negate:
      return "(-" + to_string(*n.lhs, vars) + ")";
    case K::Add:
      return "(" + to_string(*n.lhs, vars) + " + " + to_string(*n.rhs, vars) + ")";
    case K::Sub:
      return "(" + to_string(*n.lhs, vars) + " - " + to_string(*n.rhs, vars) + ")";
    case K::Mul:
      return "(" + to_string(*n.lhs, vars) + " * " + to_string(*n.rhs, vars) + ")";
    case K::Div:
      return "(" + to_string(*n.lhs, vars) + " / " + to_string(*n.rhs, vars) + ")";
    case K::Power:
      return "(" + to_string(*n.lhs, vars) + "^" + std::to_string(n.exponent) + ")";
    case K::Sin:
      return "sin(" + to_string(*n.lhs, vars) + ")";
    case K::Cos:
      return "cos(" + to_string(*n.lhs, vars) + ")";
    case K::Exp:
      return "exp(" + to_string(*n.lhs, vars) + ")";
    case K::Sqrt:
      return "sqrt(" + to_string(*n.lhs, vars) + ")";
  }
  return "?";
}

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const ExprNode> root, std::vector<std::string> variables)
    : root_(std::move(root)), variables_(std::move(variables)) {}

Expr Expr::constant(double value, std::vector<std::string> variables) {
  auto node = std::make_shared<ExprNode>();
  node->kind = ExprNode::Kind::Number;
  node->number = value;
  return Expr(std::move(node), std::move(variables));
}

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(ExprNode::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

// expr    := term (('+' | '-') term)*
// term    := unary (('*' | '/') unary)*
// unary   := '-' unary | power
// power   := primary ('^' ['-'] integer)?
// primary := number | identifier | func '(' expr ')' | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make_node(ExprNode::Kind::Add, lhs, parse_term());
      else if (accept('-'))
        lhs = make_node(ExprNode::Kind::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make_node(ExprNode::Kind::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = make_node(ExprNode::Kind::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (!accept('^')) return base;
    bool negative = accept('-');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ - start > 6) {
      pos_ = start;
      fail("exponent too large");
    }
    int e = std::stoi(std::string(src_.substr(start, pos_ - start)));
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Power;
    n->lhs = base;
    n->exponent = negative ? -e : e;
    return n;
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_node(ExprNode::Kind::Negate, parse_unary());
    return parse_power();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (accept('(')) {
      NodePtr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      std::size_t digits = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (digits == pos_) pos_ = save;
    }
    std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
      pos_ = start;
      fail("malformed number '" + text + "'");
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Number;
    n->number = value;
    return n;
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    static const std::pair<const char*, ExprNode::Kind> funcs[] = {
        {"sin", ExprNode::Kind::Sin},
        {"cos", ExprNode::Kind::Cos},
        {"exp", ExprNode::Kind::Exp},
        {"sqrt", ExprNode::Kind::Sqrt}};
    for (const auto& [fname, kind] : funcs) {
      if (name == fname) {
        if (!accept('(')) fail("expected '(' after " + name);
        NodePtr arg = parse_expr();
        if (!accept(')')) fail("expected ')'");
        return make_node(kind, arg);
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Variable;
        n->index = static_cast<int>(i);
        return n;
      }
    }
    throw UnknownIdentifierError(name, start, vars_);
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::Number:
      return a.number == b.number;
    case ExprNode::Kind::Variable:
      return a.index == b.index;
    case ExprNode::Kind::Power:
      return a.exponent == b.exponent && nodes_equal(*a.lhs, *b.lhs);
    default:
      break;
  }
  if (!nodes_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs || b.rhs) return a.rhs && b.rhs && nodes_equal(*a.rhs, *b.rhs);
  return true;
}

int count_nodes(const ExprNode& n) {
  int c = 1;
  if (n.lhs) c += count_nodes(*n.lhs);
  if (n.rhs) c += count_nodes(*n.rhs);
  return c;
}

}  // namespace

Expr parse(std::string_view src, const std::vector<std::string>& variables) {
  Parser p(src, variables);
  return Expr(p.parse_all(), variables);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  return a.variables() == b.variables() && nodes_equal(a.root(), b.root());
}

int node_count(const Expr& e) { return count_nodes(e.root()); }

J1 eval_jet(const Expr& e, const Vec& point, const std::vector<Vec>& directions) {
  const int width = static_cast<int>(directions.size());
  if (width > kJetCapacity)
    throw std::invalid_argument("jet width " + std::to_string(width) + " exceeds capacity " +
                                std::to_string(kJetCapacity));
  if (point.size() != e.arity()) throw std::invalid_argument("point dimension mismatch");
  VecX<J1> x(point.size());
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    x[i] = J1(point[i]);
    x[i].w = width;
    for (int k = 0; k < width; ++k) {
      if (directions[k].size() != point.size())
        throw std::invalid_argument("direction dimension mismatch");
      x[i].d[k] = directions[k][i];
    }
  }
  return e.eval(x);
}

}  // namespace dirac
