#include "cr3/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "cr3/error.hpp"

namespace cr3 {

struct Expression::Node {
  enum Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
  double value = 0.0;
  double (*fn)(double) = nullptr;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double s) const {
    switch (kind) {
      case Number: return value;
      case Var: return s;
      case Neg: return -args[0]->eval(s);
      case Add: return args[0]->eval(s) + args[1]->eval(s);
      case Sub: return args[0]->eval(s) - args[1]->eval(s);
      case Mul: return args[0]->eval(s) * args[1]->eval(s);
      case Div: return args[0]->eval(s) / args[1]->eval(s);
      case Pow: return std::pow(args[0]->eval(s), args[1]->eval(s));
      case Call: return fn(args[0]->eval(s));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node::Kind k, std::vector<NodePtr> args = {}, double v = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->value = v;
  n->args = std::move(args);
  return n;
}

struct Parser {
  const std::string& src;
  std::size_t pos = 0;

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::Format, "expression '" + src + "': " + what + " at offset " + std::to_string(pos));
  }
  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool accept(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  // expr := term (('+'|'-') term)*
  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Node::Add, {lhs, term()});
      else if (accept('-')) lhs = make(Node::Sub, {lhs, term()});
      else return lhs;
    }
  }
  // term := unary (('*'|'/') unary)*
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Node::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Node::Div, {lhs, unary()});
      else return lhs;
    }
  }
  // unary := '-' unary | '+' unary | power
  NodePtr unary() {
    if (accept('-')) return make(Node::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }
  // power := atom ('^' unary)?   (right associative)
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Node::Pow, {base, unary()});
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos >= src.size()) error("unexpected end");
    char c = src[pos];
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src.c_str() + pos;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) error("bad number");
      pos += static_cast<std::size_t>(end - begin);
      return make(Node::Number, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < src.size() && std::isalnum(static_cast<unsigned char>(src[pos]))) ++pos;
      std::string name = src.substr(start, pos - start);
      if (name == "s") return make(Node::Var);
      if (name == "pi") return make(Node::Number, {}, std::numbers::pi);
      double (*fn)(double) = nullptr;
      if (name == "sin") fn = [](double x) { return std::sin(x); };
      else if (name == "cos") fn = [](double x) { return std::cos(x); };
      else if (name == "tan") fn = [](double x) { return std::tan(x); };
      else if (name == "exp") fn = [](double x) { return std::exp(x); };
      else if (name == "log") fn = [](double x) { return std::log(x); };
      else if (name == "sqrt") fn = [](double x) { return std::sqrt(x); };
      else if (name == "abs") fn = [](double x) { return std::abs(x); };
      else error("unknown name '" + name + "'");
      if (!accept('(')) error("expected '(' after " + name);
      NodePtr arg = expr();
      if (!accept(')')) error("expected ')'");
      auto n = std::make_shared<Node>();
      n->kind = Node::Call;
      n->fn = fn;
      n->args = {arg};
      return n;
    }
    error(std::string("unexpected '") + c + "'");
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p{text};
  Expression e;
  e.root_ = p.expr();
  p.skip();
  if (p.pos != text.size()) p.error("trailing input");
  e.text_ = text;
  return e;
}

double Expression::operator()(double s) const { return root_->eval(s); }

}  // namespace cr3
