// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "berezin/errors.hpp"

namespace berezin {

struct Expression::Node {
  enum class Op { Const, Var, Neg, Not, Add, Sub, Mul, Div, Pow, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Call };
  Op op = Op::Const;
  double value = 0.0;
  int var = -1;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, std::vector<NodePtr> kids) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->kids = std::move(kids);
  return n;
}

class Parser {
 public:
  Parser(const std::string& src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse() {
    NodePtr n = parse_or();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected '" + src_.substr(pos_, 1) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidArgument("predicate '" + src_ + "': " + msg + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(const std::string& tok) {
    skip_space();
    if (src_.compare(pos_, tok.size(), tok) != 0) return false;
    // Word operators must not swallow the start of an identifier.
    if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
      const std::size_t end = pos_ + tok.size();
      if (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        return false;
    }
    pos_ += tok.size();
    return true;
  }

  NodePtr parse_or() {
    NodePtr lhs = parse_and();
    while (accept("||") || accept("or")) lhs = make(Node::Op::Or, {lhs, parse_and()});
    return lhs;
  }

  NodePtr parse_and() {
    NodePtr lhs = parse_not();
    while (accept("&&") || accept("and")) lhs = make(Node::Op::And, {lhs, parse_not()});
    return lhs;
  }

  NodePtr parse_not() {
    skip_space();
    if (src_.compare(pos_, 2, "!=") != 0 && (accept("!") || accept("not")))
      return make(Node::Op::Not, {parse_not()});
    return parse_cmp();
  }

  NodePtr parse_cmp() {
    NodePtr lhs = parse_sum();
    static const std::pair<const char*, Node::Op> ops[] = {{"<=", Node::Op::Le}, {">=", Node::Op::Ge},
                                                           {"==", Node::Op::Eq}, {"!=", Node::Op::Ne},
                                                           {"<", Node::Op::Lt},  {">", Node::Op::Gt}};
    for (const auto& [tok, op] : ops) {
      if (accept(tok)) return make(op, {lhs, parse_sum()});
    }
    return lhs;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_prod();
    for (;;) {
      if (accept("+")) lhs = make(Node::Op::Add, {lhs, parse_prod()});
      else if (accept("-")) lhs = make(Node::Op::Sub, {lhs, parse_prod()});
      else return lhs;
    }
  }

  NodePtr parse_prod() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept("*")) lhs = make(Node::Op::Mul, {lhs, parse_unary()});
      else if (accept("/")) lhs = make(Node::Op::Div, {lhs, parse_unary()});
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept("-")) return make(Node::Op::Neg, {parse_unary()});
    return parse_pow();
  }

  NodePtr parse_pow() {
    NodePtr base = parse_atom();
    if (accept("^")) return make(Node::Op::Pow, {base, parse_unary()});
    return base;
  }

  NodePtr parse_atom() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (accept("(")) {
      NodePtr n = parse_or();
      if (!accept(")")) fail("expected ')'");
      return n;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      const std::string name = src_.substr(start, pos_ - start);
      if (accept("(")) {
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Call;
        n->fn = name;
        if (!accept(")")) {
          do {
            n->kids.push_back(parse_or());
          } while (accept(","));
          if (!accept(")")) fail("expected ')' after arguments of " + name);
        }
        check_call(*n);
        return n;
      }
      auto n = std::make_shared<Node>();
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) {
          n->op = Node::Op::Var;
          n->var = static_cast<int>(i);
          return n;
        }
      }
      if (name == "pi") n->value = std::numbers::pi;
      else if (name == "e") n->value = std::numbers::e;
      else fail("unknown name '" + name + "'");
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  void check_call(const Node& n) const {
    static const std::pair<const char*, std::size_t> fns[] = {
        {"abs", 1}, {"sqrt", 1}, {"exp", 1}, {"log", 1}, {"sin", 1}, {"cos", 1},
        {"floor", 1}, {"min", 2}, {"max", 2}, {"hypot", 2}, {"mod", 2}};
    for (const auto& [name, arity] : fns) {
      if (n.fn == name) {
        if (n.kids.size() != arity) fail(n.fn + " takes " + std::to_string(arity) + " argument(s)");
        return;
      }
    }
    fail("unknown function '" + n.fn + "'");
  }

  const std::string& src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, const double* v) {
  auto k = [&](std::size_t i) { return eval_node(*n.kids[i], v); };
  switch (n.op) {
    case Node::Op::Const: return n.value;
    case Node::Op::Var: return v[n.var];
    case Node::Op::Neg: return -k(0);
    case Node::Op::Not: return k(0) == 0.0 ? 1.0 : 0.0;
    case Node::Op::Add: return k(0) + k(1);
    case Node::Op::Sub: return k(0) - k(1);
    case Node::Op::Mul: return k(0) * k(1);
    case Node::Op::Div: return k(0) / k(1);
    case Node::Op::Pow: return std::pow(k(0), k(1));
    case Node::Op::Lt: return k(0) < k(1) ? 1.0 : 0.0;
    case Node::Op::Le: return k(0) <= k(1) ? 1.0 : 0.0;
    case Node::Op::Gt: return k(0) > k(1) ? 1.0 : 0.0;
    case Node::Op::Ge: return k(0) >= k(1) ? 1.0 : 0.0;
    case Node::Op::Eq: return k(0) == k(1) ? 1.0 : 0.0;
    case Node::Op::Ne: return k(0) != k(1) ? 1.0 : 0.0;
    case Node::Op::And: return (k(0) != 0.0 && k(1) != 0.0) ? 1.0 : 0.0;
    case Node::Op::Or: return (k(0) != 0.0 || k(1) != 0.0) ? 1.0 : 0.0;
    case Node::Op::Call: {
      const std::string& f = n.fn;
      if (f == "abs") return std::fabs(k(0));
      if (f == "sqrt") return std::sqrt(k(0));
      if (f == "exp") return std::exp(k(0));
      if (f == "log") return std::log(k(0));
      if (f == "sin") return std::sin(k(0));
      if (f == "cos") return std::cos(k(0));
      if (f == "floor") return std::floor(k(0));
      if (f == "min") return std::min(k(0), k(1));
      if (f == "max") return std::max(k(0), k(1));
      if (f == "hypot") return std::hypot(k(0), k(1));
      if (f == "mod") return std::fmod(k(0), k(1));
      return 0.0;
    }
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& source, const std::vector<std::string>& variables) {
  Expression e;
  e.source_ = source;
  e.root_ = Parser(source, variables).parse();
  return e;
}

double Expression::eval(const double* values) const {
  if (!root_) throw InvalidArgument("empty expression");
  return eval_node(*root_, values);
}

}  // namespace berezin
