// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Small arithmetic/boolean expression language for predicate sets.
//
//   expr   := or
//   or     := and (("||" | "or") and)*
//   and    := not (("&&" | "and") not)*
//   not    := ("!" | "not") not | cmp
//   cmp    := sum (("<" | "<=" | ">" | ">=" | "==" | "!=") sum)?
//   sum    := prod (("+" | "-") prod)*
//   prod   := unary (("*" | "/") unary)*
//   unary  := "-" unary | pow
//   pow    := atom ("^" unary)?
//   atom   := number | name | name "(" args ")" | "(" expr ")"
//
// Booleans are 1.0 / 0.0. Functions: abs sqrt exp log sin cos floor min max
// hypot mod. Constants: pi, e.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace berezin {

class Expression {
 public:
  /// Parses `source`; every free name must be in `variables` or be a constant.
  static Expression parse(const std::string& source, const std::vector<std::string>& variables);

  /// Values are bound positionally, in the order given to parse().
  double eval(const double* values) const;

  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace berezin
