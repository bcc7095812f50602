// Copyright 2026 The SplitNash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Utility expressions: polynomial and fractional-power terms over named
// variables.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' number)?
//   atom   := number | identifier | '(' expr ')' | '-' atom
//
// Unary minus applies to an atom, so "-x^2" reads as (-x)^2. Write
// "-(x^2)" or "0 - x^2" for the negated square.

#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "splitnash/error.hpp"

namespace splitnash {

enum class ExprKind { kConstant, kVariable, kAdd, kSubtract, kMultiply, kNegate, kPower };

// Immutable expression tree. Copies share nodes.
class UtilityExpr {
 public:
  struct Node {
    ExprKind kind;
    double value = 0.0;  // constant value, or exponent for kPower
    std::string name;    // variable name
    std::vector<UtilityExpr> operands;
  };

  static UtilityExpr constant(double v) { return UtilityExpr(Node{ExprKind::kConstant, v, {}, {}}); }
  static UtilityExpr variable(std::string name) {
    return UtilityExpr(Node{ExprKind::kVariable, 0.0, std::move(name), {}});
  }
  static UtilityExpr add(UtilityExpr l, UtilityExpr r) {
    return UtilityExpr(Node{ExprKind::kAdd, 0.0, {}, {std::move(l), std::move(r)}});
  }
  static UtilityExpr subtract(UtilityExpr l, UtilityExpr r) {
    return UtilityExpr(Node{ExprKind::kSubtract, 0.0, {}, {std::move(l), std::move(r)}});
  }
  static UtilityExpr multiply(std::vector<UtilityExpr> factors) {
    if (factors.size() < 2) throw ValidationError("multiply needs at least two factors");
    return UtilityExpr(Node{ExprKind::kMultiply, 0.0, {}, std::move(factors)});
  }
  static UtilityExpr negate(UtilityExpr e) {
    return UtilityExpr(Node{ExprKind::kNegate, 0.0, {}, {std::move(e)}});
  }
  static UtilityExpr power(UtilityExpr base, double exponent) {
    return UtilityExpr(Node{ExprKind::kPower, exponent, {}, {std::move(base)}});
  }

  ExprKind kind() const { return node_->kind; }
  double value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  const std::vector<UtilityExpr>& operands() const { return node_->operands; }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    collect(out);
    return out;
  }

  // Fully parenthesized text that parses back to a structurally equal tree.
  std::string to_string() const {
    switch (kind()) {
      case ExprKind::kConstant:
        return format_number(value());
      case ExprKind::kVariable:
        return name();
      case ExprKind::kAdd:
        return "(" + operands()[0].to_string() + " + " + operands()[1].to_string() + ")";
      case ExprKind::kSubtract:
        return "(" + operands()[0].to_string() + " - " + operands()[1].to_string() + ")";
      case ExprKind::kMultiply: {
        std::string s = "(";
        for (std::size_t i = 0; i < operands().size(); ++i) {
          if (i) s += " * ";
          s += operands()[i].to_string();
        }
        return s + ")";
      }
      case ExprKind::kNegate:
        return "-" + operands()[0].atom_string();
      case ExprKind::kPower:
        return operands()[0].atom_string() + "^" + format_number(value());
    }
    return {};
  }

  friend bool operator==(const UtilityExpr& a, const UtilityExpr& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.kind == y.kind && x.value == y.value && x.name == y.name && x.operands == y.operands;
  }

 private:
  explicit UtilityExpr(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

  static std::string format_number(double v) {
    if (v < 0) return "(-" + format_number(-v) + ")";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

  // Text usable as an atom (operand of unary minus or '^').
  std::string atom_string() const {
    if (kind() == ExprKind::kVariable || (kind() == ExprKind::kConstant && value() >= 0))
      return to_string();
    if (kind() == ExprKind::kNegate) return to_string();
    const std::string s = to_string();
    return s.front() == '(' && kind() != ExprKind::kPower ? s : "(" + s + ")";
  }

  void collect(std::set<std::string>& out) const {
    if (kind() == ExprKind::kVariable) out.insert(name());
    for (const auto& op : operands()) op.collect(out);
  }

  std::shared_ptr<const Node> node_;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  UtilityExpr parse() {
    UtilityExpr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

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

  UtilityExpr expr() {
    UtilityExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = UtilityExpr::add(std::move(lhs), term());
      } else if (accept('-')) {
        lhs = UtilityExpr::subtract(std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  UtilityExpr term() {
    std::vector<UtilityExpr> factors;
    factors.push_back(factor());
    while (accept('*')) factors.push_back(factor());
    if (factors.size() == 1) return std::move(factors.front());
    return UtilityExpr::multiply(std::move(factors));
  }

  UtilityExpr factor() {
    UtilityExpr base = atom();
    if (accept('^')) {
      skip_ws();
      return UtilityExpr::power(std::move(base), number());
    }
    return base;
  }

  UtilityExpr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      UtilityExpr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return UtilityExpr::negate(atom());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return UtilityExpr::constant(number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      return UtilityExpr::variable(std::string(src_.substr(start, pos_ - start)));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  // digits ['.' digits] [('e'|'E') ['+'|'-'] digits], or '.' digits.
  double number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("expected number");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail("number out of range");
    }
    return v;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline double checked_power(double base, double exponent) {
  if (base < 0 && exponent != std::floor(exponent)) {
    throw DomainError("fractional power " + std::to_string(exponent) + " of negative base " +
                      std::to_string(base));
  }
  return std::pow(base, exponent);
}

template <typename Lookup>
double evaluate(const UtilityExpr& e, const Lookup& lookup) {
  const auto& ops = e.operands();
  switch (e.kind()) {
    case ExprKind::kConstant:
      return e.value();
    case ExprKind::kVariable:
      return lookup(e.name());
    case ExprKind::kAdd:
      return evaluate(ops[0], lookup) + evaluate(ops[1], lookup);
    case ExprKind::kSubtract:
      return evaluate(ops[0], lookup) - evaluate(ops[1], lookup);
    case ExprKind::kMultiply: {
      double p = evaluate(ops[0], lookup);
      for (std::size_t i = 1; i < ops.size(); ++i) p *= evaluate(ops[i], lookup);
      return p;
    }
    case ExprKind::kNegate:
      return -evaluate(ops[0], lookup);
    case ExprKind::kPower:
      return checked_power(evaluate(ops[0], lookup), e.value());
  }
  return 0.0;
}

}  // namespace detail

inline UtilityExpr parse_utility(std::string_view source) { return detail::ExprParser(source).parse(); }

inline double eval_utility(const UtilityExpr& expr, const std::map<std::string, double>& bindings) {
  const double v = detail::evaluate(expr, [&](const std::string& name) {
    auto it = bindings.find(name);
    if (it == bindings.end()) throw DomainError("unbound variable '" + name + "'");
    return it->second;
  });
  if (!std::isfinite(v)) throw DomainError("expression evaluated to a non-finite value");
  return v;
}

// Expression with variables resolved to positions in a value vector,
// flattened to postfix for fast repeated evaluation.
class CompiledExpr {
 public:
  CompiledExpr(const UtilityExpr& expr, std::span<const std::string> variables) {
    std::size_t depth = 0;
    compile(expr, variables, depth);
    if (max_depth_ > kInlineStack) heap_stack_ = true;
  }

  double operator()(std::span<const double> values) const {
    if (!heap_stack_) {
      std::array<double, kInlineStack> stack;
      return run(values, stack.data());
    }
    std::vector<double> stack(max_depth_);
    return run(values, stack.data());
  }

 private:
  static constexpr std::size_t kInlineStack = 64;

  struct Op {
    ExprKind kind;
    double value;
    std::size_t arg;  // slot for variables, arity for multiply
  };

  void compile(const UtilityExpr& e, std::span<const std::string> variables, std::size_t& depth) {
    switch (e.kind()) {
      case ExprKind::kConstant:
        program_.push_back({e.kind(), e.value(), 0});
        bump(depth, 1);
        return;
      case ExprKind::kVariable: {
        std::size_t slot = variables.size();
        for (std::size_t i = 0; i < variables.size(); ++i) {
          if (variables[i] == e.name()) slot = i;
        }
        if (slot == variables.size()) throw ValidationError("undeclared variable '" + e.name() + "'");
        program_.push_back({e.kind(), 0.0, slot});
        bump(depth, 1);
        return;
      }
      default:
        break;
    }
    for (const auto& op : e.operands()) compile(op, variables, depth);
    const std::size_t arity = e.operands().size();
    program_.push_back({e.kind(), e.value(), arity});
    depth -= arity - 1;
  }

  void bump(std::size_t& depth, std::size_t n) {
    depth += n;
    max_depth_ = std::max(max_depth_, depth);
  }

  double run(std::span<const double> values, double* stack) const {
    std::size_t top = 0;
    for (const Op& op : program_) {
      switch (op.kind) {
        case ExprKind::kConstant:
          stack[top++] = op.value;
          break;
        case ExprKind::kVariable:
          stack[top++] = values[op.arg];
          break;
        case ExprKind::kAdd:
          --top;
          stack[top - 1] += stack[top];
          break;
        case ExprKind::kSubtract:
          --top;
          stack[top - 1] -= stack[top];
          break;
        case ExprKind::kMultiply: {
          const std::size_t first = top - op.arg;
          double p = stack[first];
          for (std::size_t i = first + 1; i < top; ++i) p *= stack[i];
          top = first + 1;
          stack[first] = p;
          break;
        }
        case ExprKind::kNegate:
          stack[top - 1] = -stack[top - 1];
          break;
        case ExprKind::kPower:
          stack[top - 1] = detail::checked_power(stack[top - 1], op.value);
          break;
      }
    }
    return stack[0];
  }

  std::vector<Op> program_;
  std::size_t max_depth_ = 0;
  bool heap_stack_ = false;
};

}  // namespace splitnash
