#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace tqb {

/// Parsed scalar expression in the variable x.
///
/// Grammar (whitespace-insensitive):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := number | 'x' | 'pi' | var
///            | ('sin' | 'cos' | 'exp') '(' expr ')'
///            | 'sum' '(' var ',' int ',' int ',' expr ')'
///            | '(' expr ')'
/// A sum variable is visible inside its body only.
class Expression {
 public:
  struct Node;

  Expression() = default;

  double operator()(double x) const;

  const std::string& source() const { return source_; }

  /// Fully parenthesized rendering that parses back to the same value.
  std::string to_string() const;

 private:
  friend Expression parse(std::string_view source);

  Expression(std::shared_ptr<const Node> root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  std::shared_ptr<const Node> root_;
  std::string source_;
};

Expression parse(std::string_view source);

double evaluate(const Expression& e, double x);

}  // namespace tqb
