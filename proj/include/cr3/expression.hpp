#pragma once

#include <memory>
#include <string>

namespace cr3 {

/// Real expression in the variable s: numbers, s, pi, + - * / ^, unary minus,
/// parentheses and sin cos tan exp log sqrt abs. Throws Format on bad input.
class Expression {
 public:
  static Expression parse(const std::string& text);
  double operator()(double s) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace cr3
