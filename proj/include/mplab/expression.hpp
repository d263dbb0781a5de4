#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mplab {

/// Parsed arithmetic expression over a fixed set of variables.
///
/// Grammar: numbers, variables, + - * / ^ (right-assoc), unary -, parentheses,
/// and the functions exp, log, sin, cos, abs.
class Expression {
public:
  static Expression parse(std::string_view src, std::span<const std::string> variables);

  double eval(std::span<const double> values) const;
  const std::string& source() const { return source_; }

private:
  enum class Op : unsigned char {
    push_const, push_var, add, sub, mul, div, pow, neg,
    exp, log, sin, cos, abs,
  };
  struct Instr {
    Op op;
    double value = 0.0;  // push_const
    int var = 0;         // push_var
  };
  std::string source_;
  std::vector<Instr> code_;
  std::size_t max_stack_ = 0;
};

struct ExpressionError : std::invalid_argument {
  ExpressionError(const std::string& msg, std::size_t pos)
      : std::invalid_argument(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

}  // namespace mplab
