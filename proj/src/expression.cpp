#include "mplab/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace mplab {

// A small recursive-descent parser emitting postfix code.
Expression Expression::parse(std::string_view src, std::span<const std::string> variables) {
  Expression e;
  e.source_ = std::string(src);

  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  };
  auto peek = [&]() -> char {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  };
  auto consume = [&](char c) -> bool {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  };

  std::vector<Instr>& code = e.code_;

  // expr := term (('+'|'-') term)*
  // term := factor (('*'|'/') factor)*
  // factor := unary ('^' factor)?
  // unary := '-' unary | primary
  // primary := number | ident | ident '(' expr ')' | '(' expr ')'
  struct Rec {
    decltype(peek)& peek;
    decltype(consume)& consume;
    std::string_view src;
    std::size_t& pos;
    std::span<const std::string> vars;
    std::vector<Instr>& code;

    void expr() {
      term();
      while (true) {
        char c = peek();
        if (c == '+') {
          ++pos;
          term();
          code.push_back({Op::add});
        } else if (c == '-') {
          ++pos;
          term();
          code.push_back({Op::sub});
        } else {
          break;
        }
      }
    }
    void term() {
      factor();
      while (true) {
        char c = peek();
        if (c == '*') {
          ++pos;
          factor();
          code.push_back({Op::mul});
        } else if (c == '/') {
          ++pos;
          factor();
          code.push_back({Op::div});
        } else {
          break;
        }
      }
    }
    void factor() {
      unary();
      if (peek() == '^') {
        ++pos;
        factor();  // right associative
        code.push_back({Op::pow});
      }
    }
    void unary() {
      if (peek() == '-') {
        ++pos;
        unary();
        code.push_back({Op::neg});
        return;
      }
      primary();
    }
    void primary() {
      char c = peek();
      if (c == '(') {
        ++pos;
        expr();
        if (!consume(')')) throw ExpressionError("expected ')'", pos);
        return;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const char* begin = src.data() + pos;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ExpressionError("malformed number", pos);
        pos += static_cast<std::size_t>(end - begin);
        code.push_back({Op::push_const, v, 0});
        return;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
          ++pos;
        std::string name(src.substr(start, pos - start));
        if (peek() == '(') {
          ++pos;
          expr();
          if (!consume(')')) throw ExpressionError("expected ')' after " + name, pos);
          if (name == "exp") code.push_back({Op::exp});
          else if (name == "log") code.push_back({Op::log});
          else if (name == "sin") code.push_back({Op::sin});
          else if (name == "cos") code.push_back({Op::cos});
          else if (name == "abs") code.push_back({Op::abs});
          else throw ExpressionError("unknown function '" + name + "'", start);
          return;
        }
        if (name == "pi") {
          code.push_back({Op::push_const, 3.14159265358979323846, 0});
          return;
        }
        for (std::size_t k = 0; k < vars.size(); ++k) {
          if (vars[k] == name) {
            code.push_back({Op::push_var, 0.0, static_cast<int>(k)});
            return;
          }
        }
        throw ExpressionError("unknown variable '" + name + "'", start);
      }
      throw ExpressionError(std::string("unexpected character '") + c + "'", pos);
    }
  } rec{peek, consume, src, pos, variables, code};

  rec.expr();
  skip_ws();
  if (pos != src.size()) throw ExpressionError("trailing input", pos);

  // stack depth
  std::size_t depth = 0, maxd = 0;
  for (const auto& in : code) {
    switch (in.op) {
      case Op::push_const:
      case Op::push_var:
        ++depth;
        maxd = std::max(maxd, depth);
        break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
      case Op::pow:
        --depth;
        break;
      default:
        break;  // unary ops keep depth
    }
  }
  e.max_stack_ = maxd;
  if (maxd > 32) throw ExpressionError("expression too deep", 0);
  return e;
}

double Expression::eval(std::span<const double> values) const {
  double stack[32];
  std::size_t top = 0;
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::push_const: stack[top++] = in.value; break;
      case Op::push_var: stack[top++] = values[static_cast<std::size_t>(in.var)]; break;
      case Op::add: --top; stack[top - 1] += stack[top]; break;
      case Op::sub: --top; stack[top - 1] -= stack[top]; break;
      case Op::mul: --top; stack[top - 1] *= stack[top]; break;
      case Op::div: --top; stack[top - 1] /= stack[top]; break;
      case Op::pow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
      case Op::neg: stack[top - 1] = -stack[top - 1]; break;
      case Op::exp: stack[top - 1] = std::exp(stack[top - 1]); break;
      case Op::log: stack[top - 1] = std::log(stack[top - 1]); break;
      case Op::sin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case Op::cos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case Op::abs: stack[top - 1] = std::abs(stack[top - 1]); break;
    }
  }
  return stack[0];
}

}  // namespace mplab
