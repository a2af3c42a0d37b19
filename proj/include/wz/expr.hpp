#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "wz/errors.hpp"

// Arithmetic expressions over named variables: integers, + - * ^ and
// parentheses. Exponents are integer expressions (may use p).

namespace wz {

struct Expr {
  enum class Kind { Int, Var, Add, Sub, Mul, Pow, Neg };
  Kind kind = Kind::Int;
  int64_t value = 0;
  std::string name;
  std::shared_ptr<const Expr> a, b;
  size_t pos = 0;
};

using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr parse_expr(const std::string& text);
std::string to_string(const Expr& e);

// Integer value; free variables are looked up in `env`.
int64_t eval_int(const Expr& e, const std::map<std::string, int64_t>& env);

template <class T>
struct ExprOps {
  std::function<T(int64_t)> from_int;
  std::function<T(const std::string&, size_t pos)> var;
  std::function<T(const T&, const T&)> add, sub, mul;
  std::function<T(const T&)> neg;
  std::map<std::string, int64_t> int_env;  // used for exponents
};

template <class T>
T eval_expr(const Expr& e, const ExprOps<T>& ops) {
  switch (e.kind) {
    case Expr::Kind::Int: return ops.from_int(e.value);
    case Expr::Kind::Var: return ops.var(e.name, e.pos);
    case Expr::Kind::Add: return ops.add(eval_expr(*e.a, ops), eval_expr(*e.b, ops));
    case Expr::Kind::Sub: return ops.sub(eval_expr(*e.a, ops), eval_expr(*e.b, ops));
    case Expr::Kind::Mul: return ops.mul(eval_expr(*e.a, ops), eval_expr(*e.b, ops));
    case Expr::Kind::Neg: return ops.neg(eval_expr(*e.a, ops));
    case Expr::Kind::Pow: {
      int64_t k = eval_int(*e.b, ops.int_env);
      if (k < 0) throw ParseError("negative exponent", e.pos);
      T base = eval_expr(*e.a, ops);
      T r = ops.from_int(1);
      while (k) {
        if (k & 1) r = ops.mul(r, base);
        k >>= 1;
        if (k) base = ops.mul(base, base);
      }
      return r;
    }
  }
  throw ParseError("bad expression", e.pos);
}

}  // namespace wz
