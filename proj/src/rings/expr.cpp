#include "wz/expr.hpp"

#include <cctype>

namespace wz {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  ExprPtr run() {
    auto e = sum();
    skip();
    if (i_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[i_]) + "'", i_);
    return e;
  }

 private:
  const std::string& s_;
  size_t i_ = 0;

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  static ExprPtr node(Expr::Kind k, ExprPtr a, ExprPtr b, size_t pos) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    e->pos = pos;
    return e;
  }

  ExprPtr sum() {
    auto e = product();
    for (;;) {
      skip();
      size_t pos = i_;
      if (eat('+')) e = node(Expr::Kind::Add, e, product(), pos);
      else if (eat('-')) e = node(Expr::Kind::Sub, e, product(), pos);
      else return e;
    }
  }
  ExprPtr product() {
    auto e = unary();
    for (;;) {
      skip();
      size_t pos = i_;
      if (eat('*')) e = node(Expr::Kind::Mul, e, unary(), pos);
      else return e;
    }
  }
  ExprPtr unary() {
    skip();
    size_t pos = i_;
    if (eat('-')) return node(Expr::Kind::Neg, unary(), nullptr, pos);
    if (eat('+')) return unary();
    return power();
  }
  ExprPtr power() {
    auto base = atom();
    skip();
    size_t pos = i_;
    if (eat('^')) return node(Expr::Kind::Pow, base, atom(), pos);
    return base;
  }
  ExprPtr atom() {
    skip();
    size_t pos = i_;
    if (i_ >= s_.size()) throw ParseError("unexpected end of expression", i_);
    char c = s_[i_];
    if (eat('(')) {
      auto e = sum();
      if (!eat(')')) throw ParseError("expected ')'", i_);
      return e;
    }
    auto e = std::make_shared<Expr>();
    e->pos = pos;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      int64_t v = 0;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        if (v > (int64_t(1) << 58)) throw ParseError("integer literal too large", pos);
        v = v * 10 + (s_[i_++] - '0');
      }
      e->kind = Expr::Kind::Int;
      e->value = v;
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        e->name.push_back(s_[i_++]);
      e->kind = Expr::Kind::Var;
      return e;
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos);
  }
};

int prec(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

std::string paren(const Expr& e, int min_prec) {
  std::string s = to_string(e);
  return prec(e.kind) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).run(); }

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Int: return std::to_string(e.value);
    case Expr::Kind::Var: return e.name;
    case Expr::Kind::Add: return paren(*e.a, 1) + "+" + paren(*e.b, 2);
    case Expr::Kind::Sub: return paren(*e.a, 1) + "-" + paren(*e.b, 2);
    case Expr::Kind::Mul: return paren(*e.a, 2) + "*" + paren(*e.b, 3);
    case Expr::Kind::Neg: return "-" + paren(*e.a, 3);
    case Expr::Kind::Pow: return paren(*e.a, 5) + "^" + paren(*e.b, 5);
  }
  return "?";
}

int64_t eval_int(const Expr& e, const std::map<std::string, int64_t>& env) {
  ExprOps<int64_t> ops;
  ops.from_int = [](int64_t v) { return v; };
  ops.var = [&](const std::string& n, size_t pos) -> int64_t {
    auto it = env.find(n);
    if (it == env.end()) throw ParseError("unknown symbol '" + n + "' in integer expression", pos);
    return it->second;
  };
  ops.add = [](int64_t a, int64_t b) { return a + b; };
  ops.sub = [](int64_t a, int64_t b) { return a - b; };
  ops.mul = [](int64_t a, int64_t b) { return a * b; };
  ops.neg = [](int64_t a) { return -a; };
  ops.int_env = env;
  return eval_expr(e, ops);
}

}  // namespace wz
