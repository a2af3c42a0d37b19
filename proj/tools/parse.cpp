#include <cctype>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace wz::cli {

namespace {

struct DescParser {
  const std::string& s;
  size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  [[noreturn]] void fail(const std::string& what, size_t at) { throw ParseError(what, at); }
  void expect(char c) {
    ws();
    if (i >= s.size() || s[i] != c) fail(std::string("expected '") + c + "'", i);
    ++i;
  }
  bool accept(char c) {
    ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string ident() {
    ws();
    size_t j = i;
    if (i < s.size() && (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
      ++i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    }
    if (i == j) fail("expected a name", i);
    return s.substr(j, i - j);
  }
  int64_t integer() {
    ws();
    size_t j = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == j) fail("expected an integer", i);
    if (i - j > 9) fail("integer too large", j);
    return std::stoll(s.substr(j, i - j));
  }
  bool at_digit() {
    ws();
    return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
  }
  // Text up to the next ',' or ')' at depth 0, parsed as an expression.
  ExprPtr expression() {
    ws();
    size_t j = i;
    int depth = 0;
    while (i < s.size()) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (s[i] == ',' && depth == 0) break;
      ++i;
    }
    if (i == j) fail("expected a polynomial", j);
    try {
      return parse_expr(s.substr(j, i - j));
    } catch (const ParseError& e) {
      fail("bad polynomial", j + e.position);
    }
  }
  static bool is_prime(int64_t p) {
    if (p < 2) return false;
    for (int64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }
  uint32_t prime(size_t at, int64_t p) {
    if (!is_prime(p)) fail(std::to_string(p) + " is not prime", at);
    return uint32_t(p);
  }

  DescPtr desc() {
    ws();
    const size_t at = i;
    const std::string name = ident();
    if (name == "Zmod") {
      expect('(');
      ws();
      const size_t np = i;
      int64_t n = integer();
      int e = 1;
      if (accept('^')) {
        e = int(integer());
        if (e < 1) fail("exponent must be positive", np);
      } else {
        // Zmod(N) with N a prime power
        int64_t q = n, p = 0;
        for (int64_t d = 2; d <= q; ++d)
          if (q % d == 0) {
            p = d;
            break;
          }
        if (p == 0) fail("Zmod needs a prime power", np);
        e = 0;
        while (q % p == 0) {
          q /= p;
          ++e;
        }
        if (q != 1) fail(std::to_string(n) + " is not a prime power", np);
        n = p;
      }
      expect(')');
      return RingDescriptor::zmod(prime(np, n), e);
    }
    if (name == "Fp") {
      expect('(');
      ws();
      const size_t np = i;
      int64_t p = integer();
      expect(')');
      return RingDescriptor::fp(prime(np, p));
    }
    if (name == "Fq") {
      expect('(');
      ws();
      const size_t np = i;
      uint32_t p = prime(np, integer());
      expect(',');
      int degree = 0;
      ExprPtr poly;
      ws();
      const size_t dp = i;
      if (at_digit()) {
        size_t save = i;
        int64_t n = integer();
        ws();
        if (i < s.size() && (s[i] == ',' || s[i] == ')')) {
          degree = int(n);
          if (degree < 1) fail("degree must be positive", dp);
        } else {
          i = save;
          poly = expression();
        }
      } else {
        poly = expression();
      }
      std::string var = "z";
      if (accept(',')) var = ident();
      expect(')');
      return poly ? RingDescriptor::fq_poly(p, poly, var) : RingDescriptor::fq(p, degree, var);
    }
    if (name == "Series") {
      expect('(');
      auto base = desc();
      expect(',');
      auto var = ident();
      expect(',');
      ws();
      const size_t np = i;
      int n = int(integer());
      if (n < 1) fail("precision must be positive", np);
      expect(')');
      return RingDescriptor::series(base, var, n);
    }
    if (name == "Ext") {
      expect('(');
      auto base = desc();
      expect(',');
      auto var = ident();
      expect(',');
      auto poly = expression();
      int k = 0;
      if (accept(',')) k = int(integer());
      expect(')');
      return RingDescriptor::ext(base, var, poly, k);
    }
    fail("unknown ring constructor '" + name + "'", at);
  }
};

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Splits at `sep` outside parentheses and brackets.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<std::vector<std::string>> parse_matrix(const std::string& text) {
  std::vector<std::vector<std::string>> m;
  for (auto& row : split_top(text, ';')) m.push_back(split_top(row, ','));
  return m;
}

std::vector<std::pair<std::string, std::string>> key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("line " + std::to_string(lineno) + ": expected 'key = value'");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t n = 0;
    int x = std::stoi(v, &n);
    if (n != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UsageError(key + ": expected an integer, got '" + v + "'");
  }
}

}  // namespace

DescPtr parse_descriptor(const std::string& text) {
  DescParser P{text};
  auto d = P.desc();
  P.ws();
  if (P.i != text.size()) throw ParseError("trailing input after descriptor", P.i);
  return d;
}

WittVector parse_witt(const std::string& text, const RingPtr& R) {
  std::string t = trim(text);
  RingPtr ring = R;
  std::string body = t;
  if (t.rfind("W[", 0) == 0) {
    auto close = t.find(']');
    if (close == std::string::npos) throw ParseError("missing ']'", t.size());
    auto semi = t.find(';');
    if (semi == std::string::npos || semi > close) throw ParseError("expected ';' after the header", 2);
    body = t.substr(semi + 1, close - semi - 1);
    if (close + 1 < t.size()) {
      if (t[close + 1] != '@') throw ParseError("expected '@' before the ring", close + 1);
      auto d = parse_descriptor(t.substr(close + 2));
      if (!R || R->descriptor()->str() != d->str()) ring = Ring::make(d);
    }
    if (!ring) throw UsageError("no ring given for the Witt vector");
    auto header = split_top(t.substr(2, semi - 2), ',');
    for (auto& h : header) {
      auto eq = h.find('=');
      if (eq == std::string::npos) throw ParseError("bad header entry '" + h + "'", 2);
      auto k = trim(h.substr(0, eq)), v = trim(h.substr(eq + 1));
      if (k == "p" && uint32_t(to_int(k, v)) != ring->p()) throw UsageError("header p does not match the ring");
      if (k == "N" && to_int(k, v) != int(split_top(body, ',').size()))
        throw UsageError("header N does not match the coordinate count");
    }
  }
  if (!ring) throw UsageError("no ring given for the Witt vector");
  std::vector<RingElement> c;
  for (auto& x : split_top(body, ',')) c.push_back(ring->parse(x));
  return WittVector::from_coords(ring, c);
}

ZinkElement parse_zink_entry(const std::string& text, const ZinkPtr& Z) {
  const RingPtr& R = Z->ring();
  const RingPtr& k = Z->residue();
  auto e = parse_expr(text);
  ExprOps<ZinkElement> ops;
  ops.from_int = [&Z](int64_t n) { return ZinkElement::from_int(Z, n); };
  ops.var = [&](const std::string& name, size_t pos) -> ZinkElement {
    if (name == "p") return ZinkElement::from_int(Z, R->p());
    if (name == "v") return zink_v(ZinkElement::one(Z));
    if (!R->has_var(name)) throw ParseError("unknown variable '" + name + "'", pos);
    RingElement a = R->var(name);
    if (R->in_max_ideal(a)) return ZinkElement::from_m(Z, {a});
    RingElement r = R->residue(a);
    if (R->section(r) != a)
      throw UsageError("variable '" + name + "' is neither in m nor a Teichmueller representative");
    return ZinkElement(Z, WittVector::teichmuller(k, Z->precision(), r), {});
  };
  ops.add = [](const ZinkElement& a, const ZinkElement& b) { return zink_add(a, b); };
  ops.sub = [](const ZinkElement& a, const ZinkElement& b) { return zink_sub(a, b); };
  ops.mul = [](const ZinkElement& a, const ZinkElement& b) { return zink_mul(a, b); };
  ops.neg = [](const ZinkElement& a) { return zink_neg(a); };
  ops.int_env = {{"p", int64_t(R->p())}};
  return eval_expr(*e, ops);
}

WindowSpec parse_window_spec(const std::string& text) {
  WindowSpec s;
  bool have_h = false, have_d = false;
  for (auto& [k, v] : key_values(text)) {
    if (k == "frame") {
      if (v != "zink" && v != "witt") throw UsageError("frame must be zink or witt, got '" + v + "'");
      s.frame = v;
    } else if (k == "ring") {
      s.ring = parse_descriptor(v);
    } else if (k == "support") {
      s.support = to_int(k, v);
    } else if (k == "N") {
      s.N = to_int(k, v);
    } else if (k == "h") {
      s.h = to_int(k, v);
      have_h = true;
    } else if (k == "d") {
      s.d = to_int(k, v);
      have_d = true;
    } else if (k == "psi") {
      s.psi = parse_matrix(v);
    } else {
      throw UsageError("unknown key '" + k + "'");
    }
  }
  if (!s.ring) throw UsageError("window spec needs 'ring'");
  if (!have_h || !have_d) throw UsageError("window spec needs 'h' and 'd'");
  if (s.d < 0 || s.d > s.h) throw UsageError("window spec needs 0 <= d <= h");
  if (s.h > 0 && (int(s.psi.size()) != s.h))
    throw UsageError("psi must have h = " + std::to_string(s.h) + " rows");
  for (auto& row : s.psi)
    if (int(row.size()) != s.h) throw UsageError("psi rows must have h = " + std::to_string(s.h) + " entries");
  return s;
}

WindowSpec read_window_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_window_spec(ss.str());
}

std::shared_ptr<const ZinkFrame> build_frame(const WindowSpec& s) {
  auto R = Ring::make(s.ring);
  if (s.frame == "witt") return ZinkFrame::witt(R, s.N);
  return ZinkFrame::make(R, s.support);
}

Window<ZinkElement> build_window(const WindowSpec& s) {
  auto F = build_frame(s);
  Matrix<ZinkElement> psi;
  for (auto& row : s.psi) {
    Vector<ZinkElement> r;
    for (auto& x : row) r.push_back(parse_zink_entry(x, F->zink()));
    psi.push_back(r);
  }
  return window_make<ZinkElement>(F, s.h, s.d, psi);
}

BreuilSpec parse_breuil_spec(const std::string& text) {
  BreuilSpec s;
  for (auto& [k, v] : key_values(text)) {
    if (k == "k") s.k = parse_descriptor(v);
    else if (k == "N") s.N = to_int(k, v);
    else if (k == "M") s.M = to_int(k, v);
    else if (k == "sigma") s.sigma = v;
    else if (k == "E") s.E = v;
    else if (k == "h") s.h = to_int(k, v);
    else if (k == "d") s.d = to_int(k, v);
    else if (k == "phi") s.phi = parse_matrix(v);
    else if (k == "psi") s.psi = parse_matrix(v);
    else throw UsageError("unknown key '" + k + "'");
  }
  if (!s.k) throw UsageError("Breuil spec needs 'k'");
  if (int(s.phi.size()) != s.h || int(s.psi.size()) != s.h)
    throw UsageError("phi and psi must have h = " + std::to_string(s.h) + " rows");
  return s;
}

}  // namespace wz::cli
