#include "wz/universal.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <unordered_map>

#include "wz/errors.hpp"

namespace wz {

int Mono::degree() const {
  int d = 0;
  for (auto v : e) d += v;
  return d;
}

size_t MonoHash::operator()(const Mono& m) const {
  uint64_t a, b;
  std::memcpy(&a, m.e.data(), 8);
  std::memcpy(&b, m.e.data() + 8, 8);
  uint64_t h = a * 0x9E3779B97F4A7C15ull ^ (b + 0x632BE59BD9B4E019ull + (a << 6) + (a >> 2));
  return size_t(h ^ (h >> 29));
}

IntPoly IntPoly::constant(const mpz_class& c) {
  IntPoly r;
  if (c != 0) r.terms.push_back({Mono{}, c});
  return r;
}

IntPoly IntPoly::var(int slot, unsigned exp) {
  if (exp > 255) throw EnvelopeExceeded("exponent above 255 in universal polynomial");
  IntPoly r;
  Mono m;
  m.e[slot] = uint8_t(exp);
  r.terms.push_back({m, 1});
  return r;
}

std::string IntPoly::str() const {
  if (terms.empty()) return "0";
  std::string s;
  // Higher total degree first, then by variable order; stable for printing.
  std::vector<size_t> order(terms.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    int da = terms[a].first.degree(), db = terms[b].first.degree();
    if (da != db) return da < db;
    return terms[b].first < terms[a].first;
  });
  for (size_t k = 0; k < order.size(); ++k) {
    const auto& [m, c] = terms[order[k]];
    std::string mono;
    for (int v = 0; v < 16; ++v) {
      if (!m.e[v]) continue;
      if (!mono.empty()) mono += "*";
      mono += (v < kYSlot ? "X" : "Y") + std::to_string(v % kYSlot);
      if (m.e[v] > 1) mono += "^" + std::to_string(m.e[v]);
    }
    mpz_class a = abs(c);
    std::string term;
    if (mono.empty()) term = a.get_str();
    else if (a == 1) term = mono;
    else term = a.get_str() + "*" + mono;
    if (k == 0) s = (c < 0 ? "-" : "") + term;
    else s += (c < 0 ? "-" : "+") + term;
  }
  return s;
}

namespace {

IntPoly from_map(std::unordered_map<Mono, mpz_class, MonoHash>& acc) {
  IntPoly r;
  r.terms.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) r.terms.emplace_back(m, std::move(c));
  std::sort(r.terms.begin(), r.terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (r.terms.size() > kMaxUniversalTerms)
    throw EnvelopeExceeded("universal polynomial exceeds " + std::to_string(kMaxUniversalTerms) +
                           " terms");
  return r;
}

IntPoly merge(const IntPoly& a, const IntPoly& b, bool negate_b) {
  IntPoly r;
  r.terms.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a.terms[i].first < b.terms[j].first)) {
      r.terms.push_back(a.terms[i++]);
    } else if (i == a.size() || b.terms[j].first < a.terms[i].first) {
      r.terms.push_back(b.terms[j]);
      if (negate_b) r.terms.back().second = -r.terms.back().second;
      ++j;
    } else {
      mpz_class c = a.terms[i].second;
      if (negate_b) c -= b.terms[j].second;
      else c += b.terms[j].second;
      if (c != 0) r.terms.push_back({a.terms[i].first, c});
      ++i;
      ++j;
    }
  }
  return r;
}

}  // namespace

IntPoly operator+(const IntPoly& a, const IntPoly& b) { return merge(a, b, false); }
IntPoly operator-(const IntPoly& a, const IntPoly& b) { return merge(a, b, true); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  std::unordered_map<Mono, mpz_class, MonoHash> acc;
  acc.reserve(std::min(a.size() * b.size(), kMaxUniversalTerms) + 16);
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Mono m;
      for (int v = 0; v < 16; ++v) {
        unsigned s = unsigned(ma.e[v]) + mb.e[v];
        if (s > 255) throw EnvelopeExceeded("exponent above 255 in universal polynomial");
        m.e[v] = uint8_t(s);
      }
      mpz_addmul(acc[m].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    }
  return from_map(acc);
}

IntPoly scale(const IntPoly& a, const mpz_class& c) {
  if (c == 0) return {};
  IntPoly r = a;
  for (auto& t : r.terms) t.second *= c;
  return r;
}

IntPoly pow(const IntPoly& a, unsigned e) {
  IntPoly r = IntPoly::constant(1), b = a;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

IntPoly divexact_checked(const IntPoly& a, const mpz_class& d) {
  IntPoly r = a;
  for (auto& t : r.terms) {
    if (!mpz_divisible_p(t.second.get_mpz_t(), d.get_mpz_t()))
      throw PropertyViolation("inexact division by " + d.get_str() + " in Witt recursion");
    mpz_divexact(t.second.get_mpz_t(), t.second.get_mpz_t(), d.get_mpz_t());
  }
  return r;
}

namespace {

mpz_class ppow(uint32_t p, int k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, unsigned(k));
  return r;
}

unsigned upow(uint32_t p, int k) {
  unsigned r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

IntPoly pth_power(const IntPoly& a, uint32_t p) { return pow(a, p); }

}  // namespace

IntPoly witt_poly(uint32_t p, int m, bool y) {
  IntPoly r;
  const int base = y ? kYSlot : 0;
  for (int i = 0; i <= m; ++i) r = r + scale(IntPoly::var(base + i, upow(p, m - i)), ppow(p, i));
  return r;
}

bool universal_within_envelope(uint32_t p, int n) {
  if (n < 0 || n > kMaxUniversalIndex) return false;
  uint64_t q = 1;
  for (int i = 0; i < n; ++i) q *= p;
  return q <= 255;
}

namespace {

std::shared_ptr<const UniversalPolynomials> compute(uint32_t p, int n) {
  auto U = std::make_shared<UniversalPolynomials>();
  U->p = p;
  U->n = n;
  if (n == 0) {
    U->S = {IntPoly::var(0) + IntPoly::var(kYSlot)};
    U->P = {IntPoly::var(0) * IntPoly::var(kYSlot)};
    U->Spow = U->S;
    U->Ppow = U->P;
    return U;
  }
  auto prev = universal_polynomials(p, n - 1);
  U->S = prev->S;
  U->P = prev->P;
  U->F = prev->F;
  // raise cached powers from exponent p^{n-1-i} to p^{n-i}
  for (int i = 0; i < n; ++i) {
    U->Spow.push_back(pth_power(prev->Spow[i], p));
    U->Ppow.push_back(pth_power(prev->Ppow[i], p));
  }
  for (int i = 0; i + 1 < n; ++i) U->Fpow.push_back(pth_power(prev->Fpow[i], p));
  const mpz_class pn = ppow(p, n);
  IntPoly s = witt_poly(p, n, false) + witt_poly(p, n, true);
  IntPoly m = witt_poly(p, n, false) * witt_poly(p, n, true);
  for (int i = 0; i < n; ++i) {
    const mpz_class pi = ppow(p, i);
    s = s - scale(U->Spow[i], pi);
    m = m - scale(U->Ppow[i], pi);
  }
  U->S.push_back(divexact_checked(s, pn));
  U->P.push_back(divexact_checked(m, pn));
  U->Spow.push_back(U->S.back());
  U->Ppow.push_back(U->P.back());
  // F_{n-1} from w_{n-1}(F) = w_n(X)
  IntPoly f = witt_poly(p, n, false);
  for (int i = 0; i + 1 < n; ++i) f = f - scale(U->Fpow[i], ppow(p, i));
  U->F.push_back(divexact_checked(f, ppow(p, n - 1)));
  U->Fpow.push_back(U->F.back());
  return U;
}

struct Entry {
  std::once_flag once;
  std::shared_ptr<const UniversalPolynomials> value;
};

}  // namespace

std::shared_ptr<const UniversalPolynomials> universal_polynomials(uint32_t p, int n) {
  if (!universal_within_envelope(p, n))
    throw EnvelopeExceeded("universal polynomials for p=" + std::to_string(p) +
                           ", n=" + std::to_string(n) +
                           " are outside the supported envelope (n <= 6, p^n <= 255)");
  static std::mutex mu;
  static std::map<std::pair<uint32_t, int>, std::shared_ptr<Entry>> table;
  std::shared_ptr<Entry> e;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = table[{p, n}];
    if (!slot) slot = std::make_shared<Entry>();
    e = slot;
  }
  std::call_once(e->once, [&] { e->value = compute(p, n); });
  return e->value;
}

std::string verify_universal_identities(const UniversalPolynomials& U) {
  const uint32_t p = U.p;
  auto slow_pow = [](const IntPoly& a, unsigned e) {
    IntPoly r = IntPoly::constant(1);
    for (unsigned k = 0; k < e; ++k) r = r * a;
    return r;
  };
  for (int m = 0; m <= U.n; ++m) {
    IntPoly ws, wp;
    for (int i = 0; i <= m; ++i) {
      const unsigned e = upow(p, m - i);
      ws = ws + scale(slow_pow(U.S[i], e), ppow(p, i));
      wp = wp + scale(slow_pow(U.P[i], e), ppow(p, i));
    }
    if (!(ws == witt_poly(p, m, false) + witt_poly(p, m, true)))
      return "sum identity fails at m=" + std::to_string(m);
    if (!(wp == witt_poly(p, m, false) * witt_poly(p, m, true)))
      return "product identity fails at m=" + std::to_string(m);
  }
  for (int m = 0; m < int(U.F.size()); ++m) {
    IntPoly wf;
    for (int i = 0; i <= m; ++i) wf = wf + scale(slow_pow(U.F[i], upow(p, m - i)), ppow(p, i));
    if (!(wf == witt_poly(p, m + 1, false)))
      return "Frobenius identity fails at m=" + std::to_string(m);
  }
  return "";
}

}  // namespace wz
