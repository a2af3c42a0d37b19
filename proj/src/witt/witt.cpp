#include "wz/witt.hpp"

#include <atomic>

#include "wz/kernels.hpp"

namespace wz {

namespace {

std::atomic<WittBackend> g_backend{WittBackend::Auto};

int log_p(uint32_t D, uint32_t p) {
  int k = 0;
  while (D > 1) {
    D /= p;
    ++k;
  }
  return k;
}

uint64_t ipow(uint64_t p, int k) {
  uint64_t r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

void check_same(const WittVector& x, const WittVector& y) {
  if (x.ring() != y.ring()) throw UsageError("Witt vectors over different rings");
  if (x.length() != y.length())
    throw UsageError("Witt vectors of different lengths " + std::to_string(x.length()) + " and " +
                     std::to_string(y.length()));
}

// ---------------------------------------------------------------------------
// Ghost-lift backend: R = A/L with A the torsion-free lift. Witt vectors of
// length N over A/p^K determine those over R once K >= log_p(D) + N - 1.

class LiftCtx {
 public:
  LiftCtx(const Ring& R, int N) : R_(R), p_(R.p()), n_(R.rank()) {
    K_ = log_p(R.modulus(), p_) + std::max(N, 1) - 1;
    const uint64_t Q = ipow(p_, K_);
    if (Q >= kernels::kMaxModulus)
      throw EnvelopeExceeded("ghost lift needs modulus " + std::to_string(p_) + "^" +
                             std::to_string(K_) + " beyond 2^24");
    Q_ = uint32_t(Q);
    A_ = ModAlgebra(R.lift(), Q_);
  }
  static bool fits(const Ring& R, int N) {
    return ipow(R.p(), log_p(R.modulus(), R.p()) + std::max(N, 1) - 1) < kernels::kMaxModulus;
  }

  Vec lift(const RingElement& x) const { return x.coords(); }
  Vec one() const { return A_.one(); }
  Vec scalar(int64_t k) const {
    int64_t r = k % int64_t(Q_);
    if (r < 0) r += Q_;
    Vec v = A_.one();
    for (auto& c : v) c = uint32_t(uint64_t(c) * uint64_t(r) % Q_);
    return v;
  }
  Vec mul(const Vec& a, const Vec& b) const {
    Vec o(n_);
    A_.mul(a.data(), b.data(), o.data());
    return o;
  }
  Vec add(const Vec& a, const Vec& b) const {
    Vec o(n_);
    A_.add(a.data(), b.data(), o.data());
    return o;
  }
  Vec sub(const Vec& a, const Vec& b) const {
    Vec o(n_);
    A_.sub(a.data(), b.data(), o.data());
    return o;
  }
  Vec scale(const Vec& a, uint64_t k) const {
    Vec o(n_);
    k %= Q_;
    for (int i = 0; i < n_; ++i) o[i] = uint32_t(a[i] * k % Q_);
    return o;
  }
  Vec pth(const Vec& a) const {
    Vec r = a;
    for (uint32_t k = 1; k < p_; ++k) r = mul(r, a);
    return r;
  }

  std::vector<Vec> ghost(const std::vector<Vec>& x, int M) const {
    std::vector<Vec> g, pw;
    for (int m = 0; m < M; ++m) {
      for (auto& v : pw) v = pth(v);
      pw.push_back(m < int(x.size()) ? x[m] : Vec(n_, 0));
      Vec w(n_, 0);
      uint64_t pi = 1;
      for (int i = 0; i <= m; ++i, pi *= p_) w = add(w, scale(pw[i], pi));
      g.push_back(w);
    }
    return g;
  }

  std::vector<RingElement> solve(const std::vector<Vec>& g) const {
    std::vector<Vec> z, pw;
    std::vector<RingElement> out;
    const uint32_t D = R_.modulus();
    for (int m = 0; m < int(g.size()); ++m) {
      for (auto& v : pw) v = pth(v);
      Vec r = g[m];
      uint64_t pi = 1;
      for (int i = 0; i < m; ++i, pi *= p_) r = sub(r, scale(pw[i], pi));
      const uint64_t pm = ipow(p_, m);
      for (auto& c : r) {
        if (c % pm) throw PropertyViolation("ghost-lift solve: inexact division by p^" + std::to_string(m));
        c = uint32_t(c / pm);
      }
      pw.push_back(r);
      Vec red(n_);
      for (int i = 0; i < n_; ++i) red[i] = r[i] % D;
      out.push_back(R_.element(red));
    }
    return out;
  }

 private:
  const Ring& R_;
  uint32_t p_;
  int n_;
  int K_ = 0;
  uint32_t Q_ = 1;
  ModAlgebra A_;
};

// ---------------------------------------------------------------------------
// Polynomial backend

struct PowerTable {
  std::vector<std::vector<RingElement>> t;  // t[slot][e]
  const RingElement& get(int slot, int e) const { return t[slot][e]; }
};

PowerTable powers(const Ring& R, const std::vector<const WittVector*>& blocks, int maxlen,
                  uint32_t p) {
  PowerTable P;
  P.t.resize(16);
  for (int b = 0; b < int(blocks.size()); ++b)
    for (int i = 0; i < maxlen && i < blocks[b]->length(); ++i) {
      const int top = int(ipow(p, maxlen - 1 - i + (b == 0 ? 1 : 0)));
      auto& row = P.t[b * kYSlot + i];
      row.push_back(R.one());
      for (int e = 1; e <= top; ++e) row.push_back(R.mul(row.back(), (*blocks[b])[i]));
    }
  return P;
}

RingElement eval(const IntPoly& f, const Ring& R, const PowerTable& T) {
  const uint32_t D = R.modulus();
  RingElement acc = R.zero();
  for (const auto& [m, c] : f.terms) {
    uint64_t cm = mpz_fdiv_ui(c.get_mpz_t(), D);
    if (!cm) continue;
    RingElement term = R.from_int(int64_t(cm));
    for (int v = 0; v < 16; ++v)
      if (m.e[v]) term = R.mul(term, T.get(v, m.e[v]));
    acc = R.add(acc, term);
  }
  return acc;
}

bool poly_preferred(uint32_t p, int N) {
  const int n = std::max(N - 1, 0);
  return universal_within_envelope(p, n) && ipow(p, n) <= 27;
}

WittBackend resolve(WittBackend b, const Ring& R, int N) {
  if (b == WittBackend::Auto) b = g_backend.load();
  if (b != WittBackend::Auto) return b;
  if (poly_preferred(R.p(), N) || !LiftCtx::fits(R, N)) return WittBackend::Polynomial;
  return WittBackend::GhostLift;
}

enum class Op { Add, Mul };

WittVector combine(const WittVector& x, const WittVector& y, Op op, WittBackend b) {
  check_same(x, y);
  const Ring& R = *x.ring();
  const int N = x.length();
  if (N == 0) return x;
  if (resolve(b, R, N) == WittBackend::Polynomial) {
    auto U = universal_polynomials(R.p(), N - 1);
    PowerTable T = powers(R, {&x, &y}, N, R.p());
    std::vector<RingElement> out;
    const auto& polys = op == Op::Add ? U->S : U->P;
    for (int n = 0; n < N; ++n) out.push_back(eval(polys[n], R, T));
    return WittVector(x.ring(), out);
  }
  LiftCtx L(R, N);
  std::vector<Vec> xl, yl;
  for (auto& c : x.coords()) xl.push_back(L.lift(c));
  for (auto& c : y.coords()) yl.push_back(L.lift(c));
  auto gx = L.ghost(xl, N), gy = L.ghost(yl, N);
  std::vector<Vec> g;
  for (int m = 0; m < N; ++m) g.push_back(op == Op::Add ? L.add(gx[m], gy[m]) : L.mul(gx[m], gy[m]));
  return WittVector(x.ring(), L.solve(g));
}

}  // namespace

void set_default_witt_backend(WittBackend b) { g_backend.store(b); }
WittBackend default_witt_backend() { return g_backend.load(); }

// ---------------------------------------------------------------------------

WittVector WittVector::zero(RingPtr R, int N) {
  std::vector<RingElement> c(N, R->zero());
  return WittVector(std::move(R), std::move(c));
}

WittVector WittVector::one(RingPtr R, int N) { return teichmuller(R, N, R->one()); }

WittVector WittVector::teichmuller(RingPtr R, int N, const RingElement& a) {
  std::vector<RingElement> c(N, R->zero());
  if (N > 0) c[0] = a;
  return WittVector(std::move(R), std::move(c));
}

WittVector WittVector::from_coords(RingPtr R, const std::vector<RingElement>& c) {
  for (auto& x : c)
    if (x.ring() != R.get()) throw UsageError("coordinate from a different ring");
  return WittVector(std::move(R), c);
}

WittVector WittVector::from_int(RingPtr R, int N, int64_t k) {
  if (N == 0) return zero(R, 0);
  if (k >= 0 && k <= 1) return k ? one(R, N) : zero(R, N);
  if (LiftCtx::fits(*R, N)) {
    LiftCtx L(*R, N);
    std::vector<Vec> g(N, L.scalar(k));
    return WittVector(R, L.solve(g));
  }
  // binary expansion with the polynomial backend
  const bool neg = k < 0;
  uint64_t a = neg ? uint64_t(-(k + 1)) + 1 : uint64_t(k);
  WittVector r = zero(R, N), b = one(R, N);
  while (a) {
    if (a & 1) r = witt_add(r, b, WittBackend::Polynomial);
    a >>= 1;
    if (a) b = witt_add(b, b, WittBackend::Polynomial);
  }
  return neg ? witt_neg(r, WittBackend::Polynomial) : r;
}

bool WittVector::is_zero() const {
  for (auto& c : c_)
    if (!c.is_zero()) return false;
  return true;
}

bool WittVector::operator<(const WittVector& o) const {
  if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
  return false;
}

WittVector WittVector::truncate(int n) const {
  std::vector<RingElement> c(c_.begin(), c_.begin() + std::min<size_t>(n, c_.size()));
  return WittVector(R_, std::move(c));
}

WittVector WittVector::padded(int n) const {
  std::vector<RingElement> c = c_;
  while (int(c.size()) < n) c.push_back(R_->zero());
  return WittVector(R_, std::move(c));
}

int WittVector::valuation() const {
  for (int i = 0; i < length(); ++i)
    if (!c_[i].is_zero()) return i;
  return length();
}

std::string WittVector::str() const {
  std::string s = "W[p=" + std::to_string(R_->p()) + ",N=" + std::to_string(length()) + ";";
  for (int i = 0; i < length(); ++i) s += (i ? "," : " ") + R_->show(c_[i]);
  return s + "]@" + R_->name();
}

// ---------------------------------------------------------------------------

WittVector witt_add(const WittVector& x, const WittVector& y, WittBackend b) {
  return combine(x, y, Op::Add, b);
}

WittVector witt_mul(const WittVector& x, const WittVector& y, WittBackend b) {
  return combine(x, y, Op::Mul, b);
}

WittVector witt_neg(const WittVector& x, WittBackend b) {
  const Ring& R = *x.ring();
  if (R.p() != 2) {
    std::vector<RingElement> c;
    for (auto& v : x.coords()) c.push_back(R.neg(v));
    return WittVector(x.ring(), c);
  }
  if (resolve(b, R, x.length()) == WittBackend::GhostLift) {
    LiftCtx L(R, x.length());
    std::vector<Vec> xl;
    for (auto& c : x.coords()) xl.push_back(L.lift(c));
    auto g = L.ghost(xl, x.length());
    for (auto& v : g) v = L.sub(Vec(v.size(), 0), v);
    return WittVector(x.ring(), L.solve(g));
  }
  return witt_mul(WittVector::from_int(x.ring(), x.length(), -1), x, b);
}

WittVector witt_sub(const WittVector& x, const WittVector& y, WittBackend b) {
  return witt_add(x, witt_neg(y, b), b);
}

WittVector witt_scale(const WittVector& x, int64_t k, WittBackend b) {
  return witt_mul(WittVector::from_int(x.ring(), x.length(), k), x, b);
}

WittVector witt_pow(const WittVector& x, uint64_t e, WittBackend b) {
  WittVector r = WittVector::one(x.ring(), x.length()), base = x;
  while (e) {
    if (e & 1) r = witt_mul(r, base, b);
    e >>= 1;
    if (e) base = witt_mul(base, base, b);
  }
  return r;
}

// Coordinate i of x*y is y_i w_i(x) plus terms in y_0..y_{i-1}; solve for y.
WittVector witt_inverse(const WittVector& x, WittBackend b) {
  const Ring& R = *x.ring();
  const int N = x.length();
  if (N == 0) return x;
  if (!R.is_unit(x[0])) throw DomainError("Witt vector " + x.str() + " is not a unit");
  auto gh = ghost(x);
  std::vector<RingElement> y(N, R.zero());
  for (int i = 0; i < N; ++i) {
    WittVector partial(x.ring(), y);
    RingElement rest = witt_mul(x, partial, b)[i];
    RingElement target = i == 0 ? R.one() : R.zero();
    y[i] = R.mul(R.sub(target, rest), R.inverse(gh[i]));
  }
  return WittVector(x.ring(), y);
}

WittVector frobenius(const WittVector& x, Truncation t, WittBackend b) {
  const Ring& R = *x.ring();
  const int N = x.length();
  if (t == Truncation::Stationary) {
    if (R.char_exponent() != 1)
      throw PrecisionExhausted("stationary Frobenius needs characteristic p, ring " + R.name() +
                               " has characteristic " + std::to_string(R.p()) + "^" +
                               std::to_string(R.char_exponent()));
    std::vector<RingElement> c;
    for (auto& v : x.coords()) c.push_back(R.pow(v, R.p()));
    return WittVector(x.ring(), c);
  }
  if (N <= 1) throw PrecisionExhausted("Frobenius needs Witt length at least 2, got " + std::to_string(N));
  if (resolve(b, R, N) == WittBackend::Polynomial) {
    auto U = universal_polynomials(R.p(), N - 1);
    PowerTable T = powers(R, {&x}, N, R.p());
    std::vector<RingElement> out;
    for (int n = 0; n + 1 < N; ++n) out.push_back(eval(U->F[n], R, T));
    return WittVector(x.ring(), out);
  }
  LiftCtx L(R, N);
  std::vector<Vec> xl;
  for (auto& c : x.coords()) xl.push_back(L.lift(c));
  auto g = L.ghost(xl, N);
  g.erase(g.begin());
  return WittVector(x.ring(), L.solve(g));
}

WittVector verschiebung(const WittVector& x, bool keep_length) {
  std::vector<RingElement> c;
  c.push_back(x.ring()->zero());
  for (auto& v : x.coords()) c.push_back(v);
  if (keep_length) c.pop_back();
  return WittVector(x.ring(), c);
}

std::vector<RingElement> ghost(const WittVector& x) {
  const Ring& R = *x.ring();
  std::vector<RingElement> g, pw;
  for (int m = 0; m < x.length(); ++m) {
    for (auto& v : pw) v = R.pow(v, R.p());
    pw.push_back(x[m]);
    RingElement w = R.zero();
    uint64_t pi = 1;
    for (int i = 0; i <= m; ++i, pi *= R.p()) w = R.add(w, R.scale(pw[i], int64_t(pi % R.modulus())));
    g.push_back(w);
  }
  return g;
}

WittVector witt_teichmuller_sum(const RingPtr& R, int N, const std::vector<RingElement>& a) {
  if (N == 0) return WittVector::zero(R, 0);
  if (LiftCtx::fits(*R, N)) {
    LiftCtx L(*R, N);
    std::vector<Vec> pw;
    for (auto& x : a) pw.push_back(L.lift(x));
    std::vector<Vec> g;
    for (int m = 0; m < N; ++m) {
      if (m)
        for (auto& v : pw) v = L.pth(v);
      Vec w(R->rank(), 0);
      uint64_t pi = 1;
      // p^i vanishes modulo the lift modulus p^K once it exceeds it
      for (size_t i = 0; i < pw.size() && pi < kernels::kMaxModulus; ++i, pi *= R->p())
        w = L.add(w, L.scale(pw[i], pi));
      g.push_back(w);
    }
    return WittVector(R, L.solve(g));
  }
  WittVector s = WittVector::zero(R, N);
  for (size_t i = a.size(); i-- > 0;)
    s = witt_add(witt_scale(s, R->p()), WittVector::teichmuller(R, N, a[i]));
  return s;
}

}  // namespace wz
