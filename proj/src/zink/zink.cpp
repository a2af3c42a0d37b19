#include "wz/zink.hpp"

#include <algorithm>

namespace wz {

namespace {

mpz_class ppow(uint32_t p, unsigned long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, k);
  return r;
}

// Integral Witt vector (coordinates mod p^a) read in R.
WittVector int_vector(const RingPtr& R, const std::vector<mpz_class>& z, int L) {
  const mpz_class pa = ppow(R->p(), R->char_exponent());
  std::vector<RingElement> c;
  for (int i = 0; i < L; ++i) {
    mpz_class v = i < int(z.size()) ? mpz_class(z[i] % pa) : mpz_class(0);
    if (v < 0) v += pa;
    c.push_back(R->from_int(v.get_si()));
  }
  return WittVector(R, c);
}

int support_mod(const std::vector<mpz_class>& z, const mpz_class& pa) {
  int s = 0;
  for (int i = 0; i < int(z.size()); ++i)
    if (z[i] % pa != 0) s = i + 1;
  return s;
}

// 2^e, or 0 once it vanishes modulo 2^K.
mpz_class two_pow_mod(unsigned long e, int K) { return e >= unsigned(K) ? mpz_class(0) : ppow(2, e); }

// Ghost components of u0 (p = 2) modulo 2^K: 1 - 2^{2^{m+1}-1}.
std::vector<mpz_class> u0_ghost(int L, int K) {
  std::vector<mpz_class> g;
  for (int m = 0; m < L; ++m)
    g.push_back(1 - (m >= 40 ? mpz_class(0) : two_pow_mod((2ul << m) - 1, K)));
  return g;
}

// Ghost components of v(u0) - p modulo p^K, or of its negative.
std::vector<mpz_class> twist_ghost(uint32_t p, int L, bool negate, int K) {
  std::vector<mpz_class> g;
  for (int m = 0; m < L; ++m) {
    mpz_class v;
    if (p == 2) v = -(m >= 40 ? mpz_class(0) : two_pow_mod(1ul << m, K));
    else v = m == 0 ? mpz_class(-mpz_class(p)) : mpz_class(0);
    g.push_back(negate ? mpz_class(-v) : v);
  }
  return g;
}

// Over a field W(k) = W(R) and all operations act on the W(k)-part.
bool over_field(const ZinkPtr& Z) { return Z->ring()->is_field(); }

void check_same(const ZinkElement& x, const ZinkElement& y) {
  if (!x.zink() || x.zink() != y.zink()) throw UsageError("Zink elements over different rings");
}

void check_precision(const ZinkPtr& Z, int n, int L, const char* op) {
  if (n < Z->needed_precision(L))
    throw PrecisionExhausted(std::string(op) + ": W(k)-precision " + std::to_string(n) +
                             " is below the " + std::to_string(Z->needed_precision(L)) +
                             " needed for working length " + std::to_string(L));
}

WittVector m_vector(const ZinkElement& x, int L) {
  const auto& R = x.zink()->ring();
  std::vector<RingElement> c(L, R->zero());
  for (auto& [i, v] : x.m())
    if (i < L) c[i] = v;
  return WittVector(R, c);
}

ZinkElement decompose_impl(const ZinkPtr& Z, const WittVector& X, const WittVector& wk,
                           bool certified) {
  const int L = X.length();
  const Ring& R = *Z->ring();
  WittVector Y = witt_sub(X, Z->section(wk, L));
  std::map<int, RingElement> m;
  for (int i = 0; i < L; ++i) {
    if (!R.in_max_ideal(Y[i]))
      throw PropertyViolation("residue leakage: coordinate " + std::to_string(i) + " of the m-part is " +
                              R.show(Y[i]) + ", not in the maximal ideal");
    if (!Y[i].is_zero()) m.emplace(i, Y[i]);
  }
  if (L > 0 && !Y[L - 1].is_zero()) {
    if (certified)
      throw PropertyViolation("certified support bound " + std::to_string(L - 1) +
                              " broken: coordinate " + std::to_string(L - 1) + " is nonzero");
    throw SupportOverflow("m-part has no finite support within the tested length " + std::to_string(L));
  }
  if (!m.empty() && m.rbegin()->first >= Z->support_bound())
    throw SupportOverflow("m-part support " + std::to_string(m.rbegin()->first + 1) +
                          " exceeds the bound B=" + std::to_string(Z->support_bound()));
  return ZinkElement(Z, wk, std::move(m));
}

}  // namespace

std::vector<mpz_class> coords_from_ghost(uint32_t p, const std::vector<mpz_class>& ghost, int K) {
  std::vector<mpz_class> z;
  const mpz_class Q = ppow(p, K);
  for (int m = 0; m < int(ghost.size()); ++m) {
    mpz_class s = ghost[m];
    for (int i = 0; i < m; ++i) {
      mpz_class t;
      mpz_powm(t.get_mpz_t(), z[i].get_mpz_t(), ppow(p, m - i).get_mpz_t(), Q.get_mpz_t());
      s -= ppow(p, i) * t;
    }
    s %= Q;
    if (s < 0) s += Q;
    const mpz_class pm = ppow(p, m);
    if (s % pm != 0) throw PropertyViolation("ghost components not integral at index " + std::to_string(m));
    s /= pm;
    z.push_back(mpz_class(s % ppow(p, std::max(K - m, 0))));
  }
  return z;
}

// ---------------------------------------------------------------------------

ZinkPtr ZinkRing::make(RingPtr R, int support_bound, int precision) {
  if (support_bound < 1) throw UsageError("support bound must be at least 1");
  std::shared_ptr<ZinkRing> Z(new ZinkRing());
  Z->R_ = R;
  Z->k_ = R->residue_field();
  Z->B_ = support_bound;
  const uint32_t p = R->p();
  const int a = R->char_exponent();
  const int e = R->nilpotency();
  int c = 0;
  for (uint64_t q = 1; q < uint64_t(e); q *= p) ++c;
  Z->c_ = c;
  Z->u0_outside_ = p == 2 && a >= 2;
  // Supports of v(u0) - p and its negative, read modulo p^a. For p = 2 this
  // is -[2], of support <= c by the product bound; for odd p the valuations
  // of the coordinates of v(1) - p grow like v_{i+1} = p v_i - 1, so the
  // vector vanishes mod p^a past the computed support. The tail of three
  // zero coordinates is asserted.
  const int T = std::max(2 * a, c) + 6;
  const mpz_class pa = ppow(p, a);
  auto tw = coords_from_ghost(p, twist_ghost(p, T, false, a + T + 4), a + T + 4);
  auto tn = coords_from_ghost(p, twist_ghost(p, T, true, a + T + 4), a + T + 4);
  Z->d_ = support_mod(tw, pa);
  Z->dneg_ = support_mod(tn, pa);
  if (Z->d_ > T - 3 || Z->dneg_ > T - 3)
    throw PropertyViolation("v(u0) - p has no short support modulo p^a");
  int need = std::max({Z->bound_sum(support_bound) + 1, Z->bound_f(support_bound) + 2,
                       Z->bound_v(support_bound) + 1, Z->bound_f1(support_bound) + 2,
                       support_bound + std::max(c, 1) + 2});
  Z->min_precision_ = R->is_field() ? 1 : need + a;
  Z->n_ = precision > 0 ? precision : need + a + 3;
  if (Z->n_ < Z->needed_precision(1))
    throw UsageError("precision " + std::to_string(Z->n_) + " is below the characteristic exponent");
  // integral vectors, computed once at the longest useful length
  const int Lmax = Z->n_ + 2;
  if (p == 2) {
    auto g = u0_ghost(Lmax, a + Lmax);
    Z->u0_ = coords_from_ghost(2, g, a + Lmax);
    const mpz_class Q = ppow(2, a + Lmax);
    std::vector<mpz_class> gi;
    for (auto& v : g) {
      mpz_class w;
      mpz_class r = v % Q;
      if (r < 0) r += Q;
      mpz_invert(w.get_mpz_t(), r.get_mpz_t(), Q.get_mpz_t());
      gi.push_back(w);
    }
    Z->u0inv_ = coords_from_ghost(2, gi, a + Lmax);
  } else {
    Z->u0_ = {1};
    Z->u0inv_ = {1};
  }
  Z->twist_ = coords_from_ghost(p, twist_ghost(p, Lmax, false, a + Lmax), a + Lmax);
  return Z;
}

std::string ZinkRing::name() const {
  return "Zink(" + R_->name() + ",B=" + std::to_string(B_) + ",n=" + std::to_string(n_) + ")";
}

WittVector ZinkRing::u0(int L) const { return int_vector(R_, u0_, L); }
WittVector ZinkRing::u0_inverse(int L) const { return int_vector(R_, u0inv_, L); }
WittVector ZinkRing::twist(int L) const { return int_vector(R_, twist_, L); }

WittVector ZinkRing::section(const WittVector& xi, int L) const {
  if (xi.ring() != k_) throw UsageError("W(k)-part over the wrong ring");
  if (xi.length() < needed_precision(L))
    throw PrecisionExhausted("section into W_" + std::to_string(L) + "(" + R_->name() +
                             ") needs W(k)-precision " + std::to_string(needed_precision(L)) + ", have " +
                             std::to_string(xi.length()));
  const int terms = std::min(xi.length(), needed_precision(L));
  std::vector<RingElement> a;
  for (int i = 0; i < terms; ++i) {
    RingElement r = xi[i];
    for (int j = 0; j < i; ++j) r = k_->frobenius_inverse(r);
    a.push_back(R_->section(r));
  }
  return witt_teichmuller_sum(R_, L, a);
}

int ZinkRing::bound_sum(int b) const { return b == 0 ? 0 : b + std::max(c_, 1) - 1; }
int ZinkRing::bound_f(int b) const { return b == 0 ? 0 : std::max(b + c_ - 2, 0); }
int ZinkRing::bound_v(int b) const {
  const int t1 = d_ ? bound_sum(d_) : 0;
  const int t2 = b ? bound_sum(b) + 1 : 0;
  return bound_sum(std::max(t1, t2));
}
int ZinkRing::bound_f1(int b) const {
  const int t = bound_sum(std::max(b, dneg_ ? bound_sum(dneg_) : 0));
  return t == 0 ? 0 : bound_sum(std::max(t - 1, 0));
}

// ---------------------------------------------------------------------------

ZinkElement::ZinkElement(ZinkPtr Z, WittVector wk, std::map<int, RingElement> m)
    : Z_(std::move(Z)), wk_(std::move(wk)) {
  if (wk_.ring() != Z_->residue()) throw UsageError("W(k)-part over the wrong ring");
  const Ring& R = *Z_->ring();
  for (auto& [i, v] : m) {
    if (v.ring() != &R) throw UsageError("m-part coordinate from a different ring");
    if (i < 0) throw UsageError("negative m-part index");
    if (!R.in_max_ideal(v))
      throw UsageError("m-part coordinate " + std::to_string(i) + " = " + R.show(v) +
                       " is not in the maximal ideal");
    if (v.is_zero()) continue;
    if (i >= Z_->support_bound())
      throw SupportOverflow("m-part index " + std::to_string(i) + " exceeds the bound B=" +
                            std::to_string(Z_->support_bound()));
    m_.emplace(i, v);
  }
}

ZinkElement ZinkElement::zero(const ZinkPtr& Z) {
  return ZinkElement(Z, WittVector::zero(Z->residue(), Z->precision()), {});
}
ZinkElement ZinkElement::one(const ZinkPtr& Z) {
  return ZinkElement(Z, WittVector::one(Z->residue(), Z->precision()), {});
}
ZinkElement ZinkElement::from_int(const ZinkPtr& Z, int64_t k) {
  return ZinkElement(Z, WittVector::from_int(Z->residue(), Z->precision(), k), {});
}
ZinkElement ZinkElement::from_wk(const ZinkPtr& Z, const WittVector& xi) { return ZinkElement(Z, xi, {}); }
ZinkElement ZinkElement::from_m(const ZinkPtr& Z, const std::vector<RingElement>& y) {
  std::map<int, RingElement> m;
  for (int i = 0; i < int(y.size()); ++i) m.emplace(i, y[i]);
  return ZinkElement(Z, WittVector::zero(Z->residue(), Z->precision()), m);
}

bool ZinkElement::operator==(const ZinkElement& o) const {
  if (Z_ != o.Z_) return false;
  const int n = std::min(precision(), o.precision());
  return m_ == o.m_ && wk_.truncate(n) == o.wk_.truncate(n);
}

bool ZinkElement::operator<(const ZinkElement& o) const {
  if (wk_ != o.wk_) return wk_ < o.wk_;
  return m_ < o.m_;
}

ZinkElement ZinkElement::with_precision(int n) const {
  ZinkElement r = *this;
  r.wk_ = n <= precision() ? wk_.truncate(n) : wk_.padded(n);
  return r;
}

std::string ZinkElement::str() const {
  std::string s = "Zink[wk=";
  for (int i = 0; i < wk_.length(); ++i) s += (i ? "," : "") + Z_->residue()->show(wk_[i]);
  s += "; m={";
  bool first = true;
  for (auto& [i, v] : m_) {
    s += (first ? "(" : ",(") + std::to_string(i) + "," + Z_->ring()->show(v) + ")";
    first = false;
  }
  return s + "}]@" + Z_->ring()->name();
}

WittVector embed(const ZinkElement& x, int L) {
  return witt_add(x.zink()->section(x.wk(), L), m_vector(x, L));
}

ZinkElement decompose(const ZinkPtr& Z, const WittVector& X, const WittVector& wk) {
  return decompose_impl(Z, X, wk, true);
}

ZinkElement zink_add(const ZinkElement& x, const ZinkElement& y) {
  check_same(x, y);
  const auto& Z = x.zink();
  const int n = std::min(x.precision(), y.precision());
  if (over_field(Z)) return ZinkElement(Z, witt_add(x.wk().truncate(n), y.wk().truncate(n)), {});
  const int L = Z->bound_sum(std::max(x.support(), y.support())) + 1;
  check_precision(Z, n, L, "add");
  return decompose(Z, witt_add(embed(x, L), embed(y, L)), witt_add(x.wk().truncate(n), y.wk().truncate(n)));
}

ZinkElement zink_neg(const ZinkElement& x) {
  const auto& Z = x.zink();
  if (over_field(Z)) return ZinkElement(Z, witt_neg(x.wk()), {});
  const int L = Z->bound_sum(x.support()) + 1;
  check_precision(Z, x.precision(), L, "neg");
  return decompose(Z, witt_neg(embed(x, L)), witt_neg(x.wk()));
}

ZinkElement zink_sub(const ZinkElement& x, const ZinkElement& y) { return zink_add(x, zink_neg(y)); }

ZinkElement zink_mul(const ZinkElement& x, const ZinkElement& y) {
  check_same(x, y);
  const auto& Z = x.zink();
  const int n = std::min(x.precision(), y.precision());
  if (over_field(Z)) return ZinkElement(Z, witt_mul(x.wk().truncate(n), y.wk().truncate(n)), {});
  const int L = Z->bound_sum(std::max(x.support(), y.support())) + 1;
  check_precision(Z, n, L, "mul");
  return decompose(Z, witt_mul(embed(x, L), embed(y, L)), witt_mul(x.wk().truncate(n), y.wk().truncate(n)));
}

ZinkElement zink_pow(const ZinkElement& x, uint64_t e) {
  ZinkElement r = ZinkElement::one(x.zink()).with_precision(x.precision()), b = x;
  while (e) {
    if (e & 1) r = zink_mul(r, b);
    e >>= 1;
    if (e) b = zink_mul(b, b);
  }
  return r;
}

ZinkElement zink_f(const ZinkElement& x) {
  const auto& Z = x.zink();
  if (over_field(Z)) return ZinkElement(Z, frobenius(x.wk(), Truncation::Stationary), {});
  const int L = Z->bound_f(x.support()) + 1;
  check_precision(Z, x.precision(), L + 1, "f");
  return decompose(Z, frobenius(embed(x, L + 1)), frobenius(x.wk(), Truncation::Stationary));
}

ZinkElement zink_v(const ZinkElement& x) {
  const auto& Z = x.zink();
  // over a field u0 maps to 1 in W(k)
  if (over_field(Z)) return ZinkElement(Z, verschiebung(x.wk()), {});
  const int L = Z->bound_v(x.support()) + 1;
  check_precision(Z, x.precision(), L - 1, "v");
  WittVector X = verschiebung(witt_mul(Z->u0(L - 1), embed(x, L - 1)));
  return decompose(Z, X, verschiebung(x.wk()));
}

ZinkElement zink_f1(const ZinkElement& x) {
  const auto& Z = x.zink();
  const Ring& R = *Z->ring();
  if (!x.wk()[0].is_zero())
    throw PropertyViolation("f1: not in the ideal, residue coordinate 0 is " + Z->residue()->show(x.wk()[0]));
  RingElement c0 = zink_to_ring(x);
  if (!c0.is_zero())
    throw PropertyViolation("f1: not in the ideal, coordinate 0 of the embedded vector is " + R.show(c0));
  std::vector<RingElement> wk(x.wk().coords().begin() + 1, x.wk().coords().end());
  if (over_field(Z)) return ZinkElement(Z, WittVector(Z->residue(), wk), {});
  const int L = Z->bound_f1(x.support()) + 1;
  check_precision(Z, x.precision() - 1, L, "f1");
  WittVector E = embed(x, L + 1);
  WittVector W(Z->ring(), std::vector<RingElement>(E.coords().begin() + 1, E.coords().end()));
  return decompose(Z, witt_mul(Z->u0_inverse(L), W), WittVector(Z->residue(), wk));
}

RingElement zink_to_ring(const ZinkElement& x) {
  if (over_field(x.zink())) return x.wk()[0];
  return embed(x, 1)[0];
}
RingElement zink_residue(const ZinkElement& x) { return x.wk()[0]; }
bool zink_in_ideal(const ZinkElement& x) { return zink_to_ring(x).is_zero(); }
bool zink_is_unit(const ZinkElement& x) { return !x.wk()[0].is_zero(); }

ZinkElement zink_inverse(const ZinkElement& x) {
  if (!zink_is_unit(x)) throw DomainError("Zink element " + x.str() + " is not a unit");
  const auto& Z = x.zink();
  if (over_field(Z)) return ZinkElement(Z, witt_inverse(x.wk()), {});
  const int L = Z->bound_sum(x.support()) + 1;
  check_precision(Z, x.precision(), L, "inverse");
  return decompose(Z, witt_inverse(embed(x, L)), witt_inverse(x.wk()));
}

// ---------------------------------------------------------------------------

namespace {
void check_zmod(const RingPtr& R) {
  if (R->rank() != 1 || R->order() != uint64_t(ppow(R->p(), R->char_exponent()).get_ui()))
    throw UsageError("u0 and c0 are computed over Z/p^M, not " + R->name());
}
}  // namespace

WittVector compute_u0(const RingPtr& R, int N) {
  check_zmod(R);
  const uint32_t p = R->p();
  const int M = R->char_exponent();
  if (p != 2) return WittVector::one(R, N);
  return int_vector(R, coords_from_ghost(2, u0_ghost(N, M + N), M + N), N);
}

C0Result compute_c0(const RingPtr& R, int N) {
  check_zmod(R);
  C0Result res;
  if (R->p() != 2) {
    res.c0 = WittVector::one(R, N);
    return res;
  }
  constexpr int kMaxFactors = 12;
  constexpr int kStable = 3;
  WittVector prod = WittVector::one(R, N);
  int unchanged = 0;
  for (int i = 0; i < kMaxFactors; ++i) {
    // f^i(u0) at length N needs u0 at length N + i
    WittVector fi = compute_u0(R, N + i);
    for (int j = 0; j < i; ++j) fi = frobenius(fi);
    WittVector next = witt_mul(prod, fi.truncate(N));
    unchanged = next == prod ? unchanged + 1 : 0;
    prod = next;
    res.factors = i + 1;
    if (unchanged >= kStable) {
      res.c0 = prod;
      res.stable_for = unchanged;
      return res;
    }
  }
  throw PropertyViolation("partial products of c0 did not stabilize after " + std::to_string(kMaxFactors) +
                          " factors");
}

// ---------------------------------------------------------------------------

namespace {

void check_plus(const ZinkPtr& Z) {
  if (Z->p() != 2) throw DomainError("W+(R) is only built for p = 2");
}

WittVector v1_vector(const ZinkPtr& Z, int L) {
  return verschiebung(WittVector::one(Z->ring(), L - 1));
}

// V[lambda^p] in W_n(k)
WittVector v_teich(const ZinkPtr& Z, const RingElement& lambda, int n) {
  const auto& k = Z->residue();
  return verschiebung(WittVector::teichmuller(k, n - 1, k->frobenius(lambda)));
}

}  // namespace

int plus_length(const ZinkPtr& Z) { return Z->support_bound() + std::max(Z->step(), 1) + 1; }

PlusElement PlusElement::from_zink(const ZinkElement& z) {
  check_plus(z.zink());
  return PlusElement(z, z.zink()->residue()->zero());
}

PlusElement PlusElement::v1(const ZinkPtr& Z) {
  check_plus(Z);
  return PlusElement(ZinkElement::zero(Z), Z->residue()->one());
}

std::string PlusElement::str() const {
  return "Plus[" + z_.str() + " + [" + zink()->residue()->show(l_) + "]v(1)]";
}

WittVector plus_embed(const PlusElement& x, int L) {
  const auto& Z = x.zink();
  WittVector t = WittVector::teichmuller(Z->ring(), L, Z->ring()->section(x.lambda()));
  return witt_add(embed(x.z(), L), witt_mul(t, v1_vector(Z, L)));
}

WittVector plus_residue_vector(const PlusElement& x) {
  return witt_add(x.z().wk(), v_teich(x.zink(), x.lambda(), x.z().precision()));
}

PlusElement plus_decompose(const ZinkPtr& Z, const WittVector& X, const WittVector& tau,
                           const RingElement& lambda) {
  check_plus(Z);
  const int L = X.length();
  WittVector t = WittVector::teichmuller(Z->ring(), L, Z->ring()->section(lambda));
  WittVector Xz = witt_sub(X, witt_mul(t, v1_vector(Z, L)));
  WittVector xi = witt_sub(tau, v_teich(Z, lambda, tau.length()));
  return PlusElement(decompose_impl(Z, Xz, xi, false), lambda);
}

namespace {

void check_same_plus(const PlusElement& x, const PlusElement& y) {
  if (x.zink() != y.zink()) throw UsageError("W+ elements over different rings");
}

int plus_precision(const ZinkPtr& Z, int n, int L) {
  check_precision(Z, n, L, "W+ operation");
  return n;
}

}  // namespace

PlusElement plus_add(const PlusElement& x, const PlusElement& y) {
  check_same_plus(x, y);
  const auto& Z = x.zink();
  const int L = plus_length(Z);
  const int n = plus_precision(Z, std::min(x.z().precision(), y.z().precision()), L);
  WittVector tau = witt_add(plus_residue_vector(x).truncate(n), plus_residue_vector(y).truncate(n));
  return plus_decompose(Z, witt_add(plus_embed(x, L), plus_embed(y, L)), tau, x.lambda() + y.lambda());
}

PlusElement plus_neg(const PlusElement& x) {
  const auto& Z = x.zink();
  const int L = plus_length(Z);
  plus_precision(Z, x.z().precision(), L);
  return plus_decompose(Z, witt_neg(plus_embed(x, L)), witt_neg(plus_residue_vector(x)), -x.lambda());
}

PlusElement plus_sub(const PlusElement& x, const PlusElement& y) { return plus_add(x, plus_neg(y)); }

PlusElement plus_mul(const PlusElement& x, const PlusElement& y) {
  check_same_plus(x, y);
  const auto& Z = x.zink();
  const int L = plus_length(Z);
  const int n = plus_precision(Z, std::min(x.z().precision(), y.z().precision()), L);
  WittVector tau = witt_mul(plus_residue_vector(x).truncate(n), plus_residue_vector(y).truncate(n));
  // [a]v(1) z lies in W(R) + [a rho(z)]v(1), and v(1)^2 = 2 v(1) lies in W(R)
  RingElement lambda = x.lambda() * zink_residue(y.z()) + y.lambda() * zink_residue(x.z());
  return plus_decompose(Z, witt_mul(plus_embed(x, L), plus_embed(y, L)), tau, lambda);
}

PlusElement plus_f(const PlusElement& x) {
  const auto& Z = x.zink();
  const int L = plus_length(Z);
  plus_precision(Z, x.z().precision(), L + 1);
  // f(v(1)) = 2
  return plus_decompose(Z, frobenius(plus_embed(x, L + 1)),
                        frobenius(plus_residue_vector(x), Truncation::Stationary), Z->residue()->zero());
}

bool plus_in_ideal(const PlusElement& x) { return zink_in_ideal(x.z()); }

PlusElement plus_f1(const PlusElement& x) {
  const auto& Z = x.zink();
  if (!plus_in_ideal(x))
    throw PropertyViolation("f1+: not in the ideal, coordinate 0 is " + Z->ring()->show(zink_to_ring(x.z())));
  const int L = plus_length(Z);
  plus_precision(Z, x.z().precision() - 1, L);
  WittVector E = plus_embed(x, L + 1);
  WittVector W(Z->ring(), std::vector<RingElement>(E.coords().begin() + 1, E.coords().end()));
  WittVector tau = plus_residue_vector(x);
  WittVector tau1(Z->residue(), std::vector<RingElement>(tau.coords().begin() + 1, tau.coords().end()));
  // v^{-1}(z) = u0 f1(z), whose class is that of u0 times the residue of f1(z)
  RingElement lambda = Z->u0_outside() ? x.z().wk()[1] : Z->residue()->zero();
  return plus_decompose(Z, W, tau1, lambda);
}

bool plus_is_unit(const PlusElement& x) { return zink_is_unit(x.z()); }

PlusElement plus_inverse(const PlusElement& x) {
  if (!plus_is_unit(x)) throw DomainError("W+ element " + x.str() + " is not a unit");
  const auto& Z = x.zink();
  const auto& k = Z->residue();
  const int L = plus_length(Z);
  plus_precision(Z, x.z().precision(), L);
  RingElement r = k->inverse(zink_residue(x.z()));
  RingElement lambda = -(x.lambda() * r * r);
  return plus_decompose(Z, witt_inverse(plus_embed(x, L)), witt_inverse(plus_residue_vector(x)), lambda);
}

PlusElement plus_u0(const ZinkPtr& Z) {
  check_plus(Z);
  const int L = plus_length(Z);
  const auto& k = Z->residue();
  return plus_decompose(Z, Z->u0(L), WittVector::one(k, Z->precision()),
                        Z->u0_outside() ? k->one() : k->zero());
}

PlusElement plus_c0(const ZinkPtr& Z) {
  check_plus(Z);
  const int L = plus_length(Z);
  const auto& k = Z->residue();
  // characteristic 2: v(u0) = 2 = v(1), so u0 = c0 = 1
  if (Z->ring()->char_exponent() == 1) return PlusElement::from_zink(ZinkElement::one(Z));
  WittVector c = compute_c0(Z->ring(), L).c0;
  // c0 = u0 f(u0) ..., with f(u0) in W(R): same class as u0
  return plus_decompose(Z, c, WittVector::one(k, Z->precision()),
                        Z->u0_outside() ? k->one() : k->zero());
}

QuotientReport stabilized_quotient_check(const ZinkPtr& Z) {
  QuotientReport rep;
  if (Z->p() != 2) {
    rep.reason = "p odd: W+(R) = W(R)";
    return rep;
  }
  const auto& R = Z->ring();
  const auto& k = Z->residue();
  const int L = plus_length(Z);
  const int n = Z->precision();
  rep.tested_length = L;
  WittVector v1 = v1_vector(Z, L);
  WittVector V1k = verschiebung(WittVector::one(k, n - 1));
  auto msupport = [&](const WittVector& X, const WittVector& tau) {
    WittVector Y = witt_sub(X, Z->section(tau, L));
    int s = 0;
    for (int i = 0; i < L; ++i) {
      if (!R->in_max_ideal(Y[i])) throw PropertyViolation("residue leakage in W+ check");
      if (!Y[i].is_zero()) s = i + 1;
    }
    return s;
  };
  if (R->char_exponent() == 1) {
    // v(1) = 2 in characteristic 2
    if (msupport(v1, V1k) != 0) throw PropertyViolation("v(1) differs from 2 in characteristic 2");
    rep.reason = "characteristic 2: v(1) = 2 lies in W(R)";
    return rep;
  }
  bool outside = true;
  for (auto& lam : k->elements()) {
    if (lam.is_zero()) continue;
    WittVector t = WittVector::teichmuller(R, L, R->section(lam));
    int s = msupport(witt_mul(t, v1), witt_mul(WittVector::teichmuller(k, n, lam), V1k));
    rep.witness_index.push_back(s - 1);
    if (s < L) outside = false;
  }
  rep.two_v1_support = msupport(witt_scale(v1, 2), witt_scale(V1k, 2));
  const bool two_inside = rep.two_v1_support <= Z->support_bound() && rep.two_v1_support < L;
  // f1(v(1)) = u0^{-1} v^{-1}(v(1)) = u0^{-1}
  WittVector f1v1 = Z->u0_inverse(L);
  rep.f1bar_support = msupport(witt_sub(f1v1, v1), witt_sub(WittVector::one(k, n), V1k));
  rep.f1bar_fixes_v1 = rep.f1bar_support <= Z->support_bound() && rep.f1bar_support < L;
  if (outside && two_inside) {
    rep.dimension = 1;
    rep.reason = "v(1) outside W(R) up to the tested length, m-multiples of v(1) inside";
  } else {
    rep.reason = outside ? "2 v(1) not found in W(R)" : "some [lambda] v(1) has finite support";
  }
  return rep;
}

}  // namespace wz
