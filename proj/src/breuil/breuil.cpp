#include "wz/breuil.hpp"

#include <algorithm>

namespace wz {

namespace {

uint32_t ipow(uint32_t p, int e) {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return uint32_t(r);
}

// A coefficient known modulo p^prec.
struct Term {
  RingElement v;
  int prec;
};

int term_val(const SRing& S, const Term& a) { return std::min(S.valuation(a.v), a.prec); }

Term tmul(const SRing& S, const Term& a, const Term& b) {
  int pr = std::min({S.N(), a.prec + term_val(S, b), b.prec + term_val(S, a)});
  return {S.reduce(a.v * b.v, pr), pr};
}

Term tadd(const SRing& S, const Term& a, const Term& b) {
  int pr = std::min(a.prec, b.prec);
  return {S.reduce(a.v + b.v, pr), pr};
}

Term tsub(const SRing& S, const Term& a, const Term& b) {
  int pr = std::min(a.prec, b.prec);
  return {S.reduce(a.v - b.v, pr), pr};
}

const SRing& same_ring(const SElem& a, const SElem& b) {
  if (!a.ring() || a.ring() != b.ring()) throw UsageError("elements of different truncated S");
  return *a.ring();
}

bool is_prime_field_desc(const RingDescriptor& d) {
  using K = RingDescriptor::Kind;
  return d.kind == K::PrimeField || (d.kind == K::IntegersMod && d.exponent == 1) ||
         (d.kind == K::FiniteField && d.degree == 1 && !d.poly);
}

}  // namespace

// ---------------------------------------------------------------------------
// SRing

SPtr SRing::make(RingPtr k, int N, int M) {
  if (N < 1 || M < 1) throw UsageError("truncated S needs N >= 1 and M >= 1");
  if (!k->is_field()) throw UsageError("the residue ring of S must be a field, got " + k->name());
  auto d = k->descriptor();
  if (!d) throw UsageError("residue field " + k->name() + " has no descriptor");
  using K = RingDescriptor::Kind;
  if (!is_prime_field_desc(*d) && d->kind != K::FiniteField)
    throw UsageError("the residue field of S must be given as Fp(p) or Fq(p,..), got " + d->str());
  std::shared_ptr<SRing> S(new SRing());
  S->k_ = k;
  S->p_ = k->p();
  S->N_ = N;
  S->M_ = M;
  ExprPtr poly = is_prime_field_desc(*d) ? nullptr : field_polynomial(*d);
  std::string var = d->var.empty() ? "z" : d->var;
  S->wdesc_ = poly ? RingDescriptor::ext(RingDescriptor::zmod(S->p_, N), var, poly) : RingDescriptor::zmod(S->p_, N);
  S->W_ = Ring::make(S->wdesc_);
  S->r_ = uint32_t(S->W_->rank());
  const Ring& W = *S->W_;
  if (poly) {
    // Frobenius: z -> the root of f congruent to z^p (Newton iteration).
    UPoly f = UPoly::from_expr(W, *poly, var, {{"p", int64_t(S->p_)}});
    UPoly df{&W, {}};
    for (size_t i = 1; i < f.c.size(); ++i) df.c.push_back(W.scale(f.c[i], int64_t(i)));
    auto ev = [&W](const UPoly& g, const RingElement& x) {
      RingElement r = W.zero();
      for (int i = int(g.c.size()) - 1; i >= 0; --i) r = r * x + g.c[i];
      return r;
    };
    RingElement rho = W.pow(W.var(var), S->p_);
    for (int it = 0; it < 4 * N + 8; ++it) {
      RingElement v = ev(f, rho);
      if (v.is_zero()) break;
      rho = rho - v * W.inverse(ev(df, rho));
    }
    if (!ev(f, rho).is_zero()) throw PropertyViolation("Frobenius on W(k): Newton iteration did not converge");
    RingElement x = W.one();
    for (uint32_t i = 0; i < S->r_; ++i) {
      S->rho_pows_.push_back(x);
      x = x * rho;
    }
  } else {
    S->rho_pows_.push_back(W.one());
  }
  // digits: coordinates in [0, p)
  std::vector<uint32_t> idx(S->r_, 0);
  for (;;) {
    S->digits_.push_back(W.element(Vec(idx.begin(), idx.end())));
    uint32_t i = 0;
    while (i < S->r_ && ++idx[i] == S->p_) idx[i++] = 0;
    if (i == S->r_) break;
  }
  return S;
}

std::string SRing::name() const {
  return "S(" + k_->name() + ";N=" + std::to_string(N_) + ",M=" + std::to_string(M_) + ")";
}

int SRing::valuation(const RingElement& a) const {
  int v = N_;
  for (uint32_t c : a.coords()) {
    if (!c) continue;
    int e = 0;
    while (c % p_ == 0) {
      c /= p_;
      ++e;
    }
    v = std::min(v, e);
  }
  return v;
}

RingElement SRing::reduce(const RingElement& a, int j) const {
  if (j >= N_) return a;
  const uint32_t q = ipow(p_, std::max(j, 0));
  Vec c = a.coords();
  for (auto& x : c) x %= q;
  return W_->element(c);
}

RingElement SRing::divide_p(const RingElement& a, int j) const {
  const uint32_t q = ipow(p_, j);
  Vec c = a.coords();
  for (auto& x : c) x /= q;
  return W_->element(c);
}

RingElement SRing::sigma(const RingElement& a) const {
  if (r_ == 1) return a;
  RingElement r = W_->zero();
  for (uint32_t i = 0; i < r_; ++i) r = r + W_->scale(rho_pows_[i], a.coords()[i]);
  return r;
}

RingElement SRing::residue_of(const RingElement& a) const {
  Vec c = a.coords();
  for (auto& x : c) x %= p_;
  return k_->element(c);
}

RingPtr SRing::as_ring() const {
  if (!as_ring_) as_ring_ = Ring::make(RingDescriptor::series(wdesc_, "t", M_));
  return as_ring_;
}

// ---------------------------------------------------------------------------
// SElem

SElem::SElem(SPtr S, std::vector<RingElement> c, std::vector<int> prec) : S_(std::move(S)) {
  const int M = S_->M();
  if (int(c.size()) > M || prec.size() != c.size()) throw UsageError("SElem: bad coefficient data");
  c.resize(M, S_->coeffs()->zero());
  prec.resize(M, 0);
  for (int i = 0; i < M; ++i) {
    prec[i] = std::clamp(prec[i], 0, S_->N());
    c[i] = S_->reduce(c[i], prec[i]);
  }
  c_ = std::move(c);
  prec_ = std::move(prec);
}

SElem SElem::zero(const SPtr& S) { return from_int(S, 0); }
SElem SElem::one(const SPtr& S) { return from_int(S, 1); }

SElem SElem::from_int(const SPtr& S, int64_t k) { return constant(S, S->coeffs()->from_int(k)); }

SElem SElem::t(const SPtr& S) {
  std::vector<RingElement> c(S->M(), S->coeffs()->zero());
  if (S->M() > 1) c[1] = S->coeffs()->one();
  return SElem(S, c, std::vector<int>(S->M(), S->N()));
}

SElem SElem::constant(const SPtr& S, const RingElement& a, int prec) {
  std::vector<RingElement> c(S->M(), S->coeffs()->zero());
  std::vector<int> pr(S->M(), S->N());
  c[0] = a;
  if (prec >= 0) pr[0] = prec;
  return SElem(S, c, pr);
}

SElem SElem::parse(const SPtr& S, const std::string& text) {
  ExprPtr e = parse_expr(text);
  ExprOps<SElem> ops;
  ops.from_int = [&S](int64_t v) { return from_int(S, v); };
  ops.var = [&S](const std::string& n, size_t pos) {
    if (n == "t") return t(S);
    if (n == "p") return from_int(S, S->p());
    if (S->coeffs()->has_var(n)) return constant(S, S->coeffs()->var(n));
    throw ParseError("unknown variable '" + n + "'", pos);
  };
  ops.add = s_add;
  ops.sub = s_sub;
  ops.mul = s_mul;
  ops.neg = s_neg;
  ops.int_env = {{"p", int64_t(S->p())}};
  return eval_expr(*e, ops);
}

bool SElem::exact() const {
  return std::all_of(prec_.begin(), prec_.end(), [this](int x) { return x == S_->N(); });
}

int SElem::degree() const {
  for (int i = size() - 1; i >= 0; --i)
    if (!c_[i].is_zero()) return i;
  return -1;
}

int SElem::level() const {
  const int top = std::min(S_->N(), S_->M());
  int K = 0;
  while (K < top) {
    bool ok = true;
    for (int i = 0; i <= K && ok; ++i) ok = prec_[i] >= K + 1 - i;
    if (!ok) break;
    ++K;
  }
  return K;
}

SElem SElem::truncate_m(int K) const {
  std::vector<int> pr = prec_;
  for (int i = 0; i < size(); ++i) pr[i] = std::min(pr[i], std::max(K - i, 0));
  return SElem(S_, c_, pr);
}

SElem SElem::with_prec(int n) const {
  std::vector<int> pr = prec_;
  for (auto& x : pr) x = std::min(x, n);
  return SElem(S_, c_, pr);
}

bool SElem::operator==(const SElem& o) const {
  const SRing& S = same_ring(*this, o);
  for (int i = 0; i < size(); ++i) {
    const int m = std::min(prec_[i], o.prec_[i]);
    if (m > 0 && !S.reduce(c_[i] - o.c_[i], m).is_zero()) return false;
  }
  return true;
}

bool SElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const RingElement& x) { return x.is_zero(); });
}

std::string SElem::str() const {
  const Ring& W = *S_->coeffs();
  std::string s;
  for (int i = 0; i < size(); ++i) {
    if (c_[i].is_zero()) continue;
    std::string c = W.show(c_[i]);
    if (c.find_first_of("+-") != std::string::npos && i > 0) c = "(" + c + ")";
    std::string mono = i == 0 ? "" : (i == 1 ? "t" : "t^" + std::to_string(i));
    std::string term = mono.empty() ? c : (c == "1" ? mono : c + "*" + mono);
    s += (s.empty() ? "" : " + ") + term;
  }
  if (s.empty()) s = "0";
  if (!exact()) {
    s += " @(";
    for (int i = 0; i < size(); ++i) s += (i ? "," : "") + std::to_string(prec_[i]);
    s += ")";
  }
  return s;
}

std::string SElem::key() const { return str(); }

SElem s_add(const SElem& a, const SElem& b) {
  const SRing& S = same_ring(a, b);
  std::vector<RingElement> c;
  std::vector<int> pr;
  for (int i = 0; i < a.size(); ++i) {
    Term t = tadd(S, {a[i], a.prec(i)}, {b[i], b.prec(i)});
    c.push_back(t.v);
    pr.push_back(t.prec);
  }
  return SElem(a.ring(), c, pr);
}

SElem s_neg(const SElem& a) {
  std::vector<RingElement> c;
  std::vector<int> pr;
  for (int i = 0; i < a.size(); ++i) {
    c.push_back(-a[i]);
    pr.push_back(a.prec(i));
  }
  return SElem(a.ring(), c, pr);
}

SElem s_sub(const SElem& a, const SElem& b) { return s_add(a, s_neg(b)); }

SElem s_mul(const SElem& a, const SElem& b) {
  const SRing& S = same_ring(a, b);
  const int M = S.M();
  std::vector<RingElement> c(M, S.coeffs()->zero());
  std::vector<int> pr(M, S.N());
  for (int l = 0; l < M; ++l) {
    Term acc{S.coeffs()->zero(), S.N()};
    for (int i = 0; i <= l; ++i) acc = tadd(S, acc, tmul(S, {a[i], a.prec(i)}, {b[l - i], b.prec(l - i)}));
    c[l] = acc.v;
    pr[l] = acc.prec;
  }
  return SElem(a.ring(), c, pr);
}

SElem s_pow(const SElem& a, uint64_t e) {
  SElem r = SElem::one(a.ring()), b = a;
  while (e) {
    if (e & 1) r = s_mul(r, b);
    e >>= 1;
    if (e) b = s_mul(b, b);
  }
  return r;
}

bool s_is_unit(const SElem& a) {
  return a.prec(0) >= 1 && a.ring()->valuation(a[0]) == 0;
}

SElem s_inverse(const SElem& a) {
  if (!s_is_unit(a)) throw PropertyViolation("not a unit in S: " + a.str());
  const SRing& S = *a.ring();
  const int M = S.M();
  std::vector<Term> b(M);
  b[0] = {S.reduce(S.coeffs()->inverse(a[0]), a.prec(0)), a.prec(0)};
  for (int l = 1; l < M; ++l) {
    Term acc{S.coeffs()->zero(), S.N()};
    for (int i = 1; i <= l; ++i) acc = tadd(S, acc, tmul(S, {a[i], a.prec(i)}, b[l - i]));
    Term t = tmul(S, b[0], acc);
    b[l] = {S.reduce(-t.v, t.prec), t.prec};
  }
  std::vector<RingElement> c;
  std::vector<int> pr;
  for (auto& t : b) {
    c.push_back(t.v);
    pr.push_back(t.prec);
  }
  return SElem(a.ring(), c, pr);
}

SElem s_divide_p(const SElem& x, int n) {
  const SRing& S = *x.ring();
  std::vector<RingElement> c;
  std::vector<int> pr;
  for (int i = 0; i < x.size(); ++i) {
    const int known = std::min(n, x.prec(i));
    if (S.valuation(x[i]) < known)
      throw PrecisionExhausted("division by p^" + std::to_string(n) + " is not exact at t^" + std::to_string(i) +
                               " (raise N)");
    if (x.prec(i) <= n) {
      c.push_back(S.coeffs()->zero());
      pr.push_back(0);
    } else {
      c.push_back(S.divide_p(x[i], n));
      pr.push_back(x.prec(i) - n);
    }
  }
  return SElem(x.ring(), c, pr);
}

std::optional<SElem> s_divide(const SElem& y, const SElem& E) {
  const SRing& S = same_ring(y, E);
  const int M = S.M();
  std::vector<Term> q(M);
  for (int i = 0; i < M; ++i) {
    Term r{y[i], y.prec(i)};
    for (int j = 1; j <= i; ++j) r = tsub(S, r, tmul(S, {E[j], E.prec(j)}, q[i - j]));
    if (r.prec == 0) {
      q[i] = {S.coeffs()->zero(), 0};
      continue;
    }
    if (S.valuation(r.v) < 1) return std::nullopt;
    q[i] = {S.divide_p(r.v, 1), r.prec - 1};
  }
  std::vector<RingElement> c;
  std::vector<int> pr;
  for (auto& t : q) {
    c.push_back(t.v);
    pr.push_back(t.prec);
  }
  return SElem(y.ring(), c, pr);
}

RingElement s_eval(const SElem& f, const Ring& R, const RingElement& x) {
  const SRing& S = *f.ring();
  if (S.residue_degree() != 1) throw UsageError("evaluation in R needs residue field F_p");
  const int N = S.N();
  RingElement r = R.zero();
  for (int i = f.size() - 1; i >= 0; --i) r = R.add(R.mul(r, x), R.from_int(int64_t(f[i].coords()[0])));
  for (int i = 0; i < f.size(); ++i) {
    if (f.prec(i) >= N) continue;
    if (!R.scale(R.pow(x, uint64_t(i)), int64_t(ipow(S.p(), f.prec(i)))).is_zero())
      throw PrecisionExhausted("coefficient of t^" + std::to_string(i) + " is known only mod p^" +
                               std::to_string(f.prec(i)) + ", too coarse for " + R.name());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Frobenius lifts

FrobeniusLift::FrobeniusLift(SPtr S, SElem sigma_t) : S_(std::move(S)), st_(std::move(sigma_t)) {
  if (st_.ring() != S_) throw UsageError("sigma(t) lives in a different S");
  if (!st_.exact()) throw UsageError("sigma(t) must be given exactly");
  if (S_->M() < 2) throw UsageError("Frobenius lifts need M >= 2");
  if (!st_[0].is_zero()) throw DomainError("sigma(t) must lie in tS, got " + st_.str());
  SElem d = s_sub(st_, s_pow(SElem::t(S_), S_->p()));
  for (int i = 0; i < d.size(); ++i)
    if (S_->valuation(d[i]) < 1) throw DomainError("sigma(t) is not t^p mod p: " + st_.str());
  SElem x = SElem::one(S_);
  for (int i = 0; i < S_->M(); ++i) {
    pows_.push_back(x);
    x = s_mul(x, st_);
  }
}

FrobeniusLift FrobeniusLift::parse(const SPtr& S, const std::string& text) {
  return FrobeniusLift(S, SElem::parse(S, text));
}

FrobeniusLift FrobeniusLift::standard(const SPtr& S) { return FrobeniusLift(S, s_pow(SElem::t(S), S->p())); }

SElem FrobeniusLift::apply(const SElem& x) const {
  if (x.ring() != S_) throw UsageError("sigma applied to an element of a different S");
  SElem r = SElem::zero(S_);
  for (int i = 0; i < x.size(); ++i) {
    SElem c = SElem::constant(S_, S_->sigma(x[i]), x.prec(i));
    r = s_add(r, s_mul(c, pows_[i]));
  }
  return r;
}

SElem FrobeniusLift::iterate(const SElem& x, int n) const {
  SElem r = x;
  for (int i = 0; i < n; ++i) r = apply(r);
  return r;
}

bool FrobeniusLift::p2_criterion() const { return S_->valuation(st_[1]) >= 2; }

SElem distinguished(const SPtr& S, const std::string& text) {
  SElem E = SElem::parse(S, text);
  if (!(E[0] == S->coeffs()->from_int(S->p())))
    throw DomainError("E must have constant term p, got " + E.str());
  return E;
}

// ---------------------------------------------------------------------------
// The frame B

BreuilFrame::BreuilFrame(FrobeniusLift sigma, SElem E) : sig_(std::move(sigma)), E_(std::move(E)), S_(sig_.ring()) {
  if (E_.ring() != S_) throw UsageError("E lives in a different S");
  if (!(E_[0] == S_->coeffs()->from_int(S_->p())) || !E_.exact())
    throw DomainError("E must be exact with constant term p, got " + E_.str());
}

std::string BreuilFrame::name() const {
  return "B(" + S_->name() + ";sigma(t)=" + sig_.str() + ";E=" + E_.str() + ")";
}

SElem BreuilFrame::sigma1(const SElem& a) const {
  auto q = s_divide(a, E_);
  if (!q) throw PropertyViolation("sigma1: " + a.str() + " is not in ES");
  return sig_.apply(*q);
}

std::optional<bool> BreuilFrame::congruent_mod_p(const SElem& a, const SElem& b) const {
  SElem d = s_sub(a, b);
  for (int i = 0; i < d.size(); ++i)
    if (d.prec(i) >= 1 && S_->valuation(d[i]) < 1) return false;
  return true;
}

SElem BreuilFrame::random(std::mt19937_64& g) const {
  const Ring& W = *S_->coeffs();
  const uint32_t q = W.modulus();
  std::vector<RingElement> c;
  for (int i = 0; i < S_->M(); ++i) {
    Vec v(W.rank());
    for (auto& x : v) x = uint32_t(g() % q);
    c.push_back(W.element(v));
  }
  return SElem(S_, c, std::vector<int>(S_->M(), S_->N()));
}

SElem BreuilFrame::random_ideal(std::mt19937_64& g) const { return s_mul(E_, random(g)); }

double BreuilFrame::count(int level) const {
  return std::pow(double(S_->digits().size()), double(level) * (level + 1) / 2);
}

std::vector<SElem> BreuilFrame::elements(int level) const {
  const auto& D = S_->digits();
  const Ring& W = *S_->coeffs();
  std::vector<std::pair<int, int>> slots;  // (coefficient, p-adic digit)
  for (int i = 0; i < level; ++i)
    for (int d = 0; d < level - i; ++d) slots.emplace_back(i, d);
  std::vector<int> prec(S_->M(), 0);
  for (int i = 0; i < level; ++i) prec[i] = level - i;
  std::vector<size_t> idx(slots.size(), 0);
  std::vector<SElem> out;
  for (;;) {
    std::vector<RingElement> c(S_->M(), W.zero());
    for (size_t s = 0; s < slots.size(); ++s)
      c[slots[s].first] = c[slots[s].first] + W.scale(D[idx[s]], ipow(S_->p(), slots[s].second));
    out.emplace_back(S_, c, prec);
    size_t k = 0;
    while (k < idx.size() && ++idx[k] == D.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return out;
}

std::vector<SElem> BreuilFrame::lifts(const SElem& x) const {
  const int K = x.level();
  const SElem base = x.truncate_m(K);
  const auto& D = S_->digits();
  const Ring& W = *S_->coeffs();
  const int n = std::min(K + 1, S_->M());
  std::vector<int> prec(S_->M(), 0);
  for (int i = 0; i < n; ++i) prec[i] = K + 1 - i;
  std::vector<size_t> idx(n, 0);
  std::vector<SElem> out;
  for (;;) {
    std::vector<RingElement> c;
    for (int i = 0; i < S_->M(); ++i) c.push_back(base[i]);
    for (int i = 0; i < n; ++i) c[i] = c[i] + W.scale(D[idx[i]], ipow(S_->p(), K - i));
    out.emplace_back(S_, c, prec);
    int k = 0;
    while (k < n && ++idx[k] == D.size()) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// delta

std::vector<SElem> delta(const FrobeniusLift& s, const SElem& x, int n) {
  const SPtr& S = s.ring();
  if (n >= S->N()) throw PrecisionExhausted("delta to length " + std::to_string(n + 1) + " needs N > " +
                                            std::to_string(n));
  std::vector<SElem> g{x};
  SElem sig = x;
  for (int j = 1; j <= n; ++j) {
    sig = s.apply(sig);
    SElem acc = sig;
    uint64_t pe = 1;  // p^{j-i}
    for (int i = j - 1; i >= 0; --i) {
      pe *= S->p();
      acc = s_sub(acc, s_mul(SElem::from_int(S, int64_t(ipow(S->p(), i))), s_pow(g[i], pe)));
    }
    g.push_back(s_divide_p(acc, j));
  }
  return g;
}

CheckReport check_delta(const FrobeniusLift& s, const SElem& x, int n) {
  const SPtr& S = s.ring();
  CheckReport r;
  auto g = delta(s, x, n);
  r.expect(g[0] == x, "w0 delta != id");
  SElem sig = x;
  for (int j = 0; j <= n; ++j) {
    SElem acc = SElem::zero(S);
    uint64_t pe = 1;
    for (int i = j; i >= 0; --i) {
      acc = s_add(acc, s_mul(SElem::from_int(S, int64_t(ipow(S->p(), i))), s_pow(g[i], pe)));
      pe *= S->p();
    }
    r.expect(acc == sig, "ghost recursion fails at n = " + std::to_string(j));
    sig = s.apply(sig);
  }
  if (n >= 1 && n + 1 < S->N()) {
    // delta(sigma x) = f(delta x) in W(S mod (p^N, t^M))
    RingPtr RS = S->as_ring();
    const Ring& W = *S->coeffs();
    std::vector<RingElement> zpow{RS->one()};
    for (int i = 1; i < W.rank(); ++i) zpow.push_back(RS->mul(zpow.back(), RS->var(W.lift().names[1])));
    auto to_ring = [&](const SElem& a) {
      RingElement v = RS->zero(), tp = RS->one();
      for (int i = 0; i < a.size(); ++i) {
        for (int j = 0; j < W.rank(); ++j) v = RS->add(v, RS->mul(tp, RS->scale(zpow[j], a[i].coords()[j])));
        tp = RS->mul(tp, RS->var("t"));
      }
      return v;
    };
    std::vector<RingElement> dx;
    for (auto& y : g) dx.push_back(to_ring(y));
    WittVector fd = frobenius(WittVector(RS, dx));
    auto h = delta(s, s.apply(x), n - 1);
    for (int j = 0; j < n; ++j) {
      Vec diff = RS->sub(to_ring(h[j]), fd[j]).coords();
      const uint32_t q = ipow(S->p(), S->N() - j);
      bool ok = std::all_of(diff.begin(), diff.end(), [q](uint32_t c) { return c % q == 0; });
      r.expect(ok, "delta sigma != f delta at coordinate " + std::to_string(j));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// kappa

Kappa::Kappa(FrobeniusLift s, SElem E, RingPtr R, RingElement pi, int support_bound)
    : sig_(std::move(s)), E_(std::move(E)), R_(std::move(R)), pi_(std::move(pi)) {
  const SPtr& S = sig_.ring();
  if (S->residue_degree() != 1 || R_->residue_order() != S->p())
    throw UsageError("kappa is implemented for residue field F_p");
  if (!R_->in_max_ideal(pi_)) throw UsageError("pi must lie in the maximal ideal of " + R_->name());
  if (!s_eval(E_, *R_, pi_).is_zero()) throw UsageError("E(pi) != 0 in " + R_->name());
  const int a = R_->char_exponent();
  const int L = S->N() - a + 1;
  if (L < 4) throw PrecisionExhausted("kappa needs N >= a + 3 for R = " + R_->name());
  if (!R_->pow(pi_, S->M()).is_zero()) throw PrecisionExhausted("kappa needs pi^M = 0 (raise M)");
  auto g = delta(sig_, SElem::t(S), L - 1);
  std::vector<RingElement> c;
  for (auto& y : g) c.push_back(s_eval(y, *R_, pi_));
  kt_ = WittVector(R_, c);
  support_ = 0;
  for (int i = 0; i < L; ++i)
    if (!c[i].is_zero()) support_ = i + 1;
  in_zink_ = L - support_ >= 3;
  if (!in_zink_) return;

  const int B = support_bound > 0 ? support_bound : std::max(support_, 1) + 2;
  Z_ = ZinkRing::make(R_, B);
  kt_elem_ = ZinkElement::from_m(Z_, std::vector<RingElement>(c.begin(), c.begin() + support_));
  e_ = R_->nilpotency();
  std::vector<ZinkElement> pw{ZinkElement::one(Z_)};
  for (int i = 1; i <= e_; ++i) pw.push_back(zink_mul(pw.back(), kt_elem_));
  if (pw[e_] != ZinkElement::zero(Z_)) throw PropertyViolation("kappa(t)^e != 0 in W(R)");
  need_ = 0;
  for (int i = 1; i < e_; ++i) {
    int P = 0;
    while (P <= S->N() && zink_mul(ZinkElement::from_int(Z_, int64_t(ipow(S->p(), P))), pw[i]) != ZinkElement::zero(Z_))
      ++P;
    need_ = std::max(need_, P);
  }
}

const ZinkPtr& Kappa::zink() const {
  if (!in_zink_) throw UsageError("kappa(t) is not in the Zink ring of " + R_->name());
  return Z_;
}

ZinkElement Kappa::apply(const SElem& x) const {
  const ZinkPtr& Z = zink();
  const int n = Z->precision();
  ZinkElement r = ZinkElement::from_int(Z, int64_t(x[0].coords()[0])).with_precision(std::min(x.prec(0), n));
  ZinkElement tp = ZinkElement::one(Z);
  for (int i = 1; i < std::min(e_, x.size()); ++i) {
    tp = zink_mul(tp, kt_elem_);
    if (tp == ZinkElement::zero(Z)) break;
    if (x.prec(i) < need_)
      throw PrecisionExhausted("kappa: coefficient of t^" + std::to_string(i) + " is known only mod p^" +
                               std::to_string(x.prec(i)) + ", need p^" + std::to_string(need_));
    r = zink_add(r, zink_mul(ZinkElement::from_int(Z, int64_t(x[i].coords()[0])), tp));
  }
  return r;
}

Units units_u_c(const Kappa& kappa) {
  Units U;
  ZinkElement kE = kappa.apply(kappa.E());
  if (!zink_in_ideal(kE)) throw PropertyViolation("kappa(E) is not in the image of v");
  U.u = zink_f1(kE);
  ZinkElement prod = U.u, cur = U.u;
  U.factors = 1;
  for (int i = 1; i < 48 && U.stable_for < 3; ++i) {
    cur = zink_f(cur);
    ZinkElement next = zink_mul(prod, cur);
    ++U.factors;
    U.stable_for = next == prod ? U.stable_for + 1 : 0;
    prod = next;
  }
  if (U.stable_for < 3) throw PropertyViolation("the product u f(u) f^2(u) ... did not stabilize");
  U.c = prod;
  return U;
}

CheckReport check_units(const Kappa& kappa, const Units& U) {
  CheckReport r;
  const ZinkPtr& Z = kappa.zink();
  r.expect(zink_is_unit(U.u), "u is not a unit");
  r.expect(zink_is_unit(U.c), "c is not a unit");
  r.expect(U.u.wk() == WittVector::one(Z->residue(), U.u.precision()), "u does not map to 1 in W(k)");
  r.expect(U.c.wk() == WittVector::one(Z->residue(), U.c.precision()), "c does not map to 1 in W(k)");
  r.expect(zink_mul(U.c, zink_inverse(zink_f(U.c))) == U.u, "c f(c)^{-1} != u");
  return r;
}

FrameMap<SElem, ZinkElement> kappa_map(BreuilPtr B, const Kappa& kappa, const Units& U) {
  if (B->ring() != kappa.lift().ring()) throw UsageError("kappa and B use different truncated S");
  FrameMap<SElem, ZinkElement> m;
  m.source = B;
  m.target = std::make_shared<ZinkFrame>(kappa.zink());
  m.alpha = [kappa](const SElem& x) { return kappa.apply(x); };
  m.u = U.u;
  m.c = U.c;
  m.name = "kappa";
  return m;
}

// ---------------------------------------------------------------------------
// Breuil window data

namespace {

const BreuilFrame& breuil_frame(const FramePtr<SElem>& F) {
  auto B = dynamic_cast<const BreuilFrame*>(F.get());
  if (!B) throw UsageError("window is not over a Breuil frame");
  return *B;
}

}  // namespace

BreuilWindowData window_to_breuil(const Window<SElem>& w) {
  const BreuilFrame& B = breuil_frame(w.frame);
  const int h = w.h, l = w.l_rank();
  BreuilWindowData out;
  out.h = h;
  out.d = w.d;
  out.phi = w.psi_inv;
  out.psi = w.psi;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) {
      if (j >= l) out.phi[i][j] = s_mul(out.phi[i][j], B.E());
      if (i < l) out.psi[i][j] = s_mul(out.psi[i][j], B.E());
    }
  return out;
}

Window<SElem> breuil_to_window(BreuilPtr B, const BreuilWindowData& data) {
  const int h = data.h, l = data.h - data.d;
  if (int(data.phi.size()) != h || int(data.psi.size()) != h) throw UsageError("Breuil data: matrix size != h");
  Matrix<SElem> psi = data.psi;
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < h; ++j) {
      auto q = s_divide(psi[i][j], B->E());
      if (!q) throw PropertyViolation("Breuil data: psi entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") is not divisible by E");
      psi[i][j] = *q;
    }
  Window<SElem> w = window_make<SElem>(B, h, data.d, psi);
  Matrix<SElem> phi = w.psi_inv;
  for (int i = 0; i < h; ++i)
    for (int j = l; j < h; ++j) phi[i][j] = s_mul(phi[i][j], B->E());
  if (!mat_eq(*B, phi, data.phi)) throw PropertyViolation("Breuil data: phi != Psi^{-1} diag(1, E)");
  return w;
}

CheckReport check_breuil(const BreuilFrame& B, const BreuilWindowData& data) {
  CheckReport r;
  Matrix<SElem> E = mat_identity(B, data.h);
  for (int i = 0; i < data.h; ++i) E[i][i] = B.E();
  r.expect(mat_eq(B, mat_mul(B, data.phi, data.psi), E), "phi psi != E");
  r.expect(mat_eq(B, mat_mul(B, data.psi, data.phi), E), "psi phi != E");
  return r;
}

// ---------------------------------------------------------------------------
// towers

TowerReport tower_identity_check(const FrobeniusLift& s, const DescPtr& base, const std::string& pi_text,
                                 int depth) {
  const SPtr& S = s.ring();
  if (depth < 0 || depth > 3) throw UsageError("tower depth must be in 0..3");
  if (S->residue_degree() != 1) throw UsageError("towers are built for residue field F_p");
  const SElem& st = s.sigma_t();
  const int deg = st.degree();
  uint64_t top = 1;
  for (int i = 0; i < depth; ++i) top *= uint64_t(deg);
  if (top >= uint64_t(S->M())) throw PrecisionExhausted("sigma^" + std::to_string(depth) + "(t) has degree " +
                                                        std::to_string(top) + ", needs M > degree");
  TowerReport rep;
  rep.depth = depth;
  std::vector<DescPtr> descs{base};
  auto poly_in = [&](const std::string& x) {
    std::string txt;
    for (int i = deg; i >= 0; --i) {
      uint32_t c = st[i].coords()[0];
      if (!c) continue;
      txt += (txt.empty() ? "" : "+") + std::to_string(c) + "*" + x + "^" + std::to_string(i);
    }
    return txt;
  };
  std::string prev = "(" + pi_text + ")";
  for (int i = 1; i <= depth; ++i) {
    std::string x = "x" + std::to_string(i);
    descs.push_back(RingDescriptor::ext(descs.back(), x, parse_expr(poly_in(x) + "-" + prev)));
    prev = x;
  }
  for (auto& d : descs) rep.rings.push_back(Ring::make(d));
  const Ring& R = *rep.rings.back();
  if (R.char_exponent() > S->N()) throw PrecisionExhausted("tower needs N >= the characteristic exponent of R");
  std::vector<RingElement> pis{R.parse(pi_text)};
  for (int i = 1; i <= depth; ++i) pis.push_back(R.var("x" + std::to_string(i)));
  std::vector<SElem> P{SElem::t(S)};
  for (int n = 1; n <= depth; ++n) P.push_back(s.apply(P.back()));
  auto ev = [&R](const SElem& f, const RingElement& x) { return s_eval(f, R, x); };
  auto tag = [](int n, const std::string& inner) {
    return "sigma^" + std::to_string(n) + "(t)(" + inner + ")";
  };
  for (int i = 0; i < depth; ++i) {
    bool ok = ev(P[1], pis[i + 1]) == pis[i];
    if (!ok) throw PropertyViolation("tower inconsistency at level " + std::to_string(i + 1));
  }
  for (int n = 0; n <= depth; ++n) {
    bool ok = ev(P[n], pis[n]) == pis[0];
    rep.checks.expect(ok, tag(n, "pi^(" + std::to_string(n) + ")") + " != pi");
    rep.lines.push_back(tag(n, "pi^(" + std::to_string(n) + ")") + " = pi: " + (ok ? "ok" : "FAIL"));
  }
  for (int n = 0; n <= depth; ++n)
    for (int m = 0; n + m <= depth; ++m) {
      RingElement a = ev(P[n], ev(P[m], pis[n]));
      RingElement b = ev(P[n + m], pis[n]);
      RingElement c = ev(P[m], pis[0]);
      bool ok = a == b && b == c;
      std::string lhs = tag(n, tag(m, "pi^(" + std::to_string(n) + ")"));
      rep.checks.expect(ok, lhs + " identity fails");
      rep.lines.push_back(lhs + " = " + tag(n + m, "pi^(" + std::to_string(n) + ")") + " = " + tag(m, "pi") + ": " +
                          (ok ? "ok" : "FAIL"));
    }
  return rep;
}

}  // namespace wz
