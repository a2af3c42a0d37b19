#include <gmpxx.h>

#include <random>

#include "doctest.h"
#include "wz/breuil.hpp"

using namespace wz;

namespace {

RingPtr mk(DescPtr d) { return Ring::make(d); }

SPtr s_ring(uint32_t p, int N, int M, int q = 1) {
  return SRing::make(mk(q == 1 ? RingDescriptor::fp(p) : RingDescriptor::fq(p, q)), N, M);
}

std::shared_ptr<const BreuilFrame> frame(const SPtr& S, const std::string& sigma, const std::string& E = "p-t") {
  return std::make_shared<BreuilFrame>(FrobeniusLift::parse(S, sigma), distinguished(S, E));
}

// Integer polynomials truncated at t^M: an oracle for the delta recursion
// independent of the precision-tracking arithmetic.
using IPoly = std::vector<mpz_class>;

IPoly imul(const IPoly& a, const IPoly& b) {
  IPoly r(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; i + j < a.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

IPoly ipow(IPoly a, uint64_t e) {
  IPoly r(a.size(), 0);
  r[0] = 1;
  while (e) {
    if (e & 1) r = imul(r, a);
    a = imul(a, a);
    e >>= 1;
  }
  return r;
}

IPoly icompose(const IPoly& f, const IPoly& g) {  // f(g)
  IPoly r(f.size(), 0), gp(f.size(), 0);
  gp[0] = 1;
  for (size_t i = 0; i < f.size(); ++i) {
    for (size_t j = 0; j < f.size(); ++j) r[j] += f[i] * gp[j];
    gp = imul(gp, g);
  }
  return r;
}

std::vector<IPoly> delta_oracle(uint32_t p, const IPoly& sigma_t, int n) {
  const size_t M = sigma_t.size();
  IPoly t(M, 0);
  t[1] = 1;
  std::vector<IPoly> g{t};
  IPoly sig = t;
  for (int j = 1; j <= n; ++j) {
    sig = icompose(sig, sigma_t);
    IPoly acc = sig;
    mpz_class pe = 1;
    for (int i = j - 1; i >= 0; --i) {
      mpz_class pi;
      mpz_ui_pow_ui(pi.get_mpz_t(), p, i);
      mpz_class e;
      mpz_ui_pow_ui(e.get_mpz_t(), p, j - i);
      auto term = ipow(g[i], e.get_ui());
      for (size_t k = 0; k < M; ++k) acc[k] -= pi * term[k];
    }
    mpz_class pj;
    mpz_ui_pow_ui(pj.get_mpz_t(), p, j);
    for (auto& c : acc) {
      REQUIRE(mpz_divisible_p(c.get_mpz_t(), pj.get_mpz_t()));
      c /= pj;
    }
    g.push_back(acc);
  }
  return g;
}

bool matches(const SElem& x, const IPoly& f) {
  const auto& S = *x.ring();
  for (int i = 0; i < x.size(); ++i) {
    mpz_class q;
    mpz_ui_pow_ui(q.get_mpz_t(), S.p(), x.prec(i));
    mpz_class c = f[i] % q;
    if (c < 0) c += q;
    if (mpz_class(x[i].coords()[0]) != c) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("W_N(F_q) coefficients carry a Frobenius lift") {
  auto S = s_ring(2, 4, 3, 2);
  const Ring& W = *S->coeffs();
  auto z = W.var("z");
  CHECK(S->residue_of(z) == S->residue()->var("z"));
  CHECK(S->sigma(S->sigma(z)) == z);  // F_4: sigma has order 2
  CHECK(!(S->sigma(z) == z));
  CHECK(S->valuation(S->sigma(z) - W.pow(z, 2)) >= 1);
  for (auto& a : S->digits())
    for (auto& b : S->digits()) CHECK(S->sigma(a * b) == S->sigma(a) * S->sigma(b));
  CHECK(S->digits().size() == 4);
}

TEST_CASE("certified division by p and by E") {
  auto S = s_ring(3, 5, 4);
  auto E = distinguished(S, "p-t");
  auto x = SElem::parse(S, "1+2*t+t^3");
  auto q = s_divide(s_mul(E, x), E);
  REQUIRE(q);
  CHECK(*q == x);
  CHECK(q->prec(0) == 4);
  CHECK(q->prec(3) == 1);
  CHECK(!s_divide(SElem::parse(S, "1+t"), E));
  CHECK_THROWS_AS(s_divide_p(SElem::parse(S, "3+t"), 1), PrecisionExhausted);
  CHECK(s_divide_p(SElem::parse(S, "9+3*t"), 1) == SElem::parse(S, "3+t"));
  CHECK_THROWS_AS(distinguished(S, "t-p"), DomainError);
  CHECK_THROWS_AS(FrobeniusLift::parse(S, "t^3+t"), DomainError);
  CHECK_THROWS_AS(FrobeniusLift::parse(S, "1+t^3"), DomainError);
  auto u = SElem::parse(S, "2+3*t+t^2");
  CHECK(s_mul(u, s_inverse(u)) == SElem::one(S));
}

TEST_CASE("frame B: sigma1(E) = 1, sigma1(E t) = sigma(t), axioms") {
  std::mt19937_64 g(1);
  struct Case {
    uint32_t p;
    int N, M, q;
    std::string sigma, E;
  };
  for (auto c : {Case{2, 6, 4, 1, "t^2", "p-t"}, Case{3, 6, 4, 1, "t^3+9*t", "p-t"},
                 Case{3, 6, 4, 1, "t^3+3*t", "p-t+t^2"}, Case{2, 5, 3, 2, "t^2+4*t", "p+z*t"}}) {
    auto S = s_ring(c.p, c.N, c.M, c.q);
    auto B = frame(S, c.sigma, c.E);
    CAPTURE(B->name());
    CHECK(B->sigma1(B->E()) == B->one());
    CHECK(B->sigma1(s_mul(B->E(), SElem::t(S))) == B->lift().sigma_t());
    auto r = check_frame(*B, 10, g);
    CHECK_MESSAGE(r.ok(), (r.failures.empty() ? "" : r.failures[0]));
    CHECK(r.skipped == 0);
    CHECK_THROWS_AS(B->sigma1(B->one()), PropertyViolation);
  }
}

TEST_CASE("delta: ghost recursion against integer polynomials") {
  // sigma(t) = t^p gives the Teichmuller vector [t]
  for (uint32_t p : {2u, 3u}) {
    auto S = s_ring(p, 6, 5);
    auto s = FrobeniusLift::standard(S);
    auto g = delta(s, SElem::t(S), 3);
    CHECK(g[0] == SElem::t(S));
    for (int i = 1; i <= 3; ++i) CHECK(g[i].is_zero());
  }
  auto S = s_ring(3, 7, 5);
  auto g = delta(FrobeniusLift::parse(S, "t^p+p^2*t"), SElem::t(S), 2);
  CHECK(g[1] == SElem::parse(S, "3*t"));
  g = delta(FrobeniusLift::parse(S, "t^p+p*t"), SElem::t(S), 2);
  CHECK(g[1] == SElem::t(S));
  // general recursion against exact integer arithmetic
  for (std::string sig : {"t^3+9*t", "t^3+3*t", "t^3+9*t^2+27*t"}) {
    CAPTURE(sig);
    auto s = FrobeniusLift::parse(S, sig);
    IPoly st(S->M(), 0);
    for (int i = 0; i < S->M(); ++i) st[i] = s.sigma_t()[i].coords()[0];
    auto ref = delta_oracle(3, st, 3);
    auto got = delta(s, SElem::t(S), 3);
    for (int j = 0; j <= 3; ++j) {
      CHECK(got[j].prec(0) == S->N() - j);
      CHECK(matches(got[j], ref[j]));
    }
  }
  CHECK_THROWS_AS(delta(FrobeniusLift::standard(S), SElem::t(S), 7), PrecisionExhausted);
}

TEST_CASE("delta: w0 = id, recursion and delta sigma = f delta on samples") {
  std::mt19937_64 g(2);
  for (auto [p, sig] : {std::pair<uint32_t, std::string>{2, "t^2+4*t"}, {3, "t^3+3*t"}, {3, "t^3"}}) {
    auto S = s_ring(p, 6, 4);
    auto s = FrobeniusLift::parse(S, sig);
    auto B = frame(S, sig);
    for (int k = 0; k < 4; ++k) {
      auto x = B->random(g);
      auto r = check_delta(s, x, 2);
      CHECK_MESSAGE(r.ok(), (r.failures.empty() ? "" : r.failures[0]));
      CHECK(r.checked == 6);
    }
  }
}

TEST_CASE("kappa membership matches the p^2 criterion") {
  for (uint32_t p : {2u, 3u}) {
    auto S = s_ring(p, p == 2 ? 12 : 10, 3);
    auto R = mk(RingDescriptor::zmod(p, 2));
    auto E = distinguished(S, "p-t");
    for (std::string sig : {"t^p", "t^p+p*t", "t^p+p^2*t", "t^p+p^2*t^2+p^3*t"}) {
      CAPTURE(p);
      CAPTURE(sig);
      auto s = FrobeniusLift::parse(S, sig);
      Kappa k(s, E, R, R->from_int(p));
      CHECK(k.in_zink() == k.criterion());
      CHECK(k.criterion() == (sig != "t^p+p*t"));
      if (!k.in_zink()) {
        CHECK(k.support() == k.tested_length());
        CHECK_THROWS_AS(k.zink(), UsageError);
      }
    }
    // sigma(t) = t^p: kappa(t) = [pi]
    Kappa k(FrobeniusLift::standard(S), E, R, R->from_int(p));
    CHECK(k.kappa_t() == WittVector::teichmuller(R, k.tested_length(), R->from_int(p)));
  }
}

TEST_CASE("units u and c") {
  // p = 3, sigma(t) = t^3, R = Z/9: u = v^{-1}(3 - [3]) with ghost
  // components 1 - 3^{3^{n+1} - 1}
  auto S = s_ring(3, 10, 3);
  auto R = mk(RingDescriptor::zmod(3, 2));
  Kappa k(FrobeniusLift::standard(S), distinguished(S, "p-t"), R, R->from_int(3));
  auto U = units_u_c(k);
  auto r = check_units(k, U);
  CHECK_MESSAGE(r.ok(), (r.failures.empty() ? "" : r.failures[0]));
  const int L = 4;
  std::vector<mpz_class> x;
  for (int n = 0; n < L; ++n) {
    mpz_class w, e;
    mpz_ui_pow_ui(e.get_mpz_t(), 3, n + 1);
    mpz_ui_pow_ui(w.get_mpz_t(), 3, e.get_ui() - 1);
    w = 1 - w;
    for (int i = 0; i < n; ++i) {
      mpz_class pi, xe;
      mpz_ui_pow_ui(pi.get_mpz_t(), 3, i);
      mpz_ui_pow_ui(xe.get_mpz_t(), 3, n - i);
      mpz_class t;
      mpz_pow_ui(t.get_mpz_t(), x[i].get_mpz_t(), xe.get_ui());
      w -= pi * t;
    }
    mpz_class pn;
    mpz_ui_pow_ui(pn.get_mpz_t(), 3, n);
    REQUIRE(mpz_divisible_p(w.get_mpz_t(), pn.get_mpz_t()));
    x.push_back(w / pn);
  }
  auto emb = embed(U.u, L);
  for (int n = 0; n < L; ++n) {
    mpz_class c = x[n] % 9;
    if (c < 0) c += 9;
    CHECK(emb[n] == R->from_int(c.get_si()));
  }
  // p = 2, sigma(t) = t^2, R = Z/4: kappa(E) = 2 - [2] = v(u0), so u = 1
  auto S2 = s_ring(2, 12, 3);
  auto R2 = mk(RingDescriptor::zmod(2, 2));
  Kappa k2(FrobeniusLift::standard(S2), distinguished(S2, "p-t"), R2, R2->from_int(2));
  auto U2 = units_u_c(k2);
  CHECK(U2.u == ZinkElement::one(k2.zink()));
  CHECK(check_units(k2, U2).ok());
  // t^3 + 9t over Z/27
  auto R3 = mk(RingDescriptor::zmod(3, 3));
  auto S3 = s_ring(3, 12, 4);
  Kappa k3(FrobeniusLift::parse(S3, "t^3+9*t"), distinguished(S3, "p-t"), R3, R3->from_int(3));
  REQUIRE(k3.in_zink());
  auto U3 = units_u_c(k3);
  auto r3 = check_units(k3, U3);
  CHECK_MESSAGE(r3.ok(), (r3.failures.empty() ? "" : r3.failures[0]));
}

TEST_CASE("kappa is a u-homomorphism B -> D_R") {
  std::mt19937_64 g(3);
  for (std::string sig : {"t^3", "t^3+9*t"}) {
    CAPTURE(sig);
    auto S = s_ring(3, 10, 3);
    auto R = mk(RingDescriptor::zmod(3, 2));
    auto B = frame(S, sig);
    Kappa k(B->lift(), B->E(), R, R->from_int(3));
    auto U = units_u_c(k);
    auto m = kappa_map(B, k, U);
    auto r = check_map(m, 8, g);
    CHECK_MESSAGE(r.ok(), (r.failures.empty() ? "" : r.failures[0]));
    for (int s = 0; s < 5; ++s) {
      auto x = B->random(g);
      auto Ex = s_mul(B->E(), x);
      CHECK(zink_f1(k.apply(Ex)) == zink_mul(U.u, k.apply(B->sigma1(Ex))));
    }
    // the unit window goes to the unit window
    auto w = base_change(m, unit_window<SElem>(B));
    CHECK(mat_eq(*m.target, w.psi, unit_window<ZinkElement>(m.target).psi));
  }
}

TEST_CASE("window <-> Breuil window round trip") {
  std::mt19937_64 g(4);
  auto S = s_ring(2, 5, 4);
  auto B = frame(S, "t^2+4*t");
  auto u = window_to_breuil(unit_window<SElem>(B));
  CHECK(u.phi[0][0] == B->E());
  CHECK(u.psi[0][0] == B->one());
  auto e = window_to_breuil(etale_unit_window<SElem>(B));
  CHECK(e.phi[0][0] == B->one());
  CHECK(e.psi[0][0] == B->E());
  std::vector<Window<SElem>> ws = {unit_window<SElem>(B), etale_unit_window<SElem>(B), zero_window<SElem>(B)};
  for (int d : {0, 1, 2})
    for (int s = 0; s < 2; ++s) {
      Matrix<SElem> m;
      do {
        m = {{B->random(g), B->random(g)}, {B->random(g), B->random(g)}};
      } while (!mat_inverse(*B, m));
      ws.push_back(window_make<SElem>(B, 2, d, m));
    }
  for (auto& w : ws) {
    CAPTURE(w.d);
    auto r = check_window(w, 3, g);
    CHECK_MESSAGE(r.ok(), (r.failures.empty() ? "" : r.failures[0]));
    auto data = window_to_breuil(w);
    CHECK(check_breuil(*B, data).ok());
    auto w2 = breuil_to_window(B, data);
    CHECK(mat_eq(*B, w2.psi, w.psi));
    auto data2 = window_to_breuil(w2);
    CHECK(mat_eq(*B, data2.phi, data.phi));
    CHECK(mat_eq(*B, data2.psi, data.psi));
  }
  BreuilWindowData bad{1, 1, {{B->one()}}, {{B->E()}}};
  CHECK_THROWS_AS(breuil_to_window(B, bad), PropertyViolation);
}

TEST_CASE("tower identities up to depth 2 over Z/p^2") {
  for (uint32_t p : {2u, 3u}) {
    for (std::string sig : {"t^p", "t^p+p^2*t"}) {
      CAPTURE(p);
      CAPTURE(sig);
      auto S = s_ring(p, 4, p * p + 1);
      auto s = FrobeniusLift::parse(S, sig);
      for (int depth : {0, 1, 2}) {
        auto rep = tower_identity_check(s, RingDescriptor::zmod(p, 2), std::to_string(p), depth);
        CHECK(rep.checks.ok());
        CHECK(int(rep.rings.size()) == depth + 1);
        CHECK(rep.checks.checked == (depth + 1) + (depth + 1) * (depth + 2) / 2);
      }
    }
  }
  auto S = s_ring(3, 4, 5);
  CHECK_THROWS_AS(tower_identity_check(FrobeniusLift::standard(S), RingDescriptor::zmod(3, 2), "3", 2),
                  PrecisionExhausted);
}

TEST_CASE("invariants of the etale unit window over B are the constants") {
  auto S = s_ring(2, 3, 3);
  auto B = frame(S, "t^2");
  for (int K : {1, 2, 3}) {
    auto T = invariants(etale_unit_window<SElem>(B), 2e5, K);
    CHECK(T.order() == (1u << K));
    for (auto& x : T.elements) CHECK(x[0].degree() <= 0);
  }
  auto T = invariants(unit_window<SElem>(B));
  CHECK(T.cross_checked);
  CHECK(T.order() == 1);
}
