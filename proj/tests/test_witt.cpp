#include <gmpxx.h>

#include <random>

#include "doctest.h"
#include "wz/witt.hpp"

using namespace wz;

namespace {

RingPtr mk(DescPtr d) { return Ring::make(d); }

WittVector random_witt(const RingPtr& R, int N, std::mt19937_64& g) {
  auto all = R->elements();
  std::vector<RingElement> c;
  for (int i = 0; i < N; ++i) c.push_back(all[g() % all.size()]);
  return WittVector::from_coords(R, c);
}

std::vector<WittVector> all_witt(const RingPtr& R, int N) {
  auto all = R->elements();
  std::vector<WittVector> out;
  std::vector<size_t> idx(N, 0);
  for (;;) {
    std::vector<RingElement> c;
    for (int i = 0; i < N; ++i) c.push_back(all[idx[i]]);
    out.push_back(WittVector::from_coords(R, c));
    int k = N - 1;
    while (k >= 0 && ++idx[k] == all.size()) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

mpz_class eval_int(const IntPoly& f, const std::vector<mpz_class>& x, const std::vector<mpz_class>& y) {
  mpz_class acc = 0;
  for (const auto& [m, c] : f.terms) {
    mpz_class t = c;
    for (int v = 0; v < 16; ++v) {
      if (!m.e[v]) continue;
      mpz_class b = v < kYSlot ? x[v] : y[v - kYSlot], r;
      mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), m.e[v]);
      t *= r;
    }
    acc += t;
  }
  return acc;
}

mpz_class ghost_int(uint32_t p, int m, const std::vector<mpz_class>& z) {
  mpz_class acc = 0, pi = 1;
  for (int i = 0; i <= m; ++i) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), z[i].get_mpz_t(), [&] {
      unsigned long e = 1;
      for (int k = 0; k < m - i; ++k) e *= p;
      return e;
    }());
    acc += pi * r;
    pi *= p;
  }
  return acc;
}

}  // namespace

TEST_CASE("universal polynomials for p=2, n<=1") {
  auto U = universal_polynomials(2, 1);
  CHECK(U->S[0].str() == "X0+Y0");
  CHECK(U->S[1].str() == "X1+Y1-X0*Y0");
  // X0^2 Y1 + X1 Y0^2 + 2 X1 Y1, as derived by hand from w_1 = Z0^2 + 2 Z1
  IntPoly expected = IntPoly::var(0, 2) * IntPoly::var(kYSlot + 1) +
                     IntPoly::var(1) * IntPoly::var(kYSlot, 2) +
                     scale(IntPoly::var(1) * IntPoly::var(kYSlot + 1), 2);
  CHECK(U->P[1] == expected);
}

TEST_CASE("universal identities hold as polynomials") {
  for (uint32_t p : {2u, 3u, 5u})
    for (int n = 0; n <= 3; ++n) {
      CAPTURE(p);
      CAPTURE(n);
      CHECK(verify_universal_identities(*universal_polynomials(p, n)) == "");
    }
  CHECK_THROWS_AS(universal_polynomials(5, 4), EnvelopeExceeded);
  CHECK_THROWS_AS(universal_polynomials(2, 7), EnvelopeExceeded);
}

TEST_CASE("universal polynomials evaluated at integer points satisfy the ghost identities") {
  std::mt19937_64 g(17);
  for (uint32_t p : {2u, 3u}) {
    const int n = 3;
    auto U = universal_polynomials(p, n);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<mpz_class> x(n + 1), y(n + 1);
      for (auto& v : x) v = long(g() % 41) - 20;
      for (auto& v : y) v = long(g() % 41) - 20;
      std::vector<mpz_class> s, pr;
      for (int i = 0; i <= n; ++i) {
        s.push_back(eval_int(U->S[i], x, y));
        pr.push_back(eval_int(U->P[i], x, y));
      }
      for (int m = 0; m <= n; ++m) {
        CHECK(ghost_int(p, m, s) == ghost_int(p, m, x) + ghost_int(p, m, y));
        CHECK(ghost_int(p, m, pr) == ghost_int(p, m, x) * ghost_int(p, m, y));
      }
    }
  }
}

TEST_CASE("small Witt examples") {
  auto F2 = mk(RingDescriptor::fp(2));
  auto a = WittVector::from_coords(F2, {F2->one(), F2->zero()});
  CHECK(a + a == WittVector::from_coords(F2, {F2->zero(), F2->one()}));
  auto Z8 = mk(RingDescriptor::zmod(2, 3));
  auto t2 = WittVector::teichmuller(Z8, 2, Z8->from_int(2));
  auto t3 = WittVector::teichmuller(Z8, 2, Z8->from_int(3));
  CHECK(t2 * t3 == WittVector::teichmuller(Z8, 2, Z8->from_int(6)));
  auto x = WittVector::from_coords(Z8, {Z8->from_int(3), Z8->from_int(5)});
  CHECK(x + WittVector::zero(Z8, 2) == x);
  auto Z27 = mk(RingDescriptor::zmod(3, 3));
  auto y = WittVector::from_coords(Z27, {Z27->one(), Z27->one()});
  auto gh = ghost(y);
  CHECK(gh[0] == Z27->one());
  CHECK(gh[1] == Z27->from_int(4));
  CHECK(WittVector::from_coords(Z8, {Z8->one(), Z8->zero(), Z8->one()}).str() ==
        "W[p=2,N=3; 1,0,1]@Zmod(2^3)");
}

TEST_CASE("integers in W(Z/p^a)") {
  auto Z16 = mk(RingDescriptor::zmod(2, 4));
  auto two = WittVector::from_int(Z16, 4, 2);
  CHECK(two == WittVector::one(Z16, 4) + WittVector::one(Z16, 4));
  auto m1 = WittVector::from_int(Z16, 4, -1);
  CHECK((m1 + WittVector::one(Z16, 4)).is_zero());
  for (auto& g : ghost(two)) CHECK(g == Z16->from_int(2));
}

TEST_CASE("Witt ring identities, exhaustive over W_2(F_2) and W_2(F_4)") {
  for (auto R : {mk(RingDescriptor::fp(2)), mk(RingDescriptor::fq(2, 2))}) {
    auto all = all_witt(R, 2);
    auto all1 = all_witt(R, 1);
    for (auto& x : all)
      for (auto& y : all) {
        auto gx = ghost(x), gy = ghost(y), gs = ghost(x + y), gp = ghost(x * y);
        for (int m = 0; m < 2; ++m) {
          CHECK(gs[m] == gx[m] + gy[m]);
          CHECK(gp[m] == gx[m] * gy[m]);
        }
        CHECK(frobenius(x * y) == frobenius(x) * frobenius(y));
        CHECK(frobenius(x, Truncation::Stationary) * frobenius(y, Truncation::Stationary) ==
              frobenius(x * y, Truncation::Stationary));
        CHECK(WittVector::teichmuller(R, 2, x[0] * y[0]) ==
              WittVector::teichmuller(R, 2, x[0]) * WittVector::teichmuller(R, 2, y[0]));
        // v(x') y = v(x' f(y)) with x' in W_1
        for (auto& x1 : all1) CHECK(verschiebung(x1) * y == verschiebung(x1 * frobenius(y)));
      }
    for (auto& x : all1) CHECK(frobenius(verschiebung(x)) == witt_scale(x, 2));
  }
}

TEST_CASE("Witt ring identities on random samples over W_3(Z/27)") {
  auto R = mk(RingDescriptor::zmod(3, 3));
  std::mt19937_64 g(3);
  for (int s = 0; s < 300; ++s) {
    auto x = random_witt(R, 3, g), y = random_witt(R, 3, g), z = random_witt(R, 3, g);
    auto gx = ghost(x), gy = ghost(y), gs = ghost(x + y), gp = ghost(x * y);
    for (int m = 0; m < 3; ++m) {
      CHECK(gs[m] == gx[m] + gy[m]);
      CHECK(gp[m] == gx[m] * gy[m]);
    }
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    auto x2 = x.truncate(2);
    CHECK(frobenius(verschiebung(x2)) == witt_scale(x2, 3));
    CHECK(verschiebung(x2) * y == verschiebung(x2 * frobenius(y)));
    auto gf = ghost(frobenius(x));
    for (int m = 0; m < 2; ++m) CHECK(gf[m] == gx[m + 1]);
    auto gv = ghost(verschiebung(x2));
    CHECK(gv[0].is_zero());
    for (int m = 1; m < 3; ++m) CHECK(gv[m] == R->scale(ghost(x2)[m - 1], 3));
  }
}

TEST_CASE("polynomial and ghost-lift backends agree") {
  std::vector<RingPtr> rings = {mk(RingDescriptor::zmod(3, 3)), mk(RingDescriptor::zmod(2, 4)),
                                mk(RingDescriptor::series(RingDescriptor::fq(2, 2), "t", 3)),
                                mk(RingDescriptor::ext(RingDescriptor::zmod(3, 2), "x", parse_expr("x^2-3"))),
                                mk(RingDescriptor::ext(RingDescriptor::zmod(2, 3), "x", parse_expr("x^2-2"), 3))};
  std::mt19937_64 g(9);
  for (auto& R : rings) {
    CAPTURE(R->name());
    const int N = R->p() == 2 ? 5 : 4;
    for (int s = 0; s < 20; ++s) {
      auto x = random_witt(R, N, g), y = random_witt(R, N, g);
      CHECK(witt_add(x, y, WittBackend::Polynomial) == witt_add(x, y, WittBackend::GhostLift));
      CHECK(witt_mul(x, y, WittBackend::Polynomial) == witt_mul(x, y, WittBackend::GhostLift));
      CHECK(frobenius(x, Truncation::Drop, WittBackend::Polynomial) ==
            frobenius(x, Truncation::Drop, WittBackend::GhostLift));
      CHECK(witt_neg(x, WittBackend::Polynomial) == witt_neg(x, WittBackend::GhostLift));
    }
  }
}

TEST_CASE("Frobenius is the coordinatewise p-th power in characteristic p") {
  auto R = mk(RingDescriptor::series(RingDescriptor::fq(2, 2), "t", 2));
  std::mt19937_64 g(4);
  for (int s = 0; s < 100; ++s) {
    auto x = random_witt(R, 3, g);
    CHECK(frobenius(x) == frobenius(x, Truncation::Stationary).truncate(2));
  }
  auto Z4 = mk(RingDescriptor::zmod(2, 2));
  CHECK_THROWS_AS(frobenius(WittVector::one(Z4, 2), Truncation::Stationary), PrecisionExhausted);
}

TEST_CASE("Witt inverses") {
  auto R = mk(RingDescriptor::ext(RingDescriptor::zmod(3, 2), "x", parse_expr("x^2-3")));
  std::mt19937_64 g(5);
  int units = 0;
  for (int s = 0; s < 100; ++s) {
    auto x = random_witt(R, 3, g);
    if (!R->is_unit(x[0])) {
      CHECK_THROWS_AS(witt_inverse(x), DomainError);
      continue;
    }
    ++units;
    CHECK(x * witt_inverse(x) == WittVector::one(R, 3));
  }
  CHECK(units > 20);
}

TEST_CASE("length mismatch is a usage error") {
  auto R = mk(RingDescriptor::zmod(2, 2));
  CHECK_THROWS_AS(WittVector::one(R, 2) + WittVector::one(R, 3), UsageError);
  CHECK_THROWS_AS(frobenius(WittVector::zero(R, 1)), PrecisionExhausted);
}
