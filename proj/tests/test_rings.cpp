#include <random>
#include <set>

#include "doctest.h"
#include "wz/kernels.hpp"
#include "wz/ring.hpp"

using namespace wz;

namespace {

RingPtr zmod(uint32_t p, int a) { return Ring::make(RingDescriptor::zmod(p, a)); }
RingPtr series(DescPtr b, int M) { return Ring::make(RingDescriptor::series(b, "t", M)); }
RingPtr ext(DescPtr b, const std::string& poly, int k = 0) {
  return Ring::make(RingDescriptor::ext(b, "x", parse_expr(poly), k));
}

// Brute-force oracle: m = non-units, m^j = additive closure of j-fold products.
std::set<Vec> brute_power(const Ring& R, int j) {
  auto all = R.elements();
  std::vector<RingElement> m;
  for (auto& x : all) {
    bool unit = false;
    for (auto& y : all)
      if (x * y == R.one()) {
        unit = true;
        break;
      }
    if (!unit) m.push_back(x);
  }
  std::set<Vec> cur;
  if (j == 0) {
    for (auto& x : all) cur.insert(x.coords());
    return cur;
  }
  std::vector<RingElement> prods = m;
  for (int k = 1; k < j; ++k) {
    std::set<Vec> seen;
    std::vector<RingElement> next;
    for (auto& a : prods)
      for (auto& b : m) {
        auto c = a * b;
        if (seen.insert(c.coords()).second) next.push_back(c);
      }
    prods = next;
  }
  std::vector<RingElement> span{R.zero()};
  std::set<Vec> inspan{R.zero().coords()};
  for (size_t i = 0; i < span.size(); ++i)
    for (auto& g : prods) {
      auto s = span[i] + g;
      if (inspan.insert(s.coords()).second) span.push_back(s);
    }
  return inspan;
}

void check_axioms(const Ring& R, int samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto all = R.elements();
  auto pick = [&] { return all[rng() % all.size()]; };
  for (int s = 0; s < samples; ++s) {
    auto a = pick(), b = pick(), c = pick();
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + R.zero() == a);
    CHECK(a * R.one() == a);
    CHECK(a + (-a) == R.zero());
  }
}

}  // namespace

TEST_CASE("Zmod(8) local structure") {
  auto R = zmod(2, 3);
  CHECK(R->order() == 8);
  CHECK(R->nilpotency() == 3);
  CHECK(R->residue_degree() == 1);
  CHECK(R->char_exponent() == 3);
  auto m = R->enumerate_ideal(1);
  CHECK(m.size() == 4);
  auto m2 = R->enumerate_ideal(2);
  REQUIRE(m2.size() == 2);
  CHECK(m2[0] == R->zero());
  CHECK(m2[1] == R->from_int(4));
  auto m3 = R->enumerate_ideal(3);
  REQUIRE(m3.size() == 1);
  CHECK(m3[0].is_zero());
  CHECK(R->section(R->residue_field()->one()) == R->one());
  CHECK(R->section(R->residue_field()->zero()) == R->zero());
}

TEST_CASE("F5[t]/t^2") {
  auto R = series(RingDescriptor::fp(5), 2);
  CHECK(R->order() == 25);
  CHECK(R->nilpotency() == 2);
  auto m = R->enumerate_ideal(1);
  std::set<std::string> got;
  for (auto& x : m) got.insert(x.str());
  CHECK(got == std::set<std::string>{"0", "t", "2*t", "3*t", "4*t"});
}

TEST_CASE("Z/9[x]/(x^2-3)") {
  auto R = ext(RingDescriptor::zmod(3, 2), "x^2-3");
  CHECK(R->order() == 81);
  CHECK(R->nilpotency() == 4);
  for (int j = 0; j <= 4; ++j) {
    auto ours = R->enumerate_ideal(j);
    std::set<Vec> mine;
    for (auto& x : ours) mine.insert(x.coords());
    CHECK(mine == brute_power(*R, j));
  }
  CHECK(R->in_max_ideal(R->var("x")));
  CHECK(R->pow(R->var("x"), 2) == R->from_int(3));
}

TEST_CASE("brute-force nilpotency on assorted rings") {
  std::vector<RingPtr> rings = {
      zmod(3, 3),
      series(RingDescriptor::fq(2, 2), 3),
      ext(RingDescriptor::zmod(2, 2), "x^2+2"),
      ext(RingDescriptor::zmod(2, 3), "x^2-2", 3),
      series(RingDescriptor::zmod(2, 2), 2),
  };
  for (auto& R : rings) {
    CAPTURE(R->name());
    const int e = R->nilpotency();
    CHECK(brute_power(*R, e).size() == 1);
    CHECK(brute_power(*R, e - 1).size() > 1);
    CHECK(R->enumerate_ideal(e - 1).size() == brute_power(*R, e - 1).size());
    check_axioms(*R, 200, 7);
  }
}

TEST_CASE("finite fields") {
  auto F4 = Ring::make(RingDescriptor::fq(2, 2));
  CHECK(F4->order() == 4);
  CHECK(F4->is_field());
  auto z = F4->var("z");
  CHECK(z * z == z + F4->one());
  auto F9 = Ring::make(RingDescriptor::fq(3, 2));
  CHECK(F9->is_field());
  CHECK(F9->order() == 9);
  auto F8 = Ring::make(RingDescriptor::fq(2, 3));
  for (auto& x : F8->elements())
    if (!x.is_zero()) CHECK(x * F8->inverse(x) == F8->one());
  CHECK_THROWS_AS(Ring::make(RingDescriptor::fq_poly(2, parse_expr("z^2+1"))), DomainError);
  check_axioms(*F8, 100, 3);
}

TEST_CASE("section is multiplicative and splits the residue map") {
  std::vector<RingPtr> rings = {series(RingDescriptor::fq(2, 2), 2), series(RingDescriptor::fq(2, 2), 3),
                                zmod(2, 3), ext(RingDescriptor::fq(3, 2), "x^2", 0),
                                ext(RingDescriptor::zmod(3, 2), "x^2-3")};
  for (auto& R : rings) {
    CAPTURE(R->name());
    auto k = R->residue_field();
    auto ks = k->elements();
    for (auto& a : ks) {
      CHECK(R->residue(R->section(a)) == a);
      for (auto& b : ks) CHECK(R->section(a * b) == R->section(a) * R->section(b));
    }
    CHECK(R->section(k->one()) == R->one());
  }
  // F4[t]/t^2: the section of a generator is the constant coefficient.
  auto R = series(RingDescriptor::fq(2, 2), 2);
  auto k = R->residue_field();
  CHECK(R->section(k->var("z")) == R->var("z"));
}

TEST_CASE("units and inverses") {
  auto R = ext(RingDescriptor::zmod(3, 2), "x^2-3");
  for (auto& x : R->elements()) {
    if (R->is_unit(x)) CHECK(x * R->inverse(x) == R->one());
    else CHECK_THROWS_AS(R->inverse(x), DomainError);
  }
}

TEST_CASE("descriptor errors") {
  CHECK_THROWS_AS(zmod(6, 1), DomainError);
  CHECK_THROWS_AS(ext(RingDescriptor::zmod(3, 1), "2*x^2+1"), DomainError);
  CHECK_THROWS_AS(ext(RingDescriptor::fp(2), "x^2+x"), DomainError);
  CHECK_THROWS_AS(zmod(2, 30), EnvelopeExceeded);
}

TEST_CASE("descriptor strings") {
  CHECK(RingDescriptor::zmod(2, 3)->str() == "Zmod(2^3)");
  CHECK(RingDescriptor::series(RingDescriptor::fq(2, 2), "t", 4)->str() == "Series(Fq(2,2),t,4)");
  CHECK(RingDescriptor::ext(RingDescriptor::zmod(3, 2), "x", parse_expr("x^2-3"))->str() ==
        "Ext(Zmod(3^2),x,x^2-3)");
}

TEST_CASE("scalar and AVX2 kernels agree") {
  std::mt19937_64 rng(11);
  for (size_t n : {1u, 3u, 4u, 7u, 16u, 33u}) {
    std::vector<uint32_t> row(n);
    std::vector<uint64_t> a(n), b(n);
    for (int rep = 0; rep < 50; ++rep) {
      for (auto& r : row) r = rng() % (1u << 24);
      uint32_t s = rng() % (1u << 24);
      kernels::axpy_scalar(a.data(), row.data(), s, n);
      if (kernels::avx2_supported()) kernels::axpy_avx2(b.data(), row.data(), s, n);
      else kernels::axpy_scalar(b.data(), row.data(), s, n);
    }
    CHECK(a == b);
  }
  // Whole-ring products under each kernel.
  auto R = series(RingDescriptor::zmod(3, 3), 6);
  std::mt19937_64 g(5);
  std::vector<std::pair<RingElement, RingElement>> pairs;
  for (int i = 0; i < 100; ++i) {
    Vec x(R->rank()), y(R->rank());
    for (auto& v : x) v = g() % 27;
    for (auto& v : y) v = g() % 27;
    pairs.push_back({R->element(x), R->element(y)});
  }
  kernels::select(kernels::Choice::Scalar);
  std::vector<RingElement> s1;
  for (auto& [x, y] : pairs) s1.push_back(x * y);
  kernels::select(kernels::Choice::Auto);
  for (size_t i = 0; i < pairs.size(); ++i) CHECK(pairs[i].first * pairs[i].second == s1[i]);
}
