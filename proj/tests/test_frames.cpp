#include <random>

#include "doctest.h"
#include "wz/zink_frames.hpp"

using namespace wz;

namespace {

RingPtr mk(DescPtr d) { return Ring::make(d); }
RingPtr dual_numbers(uint32_t p) { return mk(RingDescriptor::series(RingDescriptor::fp(p), "t", 2)); }

template <class E>
Matrix<E> antidiagonal(const Frame<E>& F) {
  return {{F.zero(), F.one()}, {F.one(), F.zero()}};
}

template <class E>
Matrix<E> random_invertible(const Frame<E>& F, int h, std::mt19937_64& g) {
  for (;;) {
    Matrix<E> m(h, Vector<E>());
    for (auto& row : m)
      for (int j = 0; j < h; ++j) row.push_back(F.random(g));
    if (mat_inverse(F, m)) return m;
  }
}

template <class E>
void check_battery(FramePtr<E> F, std::mt19937_64& g) {
  std::vector<Window<E>> ws = {unit_window(F), etale_unit_window(F), zero_window(F),
                               window_make(F, 2, 1, antidiagonal(*F)),
                               window_make(F, 2, 1, random_invertible(*F, 2, g))};
  for (auto& w : ws) {
    CAPTURE(w.h);
    CAPTURE(w.d);
    auto r = check_window(w, 4, g);
    CHECK_MESSAGE(r.ok(), (r.failures.empty() ? "" : r.failures[0]));
    auto wt = dual(w);
    CHECK(wt.d == w.h - w.d);
    CHECK(check_window(wt, 3, g).ok());
    auto b = dual_pairing(w);
    CHECK(is_perfect(b));
    auto rb = check_bilinear(b, 4, g);
    CHECK_MESSAGE(rb.ok(), (rb.failures.empty() ? "" : rb.failures[0]));
    auto wtt = dual(wt);
    CHECK(wtt.d == w.d);
    CHECK(mat_eq(*F, wtt.psi, w.psi));
  }
}

}  // namespace

TEST_CASE("frame axioms") {
  std::mt19937_64 g(1);
  std::vector<std::shared_ptr<const ZinkFrame>> frames = {
      ZinkFrame::witt(mk(RingDescriptor::fq(2, 2)), 3), ZinkFrame::witt(mk(RingDescriptor::fp(3)), 3),
      ZinkFrame::make(dual_numbers(2), 4), ZinkFrame::make(dual_numbers(3), 3),
      ZinkFrame::make(mk(RingDescriptor::zmod(2, 2)), 3), ZinkFrame::make(mk(RingDescriptor::zmod(3, 2)), 3)};
  for (auto& F : frames) {
    CAPTURE(F->name());
    auto r = check_frame(*F, 8, g);
    CHECK_MESSAGE(r.ok(), (r.failures.empty() ? "" : r.failures[0]));
    CHECK(r.skipped == 0);
  }
  auto Z = ZinkRing::make(mk(RingDescriptor::zmod(2, 2)), 3);
  auto r = check_frame(ZinkPlusFrame(Z), 6, g);
  CHECK_MESSAGE(r.ok(), (r.failures.empty() ? "" : r.failures[0]));
}

TEST_CASE("theta of the Witt frame is p") {
  auto F = ZinkFrame::witt(mk(RingDescriptor::fp(2)), 3);
  CHECK(F->eq(F->theta(), F->from_int(2)));
  auto Z = ZinkRing::make(mk(RingDescriptor::zmod(2, 2)), 3);
  ZinkPlusFrame P(Z);
  CHECK(P.eq(P.theta(), P.from_int(2)));
}

TEST_CASE("window battery with duals over Witt and Zink frames") {
  std::mt19937_64 g(2);
  check_battery<ZinkElement>(ZinkFrame::witt(mk(RingDescriptor::fq(2, 2)), 3), g);
  check_battery<ZinkElement>(ZinkFrame::make(dual_numbers(2), 4), g);
  check_battery<ZinkElement>(ZinkFrame::make(mk(RingDescriptor::zmod(3, 2)), 3), g);
}

TEST_CASE("non-invertible structure matrices are rejected") {
  auto F = ZinkFrame::witt(mk(RingDescriptor::fp(2)), 2);
  Matrix<ZinkElement> m = {{F->one(), F->one()}, {F->one(), F->one()}};
  CHECK_THROWS_AS(window_make<ZinkElement>(F, 2, 1, m), PropertyViolation);
  CHECK_THROWS_AS(window_make<ZinkElement>(F, 2, 3, antidiagonal(*F)), UsageError);
}

TEST_CASE("invariants of unit windows over W_N(F_q)") {
  for (int N : {1, 2, 3}) {
    for (int q : {1, 2}) {
      auto F = ZinkFrame::witt(mk(RingDescriptor::fq(2, q)), N);
      CAPTURE(F->name());
      auto et = invariants(etale_unit_window<ZinkElement>(F));
      CHECK(et.order() == (1u << N));
      CHECK(et.generators.size() == 1);
      CHECK(et.generator_orders[0] == (1u << N));
      CHECK(invariants(unit_window<ZinkElement>(F)).order() == 1);
      CHECK(invariants(zero_window<ZinkElement>(F)).order() == 1);
      if (N >= 2) CHECK(et.cross_checked);
    }
  }
  auto F = ZinkFrame::witt(mk(RingDescriptor::fp(3)), 2);
  CHECK(invariants(etale_unit_window<ZinkElement>(F)).order() == 9);
}

TEST_CASE("filtration lifting agrees with brute force on rank 2 windows") {
  std::mt19937_64 g(3);
  auto F = ZinkFrame::witt(mk(RingDescriptor::fq(2, 2)), 3);
  for (int s = 0; s < 3; ++s)
    for (int d : {0, 1, 2}) {
      auto w = window_make<ZinkElement>(F, 2, d, random_invertible(*F, 2, g));
      auto T = invariants(w);
      CHECK(T.cross_checked);
      for (auto& x : T.elements) CHECK(is_invariant(w, x));
      // p-multiples of invariants are invariants
      for (auto& x : T.generators) CHECK(is_invariant(w, vec_add(*F, x, x)));
    }
  // a budget too small for brute force at the top level still allows lifting
  auto w = window_make<ZinkElement>(F, 2, 0, mat_identity(*F, 2));
  auto T = invariants(w, 300);
  CHECK(T.method == "lifting");
  CHECK(T.order() == 64);
}

TEST_CASE("identity and Frobenius are strict frame maps; tau is compatible with composition") {
  std::mt19937_64 g(4);
  auto F = ZinkFrame::witt(mk(RingDescriptor::fq(2, 2)), 3);
  auto id = identity_map<ZinkElement>(F);
  CHECK(check_map(id, 6, g).ok());
  FrameMap<ZinkElement, ZinkElement> fr{F, F, [F](const ZinkElement& x) { return F->sigma(x); }, F->one(),
                                        F->one(), "sigma"};
  CHECK(check_map(fr, 6, g).ok());
  auto w = window_make<ZinkElement>(F, 2, 1, antidiagonal(*F));
  auto w1 = base_change(id, w);
  CHECK(mat_eq(*F, w1.psi, w.psi));
  auto comp = compose(fr, fr);
  auto et = etale_unit_window<ZinkElement>(F);
  auto T = invariants(et);
  auto et1 = base_change(fr, et);
  auto et2 = base_change(fr, et1);
  for (auto& x : T.elements) {
    auto y = tau(fr, x);
    CHECK(is_invariant(et1, y));
    CHECK(vec_eq(*F, tau(comp, x), tau(fr, y)));
    CHECK(is_invariant(et2, tau(comp, x)));
  }
}

TEST_CASE("duality functoriality along a strict map") {
  std::mt19937_64 g(5);
  auto F = ZinkFrame::witt(mk(RingDescriptor::fq(2, 2)), 3);
  FrameMap<ZinkElement, ZinkElement> fr{F, F, [F](const ZinkElement& x) { return F->sigma(x); }, F->one(),
                                        F->one(), "sigma"};
  for (auto w : {etale_unit_window<ZinkElement>(F), window_make<ZinkElement>(F, 2, 1, random_invertible(*F, 2, g))}) {
    auto gamma = dual_pairing(w);
    auto g1 = base_change_form(fr, gamma);
    CHECK(check_bilinear(g1, 4, g).ok());
    CHECK(is_perfect(g1));
    // the base change of the dual is the dual of the base change
    CHECK(mat_eq(*F, base_change(fr, dual(w)).psi, dual(base_change(fr, w)).psi));
    auto T = invariants(w), Tt = invariants(dual(w));
    for (auto& x : T.elements)
      for (auto& y : Tt.elements)
        CHECK(vec_eq(*F, pair(g1, tau(fr, x), tau(fr, y)), tau(fr, pair(gamma, x, y))));
  }
}

TEST_CASE("iota is a u0-homomorphism with c0 over Z/4") {
  std::mt19937_64 g(6);
  auto Z = ZinkRing::make(mk(RingDescriptor::zmod(2, 2)), 3);
  auto D = std::make_shared<ZinkFrame>(Z);
  auto Dp = std::make_shared<ZinkPlusFrame>(Z);
  auto iota = iota_map(D, Dp);
  REQUIRE(iota.c);
  auto r = check_map(iota, 5, g);
  CHECK_MESSAGE(r.ok(), (r.failures.empty() ? "" : r.failures[0]));
  // tau_{c0} on the etale unit window: F1+(c0 x) = c0 x
  auto et = etale_unit_window<ZinkElement>(D);
  auto et1 = base_change(iota, et);
  CHECK(check_window(et1, 3, g).ok());
  for (int s = 0; s < 3; ++s) {
    // f-fixed points of W(R) include the integers
    Vector<ZinkElement> x{D->from_int(int64_t(g() % 7))};
    REQUIRE(is_invariant(et, x));
    CHECK(is_invariant(et1, tau(iota, x)));
  }
  // base change of the dual pairing multiplied by c0^{-1}
  auto w = window_make<ZinkElement>(D, 2, 1, antidiagonal(*D));
  auto g1 = base_change_form(iota, dual_pairing(w));
  auto rb = check_bilinear(g1, 3, g);
  CHECK_MESSAGE(rb.ok(), (rb.failures.empty() ? "" : rb.failures[0]));
}
