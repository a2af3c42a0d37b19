#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wz/witt.hpp"

// The Zink ring W(k) (+) W^(m) inside W(R) for a finite local ring R, at a
// fixed support bound B for the m-part and a p-adic precision n for the
// W(k)-part.

namespace wz {

class ZinkRing;
using ZinkPtr = std::shared_ptr<const ZinkRing>;

class ZinkRing {
 public:
  // precision 0 picks a default large enough for every operation on
  // elements of support <= B, with a few spare levels for f1.
  static ZinkPtr make(RingPtr R, int support_bound, int precision = 0);

  const RingPtr& ring() const { return R_; }
  const RingPtr& residue() const { return k_; }
  uint32_t p() const { return R_->p(); }
  int support_bound() const { return B_; }
  int precision() const { return n_; }
  // c = min{c : p^c >= e}. A sum of products X*Y with Y of support <= b has
  // support <= b + c - 1 (coordinates are Y-isobaric of weight p^i).
  int step() const { return c_; }
  // Support of v(u0) - p, which is -[2] for p = 2 and v(1) - p for odd p.
  int twist_support() const { return d_; }
  // Whether u0 lies outside W(R); false for odd p and in characteristic 2.
  bool u0_outside() const { return u0_outside_; }
  std::string name() const;

  // Images of the integral Witt vectors u0, u0^{-1} and v(u0) - p in W_L(R).
  WittVector u0(int L) const;
  WittVector u0_inverse(int L) const;
  WittVector twist(int L) const;

  // The ring map s: W(k) -> W_L(R), sum_i p^i [s^(xi_i^{p^-i})]. Needs
  // xi.length() >= L + a - 1 (a the characteristic exponent of R).
  WittVector section(const WittVector& xi, int L) const;
  int needed_precision(int L) const { return L + R_->char_exponent() - 1; }
  // Smallest W(k)-precision at which every operation on elements of
  // support <= B succeeds (f1 then returns one level less).
  int min_precision() const { return min_precision_; }

  // Certified support bounds for results, given input supports.
  int bound_sum(int b) const;
  int bound_f(int b) const;
  int bound_v(int b) const;
  int bound_f1(int b) const;

 private:
  ZinkRing() = default;
  RingPtr R_, k_;
  int B_ = 0, n_ = 0, c_ = 0, d_ = 0, dneg_ = 0, min_precision_ = 1;
  bool u0_outside_ = false;
  std::vector<mpz_class> u0_, u0inv_, twist_;  // integral coordinates
};

class ZinkElement {
 public:
  ZinkElement() = default;
  // Checks that the m-coordinates lie in m, are in R, and fit in B.
  ZinkElement(ZinkPtr Z, WittVector wk, std::map<int, RingElement> m);

  static ZinkElement zero(const ZinkPtr& Z);
  static ZinkElement one(const ZinkPtr& Z);
  static ZinkElement from_int(const ZinkPtr& Z, int64_t k);
  // s(xi) with zero m-part; xi is padded to the ring's precision.
  static ZinkElement from_wk(const ZinkPtr& Z, const WittVector& xi);
  // Pure m-part element with the given coordinates.
  static ZinkElement from_m(const ZinkPtr& Z, const std::vector<RingElement>& y);

  const ZinkPtr& zink() const { return Z_; }
  const WittVector& wk() const { return wk_; }
  const std::map<int, RingElement>& m() const { return m_; }
  int precision() const { return wk_.length(); }
  int support() const { return m_.empty() ? 0 : m_.rbegin()->first + 1; }
  // Equality at the common precision of the W(k)-parts.
  bool operator==(const ZinkElement& o) const;
  bool operator!=(const ZinkElement& o) const { return !(*this == o); }
  bool operator<(const ZinkElement& o) const;
  ZinkElement with_precision(int n) const;

  // Zink[wk=1,0,0; m={(1,2)}]@Zmod(2^3)
  std::string str() const;

 private:
  ZinkPtr Z_;
  WittVector wk_;
  std::map<int, RingElement> m_;
};

// Value in W_L(R).
WittVector embed(const ZinkElement& x, int L);
// Reads X in W_L(R) as s(wk) + y. Coordinate L-1 is a check coordinate that
// must vanish (L is one past the certified bound). Throws PropertyViolation
// on residue leakage or a broken certificate, SupportOverflow if the actual
// support exceeds B.
ZinkElement decompose(const ZinkPtr& Z, const WittVector& X, const WittVector& wk);

ZinkElement zink_add(const ZinkElement& x, const ZinkElement& y);
ZinkElement zink_sub(const ZinkElement& x, const ZinkElement& y);
ZinkElement zink_neg(const ZinkElement& x);
ZinkElement zink_mul(const ZinkElement& x, const ZinkElement& y);
ZinkElement zink_pow(const ZinkElement& x, uint64_t e);
inline ZinkElement operator+(const ZinkElement& x, const ZinkElement& y) { return zink_add(x, y); }
inline ZinkElement operator-(const ZinkElement& x, const ZinkElement& y) { return zink_sub(x, y); }
inline ZinkElement operator*(const ZinkElement& x, const ZinkElement& y) { return zink_mul(x, y); }

ZinkElement zink_f(const ZinkElement& x);
// v(u0 x); the W(k)-part gains one level of precision.
ZinkElement zink_v(const ZinkElement& x);
// u0^{-1} v^{-1}(x) on the ideal; loses one level of precision. Throws
// PropertyViolation naming the obstruction coordinate if x is not in I_R.
ZinkElement zink_f1(const ZinkElement& x);

// Image in R (coordinate 0 of the embedded vector) and in k.
RingElement zink_to_ring(const ZinkElement& x);
RingElement zink_residue(const ZinkElement& x);
bool zink_in_ideal(const ZinkElement& x);
bool zink_is_unit(const ZinkElement& x);
ZinkElement zink_inverse(const ZinkElement& x);

// ---------------------------------------------------------------------------
// u0 and c0 over Z/p^M.

// Witt coordinates, modulo p^K for coordinate i reliable to p^{K-i}, of the
// integral vector with the given ghost components.
std::vector<mpz_class> coords_from_ghost(uint32_t p, const std::vector<mpz_class>& ghost, int K);

// u0 in W_N(R) for R = Z/p^M: v(u0) = 2 - [2] for p = 2, u0 = 1 for odd p.
WittVector compute_u0(const RingPtr& R, int N);

struct C0Result {
  WittVector c0;     // in W_N(R)
  int factors = 0;   // partial products used
  int stable_for = 0;  // extra factors after which the product did not change
};
// c0 = u0 f(u0) f^2(u0) ... by direct partial products with Witt arithmetic.
// Throws PropertyViolation if the products have not stabilized.
C0Result compute_c0(const RingPtr& R, int N);

// ---------------------------------------------------------------------------
// W+(R) = W(R)[v(1)] for p = 2: z + [s^(lambda)] v(1) with z in W(R) and
// lambda in k. Operations track lambda from the algebra (v(1)^2 = 2 v(1),
// [a] v(1) lies in W(R) exactly when a is in m) and check that the remaining
// part has finite support over the tested length.

class PlusElement {
 public:
  PlusElement() = default;
  PlusElement(ZinkElement z, RingElement lambda) : z_(std::move(z)), l_(std::move(lambda)) {}
  static PlusElement from_zink(const ZinkElement& z);
  static PlusElement v1(const ZinkPtr& Z);

  const ZinkElement& z() const { return z_; }
  const RingElement& lambda() const { return l_; }
  const ZinkPtr& zink() const { return z_.zink(); }
  bool in_zink() const { return l_.is_zero(); }
  bool operator==(const PlusElement& o) const { return z_ == o.z_ && l_ == o.l_; }
  bool operator!=(const PlusElement& o) const { return !(*this == o); }
  std::string str() const;

 private:
  ZinkElement z_;
  RingElement l_;
};

// Working length for W+ computations and the tail checked for vanishing.
int plus_length(const ZinkPtr& Z);
WittVector plus_embed(const PlusElement& x, int L);
// W(k)-image of x: wk(z) + V[lambda^p].
WittVector plus_residue_vector(const PlusElement& x);
// Decomposes X (in W_L(R), L = plus_length) with known W(k)-image tau and
// class lambda.
PlusElement plus_decompose(const ZinkPtr& Z, const WittVector& X, const WittVector& tau,
                           const RingElement& lambda);

PlusElement plus_add(const PlusElement& x, const PlusElement& y);
PlusElement plus_neg(const PlusElement& x);
PlusElement plus_sub(const PlusElement& x, const PlusElement& y);
PlusElement plus_mul(const PlusElement& x, const PlusElement& y);
PlusElement plus_f(const PlusElement& x);
// v^{-1} on the kernel of W+(R) -> R.
PlusElement plus_f1(const PlusElement& x);
bool plus_in_ideal(const PlusElement& x);
bool plus_is_unit(const PlusElement& x);
PlusElement plus_inverse(const PlusElement& x);

// u0 and c0 as elements of W+(R).
PlusElement plus_u0(const ZinkPtr& Z);
PlusElement plus_c0(const ZinkPtr& Z);

struct QuotientReport {
  int dimension = 0;  // k-dimension of W+(R)/W(R)
  std::string reason;
  int tested_length = 0;
  // For each nonzero lambda in k, the largest index below tested_length at
  // which the m-part of [lambda] v(1) is nonzero (>= B witnesses v(1) outside).
  std::vector<int> witness_index;
  int two_v1_support = -1;   // support of the m-part of 2 v(1)
  bool f1bar_fixes_v1 = false;
  int f1bar_support = -1;    // support of the m-part of u0^{-1} - v(1)
};
QuotientReport stabilized_quotient_check(const ZinkPtr& Z);

}  // namespace wz
