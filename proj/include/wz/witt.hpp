#pragma once

#include <string>
#include <vector>

#include "wz/ring.hpp"
#include "wz/universal.hpp"

namespace wz {

// How W_N(R) arithmetic is evaluated.
//  Polynomial: universal polynomials S_n, P_n, F_n evaluated in R.
//  GhostLift:  lift to the torsion-free algebra mod p^K, combine ghost
//              components, solve back with exact division, reduce to R.
//  Auto:       Polynomial when N-1 is small and within the envelope,
//              GhostLift otherwise.
enum class WittBackend { Auto, Polynomial, GhostLift };

class WittVector {
 public:
  WittVector() = default;
  WittVector(RingPtr R, std::vector<RingElement> c) : R_(std::move(R)), c_(std::move(c)) {}

  static WittVector zero(RingPtr R, int N);
  static WittVector one(RingPtr R, int N);
  static WittVector from_int(RingPtr R, int N, int64_t k);
  static WittVector teichmuller(RingPtr R, int N, const RingElement& a);
  static WittVector from_coords(RingPtr R, const std::vector<RingElement>& c);

  const RingPtr& ring() const { return R_; }
  uint32_t p() const { return R_->p(); }
  int length() const { return int(c_.size()); }
  const RingElement& operator[](int i) const { return c_[i]; }
  const std::vector<RingElement>& coords() const { return c_; }
  bool is_zero() const;
  bool operator==(const WittVector& o) const { return c_ == o.c_; }
  bool operator!=(const WittVector& o) const { return !(*this == o); }
  bool operator<(const WittVector& o) const;

  // Drop coordinates >= n.
  WittVector truncate(int n) const;
  // Append zero coordinates up to length n (exact for vectors of finite support).
  WittVector padded(int n) const;
  // Lowest index with a nonzero coordinate, or length() if zero.
  int valuation() const;

  // W[p=2,N=3; 1,0,1]@Zmod(2^3)
  std::string str() const;

 private:
  RingPtr R_;
  std::vector<RingElement> c_;
};

void set_default_witt_backend(WittBackend b);
WittBackend default_witt_backend();

WittVector witt_add(const WittVector& x, const WittVector& y, WittBackend b = WittBackend::Auto);
WittVector witt_mul(const WittVector& x, const WittVector& y, WittBackend b = WittBackend::Auto);
WittVector witt_neg(const WittVector& x, WittBackend b = WittBackend::Auto);
WittVector witt_sub(const WittVector& x, const WittVector& y, WittBackend b = WittBackend::Auto);
WittVector witt_scale(const WittVector& x, int64_t k, WittBackend b = WittBackend::Auto);
WittVector witt_pow(const WittVector& x, uint64_t e, WittBackend b = WittBackend::Auto);
// Throws DomainError unless x_0 is a unit.
WittVector witt_inverse(const WittVector& x, WittBackend b = WittBackend::Auto);

inline WittVector operator+(const WittVector& x, const WittVector& y) { return witt_add(x, y); }
inline WittVector operator-(const WittVector& x, const WittVector& y) { return witt_sub(x, y); }
inline WittVector operator*(const WittVector& x, const WittVector& y) { return witt_mul(x, y); }

// f: W_N -> W_{N-1}. In stationary mode the length is kept, which is exact
// only when R has characteristic p (then f is the coordinatewise p-th power);
// otherwise PrecisionExhausted is thrown.
enum class Truncation { Drop, Stationary };
WittVector frobenius(const WittVector& x, Truncation t = Truncation::Drop,
                     WittBackend b = WittBackend::Auto);
// v(x) = (0, x_0, x_1, ...): W_N -> W_{N+1}, or W_N -> W_N when keep_length.
WittVector verschiebung(const WittVector& x, bool keep_length = false);
// w_0(x), ..., w_{N-1}(x) in R.
std::vector<RingElement> ghost(const WittVector& x);
// sum_i p^i [a_i] in W_N(R).
WittVector witt_teichmuller_sum(const RingPtr& R, int N, const std::vector<RingElement>& a);

}  // namespace wz
