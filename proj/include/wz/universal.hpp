#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

// Universal Witt polynomials over Z, in the variables X_0..X_7 (slots 0..7)
// and Y_0..Y_7 (slots 8..15).

namespace wz {

constexpr int kYSlot = 8;
constexpr int kMaxUniversalIndex = 6;
constexpr size_t kMaxUniversalTerms = 250000;

struct Mono {
  std::array<uint8_t, 16> e{};
  bool operator==(const Mono& o) const { return e == o.e; }
  bool operator<(const Mono& o) const { return e < o.e; }
  int degree() const;
};

struct MonoHash {
  size_t operator()(const Mono& m) const;
};

// Sparse polynomial, terms sorted by exponent vector, no zero coefficients.
struct IntPoly {
  std::vector<std::pair<Mono, mpz_class>> terms;

  static IntPoly constant(const mpz_class& c);
  static IntPoly var(int slot, unsigned exp = 1);
  size_t size() const { return terms.size(); }
  bool is_zero() const { return terms.empty(); }
  bool operator==(const IntPoly& o) const { return terms == o.terms; }
  std::string str() const;
};

IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const IntPoly& b);
IntPoly scale(const IntPoly& a, const mpz_class& c);
IntPoly pow(const IntPoly& a, unsigned e);
// Exact division of every coefficient; throws PropertyViolation on a remainder.
IntPoly divexact_checked(const IntPoly& a, const mpz_class& d);

// w_m(Z) for the X block (y = false) or the Y block.
IntPoly witt_poly(uint32_t p, int m, bool y);

struct UniversalPolynomials {
  uint32_t p = 2;
  int n = 0;
  std::vector<IntPoly> S, P;  // indices 0..n
  std::vector<IntPoly> F;     // Frobenius components 0..n-1, in X_0..X_n
  // Cached powers S_i^{p^{n-i}} etc., reused when extending to n+1.
  std::vector<IntPoly> Spow, Ppow, Fpow;
};

// Memoized per (p, n); thread-safe, each key computed once.
// Throws EnvelopeExceeded outside n <= 6, p^n <= 255, term count <= 250000.
std::shared_ptr<const UniversalPolynomials> universal_polynomials(uint32_t p, int n);
bool universal_within_envelope(uint32_t p, int n);

// Recomputes w_m(S), w_m(P) by plain repeated multiplication and compares with
// w_m(X)+w_m(Y), w_m(X)w_m(Y) for all m <= n. Returns an empty string on
// success, otherwise a description of the first mismatch.
std::string verify_universal_identities(const UniversalPolynomials& U);

}  // namespace wz
