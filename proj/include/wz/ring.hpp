#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wz/errors.hpp"
#include "wz/expr.hpp"
#include "wz/linalg.hpp"

namespace wz {

// ---------------------------------------------------------------------------
// Descriptors

struct RingDescriptor;
using DescPtr = std::shared_ptr<const RingDescriptor>;

struct RingDescriptor {
  enum class Kind { IntegersMod, PrimeField, FiniteField, TruncatedSeries, QuotientExtension };
  Kind kind = Kind::IntegersMod;
  uint32_t p = 0;
  int exponent = 1;          // IntegersMod: p^exponent
  int degree = 0;            // FiniteField given by degree (0 if poly given)
  std::string var;           // generator name of series / extension / field
  ExprPtr poly;              // FiniteField (optional), QuotientExtension
  int precision = 0;         // TruncatedSeries: t^precision = 0
  int ideal_power = 0;       // QuotientExtension: m^k = 0 added; 0 = none
  DescPtr base;

  std::string str() const;

  static DescPtr zmod(uint32_t p, int n);
  static DescPtr fp(uint32_t p);
  static DescPtr fq(uint32_t p, int degree, const std::string& var = "z");
  static DescPtr fq_poly(uint32_t p, ExprPtr poly, const std::string& var = "z");
  static DescPtr series(DescPtr base, const std::string& var, int precision);
  static DescPtr ext(DescPtr base, const std::string& var, ExprPtr poly, int ideal_power = 0);
};

// ---------------------------------------------------------------------------
// Torsion-free lift: a free Z-algebra of rank n given by integer structure
// constants. Every ring below is a quotient of its lift by a full lattice.

struct FreeAlgebra {
  int n = 0;
  std::vector<int64_t> table;  // (i*n + j)*n + k
  std::vector<int64_t> one;
  std::vector<std::string> names;  // basis monomials, "" for 1
  std::map<std::string, std::vector<int64_t>> vars;

  std::vector<int64_t> mul(const std::vector<int64_t>& x, const std::vector<int64_t>& y) const;
};

// The lift read modulo Q (Q < 2^24); the multiply runs on the axpy kernel.
class ModAlgebra {
 public:
  ModAlgebra() = default;
  ModAlgebra(const FreeAlgebra& f, uint32_t Q);
  int n() const { return n_; }
  uint32_t modulus() const { return Q_; }
  const Vec& one() const { return one_; }
  void mul(const uint32_t* x, const uint32_t* y, uint32_t* out) const;
  void add(const uint32_t* x, const uint32_t* y, uint32_t* out) const;
  void sub(const uint32_t* x, const uint32_t* y, uint32_t* out) const;

 private:
  int n_ = 0;
  uint32_t Q_ = 1;
  std::vector<uint32_t> table_;
  std::vector<uint8_t> nonzero_;  // table row (i,j) not identically zero
  Vec one_;
};

// ---------------------------------------------------------------------------

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

// Value type; holds a raw pointer to its ring, which must outlive it.
class RingElement {
 public:
  RingElement() = default;
  RingElement(const Ring* r, Vec c) : ring_(r), c_(std::move(c)) {}

  const Ring* ring() const { return ring_; }
  const Vec& coords() const { return c_; }
  bool is_zero() const;

  RingElement operator+(const RingElement& o) const;
  RingElement operator-(const RingElement& o) const;
  RingElement operator-() const;
  RingElement operator*(const RingElement& o) const;
  bool operator==(const RingElement& o) const { return ring_ == o.ring_ && c_ == o.c_; }
  bool operator!=(const RingElement& o) const { return !(*this == o); }
  bool operator<(const RingElement& o) const { return c_ < o.c_; }
  std::string str() const;

 private:
  const Ring* ring_ = nullptr;
  Vec c_;
};

class Ring : public std::enable_shared_from_this<Ring> {
 public:
  // make_ring
  static RingPtr make(const RingDescriptor& d);
  static RingPtr make(const DescPtr& d) { return make(*d); }
  // Z^n / L over the given lift; L must contain p^a Z^n.
  static RingPtr from_lattice(std::shared_ptr<const FreeAlgebra> lift, uint32_t p,
                              const Lattice& L, std::string name);

  uint32_t p() const { return p_; }
  int char_exponent() const { return a_; }  // characteristic is p^a
  uint32_t modulus() const { return L_.modulus(); }
  int rank() const { return lift_->n; }
  uint64_t order() const { return L_.index(); }
  const std::string& name() const { return name_; }
  const FreeAlgebra& lift() const { return *lift_; }
  std::shared_ptr<const FreeAlgebra> lift_ptr() const { return lift_; }
  const ModAlgebra& algebra() const { return alg_; }
  const Lattice& lattice() const { return L_; }
  DescPtr descriptor() const { return desc_; }

  // elements
  RingElement zero() const;
  RingElement one() const;
  RingElement from_int(int64_t v) const;
  RingElement element(const Vec& coords) const;  // reduces
  RingElement from_lift(const std::vector<int64_t>& v) const;
  RingElement var(const std::string& name) const;
  bool has_var(const std::string& name) const { return lift_->vars.count(name) > 0; }
  RingElement parse(const std::string& text) const;
  RingElement eval(const Expr& e) const;
  std::string show(const RingElement& x) const;

  RingElement add(const RingElement& x, const RingElement& y) const;
  RingElement sub(const RingElement& x, const RingElement& y) const;
  RingElement neg(const RingElement& x) const;
  RingElement mul(const RingElement& x, const RingElement& y) const;
  RingElement pow(const RingElement& x, uint64_t e) const;
  RingElement scale(const RingElement& x, int64_t k) const;
  bool is_unit(const RingElement& x) const;
  RingElement inverse(const RingElement& x) const;  // throws on non-units

  // Raw in-place forms on canonical coordinate arrays.
  void mul_raw(const uint32_t* x, const uint32_t* y, uint32_t* out) const;
  void add_raw(const uint32_t* x, const uint32_t* y, uint32_t* out) const;
  void sub_raw(const uint32_t* x, const uint32_t* y, uint32_t* out) const;

  std::vector<RingElement> elements() const;

  // Local structure.
  bool is_field() const { return e_ == 1; }
  const Lattice& max_ideal() const { return m_; }
  int nilpotency() const { return e_; }  // smallest e with m^e = 0
  RingPtr residue_field() const;
  int residue_degree() const { return r_; }  // [k : F_p]
  uint64_t residue_order() const;
  bool in_max_ideal(const RingElement& x) const { return m_.contains(x.coords()); }
  // Generators of m (a Z-basis of the lattice modulo L).
  std::vector<RingElement> max_ideal_generators() const;
  const Lattice& ideal_power(int j) const;  // lattice of m^j
  std::vector<RingElement> enumerate_ideal(int power) const;
  RingElement residue(const RingElement& x) const;   // R -> k
  RingElement section(const RingElement& a) const;   // k -> R, multiplicative
  int section_exponent() const { return section_exp_; }  // M with s(a) = lift(a)^{p^M}
  // x^p and its inverse on k (only meaningful for fields).
  RingElement frobenius(const RingElement& x) const { return pow(x, p_); }
  RingElement frobenius_inverse(const RingElement& x) const;

 private:
  Ring() = default;
  void init_local();

  std::string name_;
  DescPtr desc_;
  std::shared_ptr<const FreeAlgebra> lift_;
  uint32_t p_ = 0;
  int a_ = 1;
  Lattice L_;
  ModAlgebra alg_;
  Vec one_;

  Lattice m_;
  std::vector<Lattice> powers_;  // powers_[j] = m^j, powers_[0] = whole ring
  int e_ = 1;
  int r_ = 1;
  int section_exp_ = 0;
  mutable std::shared_ptr<const Ring> k_;  // residue field (self for fields)
  bool self_residue_ = false;
};

// Univariate polynomials over a ring, used while building extensions and
// Frobenius lifts. Coefficient i multiplies x^i.
struct UPoly {
  const Ring* ring = nullptr;
  std::vector<RingElement> c;

  int degree() const;
  void trim();
  static UPoly from_expr(const Ring& R, const Expr& e, const std::string& var,
                         const std::map<std::string, int64_t>& ints = {});
  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  std::string str(const std::string& var) const;
};

// Defining polynomial of a FiniteField descriptor over F_p (the one the
// ring was built with); nullptr for prime fields.
ExprPtr field_polynomial(const RingDescriptor& d);

}  // namespace wz
