#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wz/zink_frames.hpp"

// Truncated S = W(k)[[t]], Frobenius lifts, the frame B = (S, ES, S/ES,
// sigma, sigma1), the homomorphisms delta: S -> W(S) and kappa: S -> W(R),
// the units u and c, and Breuil window data.
//
// An element of S is a polynomial in t of degree < M whose coefficient i is
// known modulo p^{prec_i}, prec_i <= N. Truncation mod (p^N, t^M) gives
// prec_i = N; an element known modulo m^K = (p, t)^K has prec_i = K - i.
// Every operation propagates these precisions and every division checks
// its remainder on the known digits.

namespace wz {

class SRing;
using SPtr = std::shared_ptr<const SRing>;

class SRing {
 public:
  // k must be built from a PrimeField or FiniteField descriptor.
  static SPtr make(RingPtr k, int N, int M);

  const RingPtr& residue() const { return k_; }
  // W_N(k) = Z/p^N[z]/(f) with f the defining polynomial of k.
  const RingPtr& coeffs() const { return W_; }
  uint32_t p() const { return p_; }
  int N() const { return N_; }
  int M() const { return M_; }
  uint32_t residue_degree() const { return r_; }
  std::string name() const;

  // Coefficient helpers on W_N(k).
  int valuation(const RingElement& a) const;  // N for 0
  RingElement reduce(const RingElement& a, int j) const;  // mod p^j
  RingElement divide_p(const RingElement& a, int j) const;  // a / p^j, caller checks valuation
  RingElement sigma(const RingElement& a) const;           // Frobenius
  RingElement residue_of(const RingElement& a) const;      // W -> k
  // Representatives of k in W with coordinates in [0, p).
  const std::vector<RingElement>& digits() const { return digits_; }
  // S mod (p^N, t^M) as a Ring (for Witt vectors over S).
  RingPtr as_ring() const;

 private:
  SRing() = default;
  RingPtr k_, W_;
  uint32_t p_ = 0, r_ = 1;
  int N_ = 0, M_ = 0;
  std::vector<RingElement> rho_pows_;  // sigma(z)^i
  std::vector<RingElement> digits_;
  DescPtr wdesc_;
  mutable RingPtr as_ring_;
};

class SElem {
 public:
  SElem() = default;
  // Reduces coefficient i modulo p^{prec[i]}; missing entries are unknown.
  SElem(SPtr S, std::vector<RingElement> c, std::vector<int> prec);

  static SElem zero(const SPtr& S);
  static SElem one(const SPtr& S);
  static SElem from_int(const SPtr& S, int64_t k);
  static SElem t(const SPtr& S);
  static SElem constant(const SPtr& S, const RingElement& a, int prec = -1);
  // Polynomial in t (and p, and the generator of k) at full precision.
  static SElem parse(const SPtr& S, const std::string& text);

  const SPtr& ring() const { return S_; }
  int size() const { return int(c_.size()); }
  const RingElement& operator[](int i) const { return c_[i]; }
  int prec(int i) const { return prec_[i]; }
  bool exact() const;  // every coefficient at precision N
  int degree() const;  // of the known part; -1 for 0
  // Largest K with prec_i >= K - i for all i < K.
  int level() const;
  SElem truncate_m(int K) const;
  SElem with_prec(int n) const;  // prec_i = min(prec_i, n)

  // Equality at the common precision.
  bool operator==(const SElem& o) const;
  bool operator!=(const SElem& o) const { return !(*this == o); }
  bool is_zero() const;
  // 1 + 2*t + 3*t^2 @(3,2,1); the precision tag is omitted when exact.
  std::string str() const;
  std::string key() const;

 private:
  SPtr S_;
  std::vector<RingElement> c_;
  std::vector<int> prec_;
};

SElem s_add(const SElem& a, const SElem& b);
SElem s_sub(const SElem& a, const SElem& b);
SElem s_neg(const SElem& a);
SElem s_mul(const SElem& a, const SElem& b);
SElem s_pow(const SElem& a, uint64_t e);
inline SElem operator+(const SElem& a, const SElem& b) { return s_add(a, b); }
inline SElem operator-(const SElem& a, const SElem& b) { return s_sub(a, b); }
inline SElem operator*(const SElem& a, const SElem& b) { return s_mul(a, b); }
bool s_is_unit(const SElem& a);
SElem s_inverse(const SElem& a);
// x / p^n; throws PrecisionExhausted if a known digit is not divisible.
SElem s_divide_p(const SElem& x, int n);
// y / E with E exact of constant term p; nullopt if y is not in ES.
std::optional<SElem> s_divide(const SElem& y, const SElem& E);
// Value at x in R; coefficients are mapped through Z (k = F_p).
RingElement s_eval(const SElem& f, const Ring& R, const RingElement& x);

// ---------------------------------------------------------------------------

class FrobeniusLift {
 public:
  FrobeniusLift() = default;
  // Checks sigma(t) in tS, sigma(t) = t^p mod p, and exactness.
  FrobeniusLift(SPtr S, SElem sigma_t);
  static FrobeniusLift parse(const SPtr& S, const std::string& text);
  static FrobeniusLift standard(const SPtr& S);  // t -> t^p

  const SPtr& ring() const { return S_; }
  const SElem& sigma_t() const { return st_; }
  SElem apply(const SElem& x) const;
  SElem iterate(const SElem& x, int n) const;
  // Linear coefficient of sigma(t) and the test p^2 | it.
  const RingElement& linear_coefficient() const { return st_[1]; }
  bool p2_criterion() const;
  std::string str() const { return st_.str(); }

 private:
  SPtr S_;
  SElem st_;
  std::vector<SElem> pows_;  // sigma(t)^i, i < M
};

// Validates that E is exact with constant term p.
SElem distinguished(const SPtr& S, const std::string& text);

// B = (S, ES, S/ES, sigma, sigma1) with sigma1(y) = sigma(y / E).
class BreuilFrame : public Frame<SElem> {
 public:
  BreuilFrame(FrobeniusLift sigma, SElem E);
  const FrobeniusLift& lift() const { return sig_; }
  const SElem& E() const { return E_; }
  const SPtr& ring() const { return S_; }

  std::string name() const override;
  uint32_t p() const override { return S_->p(); }
  SElem zero() const override { return SElem::zero(S_); }
  SElem one() const override { return SElem::one(S_); }
  SElem from_int(int64_t k) const override { return SElem::from_int(S_, k); }
  SElem add(const SElem& a, const SElem& b) const override { return s_add(a, b); }
  SElem neg(const SElem& a) const override { return s_neg(a); }
  SElem mul(const SElem& a, const SElem& b) const override { return s_mul(a, b); }
  bool eq(const SElem& a, const SElem& b) const override { return a == b; }
  std::string show(const SElem& a) const override { return a.str(); }
  SElem sigma(const SElem& a) const override { return sig_.apply(a); }
  SElem sigma1(const SElem& a) const override;
  bool in_I(const SElem& a) const override { return s_divide(a, E_).has_value(); }
  bool is_unit(const SElem& a) const override { return s_is_unit(a); }
  SElem inverse(const SElem& a) const override { return s_inverse(a); }
  SElem sigma1_unit_preimage() const override { return E_; }
  std::optional<bool> congruent_mod_p(const SElem& a, const SElem& b) const override;
  SElem random(std::mt19937_64& g) const override;
  SElem random_ideal(std::mt19937_64& g) const override;
  int min_level() const override { return 1; }
  int max_level() const override { return std::min(S_->N(), S_->M()); }
  double count(int level) const override;
  std::vector<SElem> elements(int level) const override;
  std::vector<SElem> lifts(const SElem& x) const override;
  int level(const SElem& x) const override { return x.level(); }
  SElem reduce(const SElem& x, int level) const override { return x.truncate_m(level); }

 private:
  FrobeniusLift sig_;
  SElem E_;
  SPtr S_;
};
using BreuilPtr = std::shared_ptr<const BreuilFrame>;

// ---------------------------------------------------------------------------
// delta(x) in W(S): coordinates x_0..x_n with ghost components sigma^j(x).
// Coordinate j is known modulo p^{N-j}.
std::vector<SElem> delta(const FrobeniusLift& s, const SElem& x, int n);
// Checks the recursion sum_i p^i x_i^{p^{j-i}} = sigma^j(x), w0 delta = id,
// and delta sigma = f delta via Witt vectors over S mod (p^N, t^M).
CheckReport check_delta(const FrobeniusLift& s, const SElem& x, int n);

// kappa: S -> W(R) for R with residue field F_p and pi in R with E(pi) = 0.
class Kappa {
 public:
  // support_bound 0 picks the support of kappa(t) plus two.
  Kappa(FrobeniusLift s, SElem E, RingPtr R, RingElement pi, int support_bound = 0);

  const FrobeniusLift& lift() const { return sig_; }
  const SElem& E() const { return E_; }
  const RingPtr& ring() const { return R_; }
  const RingElement& pi() const { return pi_; }
  // (g_0(pi), g_1(pi), ...) over the reliable length N - a + 1.
  const WittVector& kappa_t() const { return kt_; }
  int tested_length() const { return kt_.length(); }
  // Verdict: the coordinates of kappa(t) vanish on a tail of >= 3 indices.
  bool in_zink() const { return in_zink_; }
  int support() const { return support_; }  // last nonzero index + 1
  bool criterion() const { return sig_.p2_criterion(); }
  std::string verdict() const { return in_zink_ ? "in Zink ring" : "not in Zink ring"; }

  // Requires in_zink().
  const ZinkPtr& zink() const;
  // Smallest P with p^P kappa(t)^i = 0 for 0 < i < e; coefficients of t^i
  // must be known to p^P.
  int coefficient_precision() const { return need_; }
  ZinkElement apply(const SElem& x) const;

 private:
  FrobeniusLift sig_;
  SElem E_;
  RingPtr R_;
  RingElement pi_;
  WittVector kt_;
  bool in_zink_ = false;
  int support_ = 0, e_ = 1, need_ = 0;
  ZinkPtr Z_;
  ZinkElement kt_elem_;
};

struct Units {
  ZinkElement u;  // f1(kappa(E))
  ZinkElement c;  // u f(u) f^2(u) ...
  int factors = 0;
  int stable_for = 0;
};
Units units_u_c(const Kappa& kappa);
CheckReport check_units(const Kappa& kappa, const Units& U);

// kappa as a u-homomorphism B -> D_R.
FrameMap<SElem, ZinkElement> kappa_map(BreuilPtr B, const Kappa& kappa, const Units& U);

// ---------------------------------------------------------------------------
// Breuil window data (M, phi) with witness psi: phi psi = psi phi = E.
// For a window in normal form (L first, then T) the module is Q with basis
// (l_i, E t_j), phi = Psi^{-1} D and psi = D' Psi where D = diag(1, E) and
// D' = diag(E, 1).

struct BreuilWindowData {
  int h = 0;
  int d = 0;
  Matrix<SElem> phi, psi;
};

BreuilWindowData window_to_breuil(const Window<SElem>& w);
Window<SElem> breuil_to_window(BreuilPtr B, const BreuilWindowData& data);
CheckReport check_breuil(const BreuilFrame& B, const BreuilWindowData& data);

// ---------------------------------------------------------------------------
// Towers R_0 = R, R_{i+1} = R_i[x_{i+1}]/(sigma(t)(x_{i+1}) - x_i) with
// x_0 = pi, for lifts with integer coefficients.

struct TowerReport {
  int depth = 0;
  std::vector<RingPtr> rings;
  CheckReport checks;
  std::vector<std::string> lines;
};
TowerReport tower_identity_check(const FrobeniusLift& s, const DescPtr& base, const std::string& pi_text,
                                 int depth);

}  // namespace wz
