#pragma once

#include "wz/frames.hpp"
#include "wz/zink.hpp"

namespace wz {

// D_R = (W(R), I_R, R, f, f1). Over a field k at precision N this is the
// Witt frame of W_N(k) with f1 = v^{-1}.
class ZinkFrame : public Frame<ZinkElement> {
 public:
  // sample_support bounds the m-part of random elements.
  explicit ZinkFrame(ZinkPtr Z, int sample_support = 1);
  static std::shared_ptr<const ZinkFrame> make(RingPtr R, int support_bound, int precision = 0,
                                               int sample_support = 1);
  static std::shared_ptr<const ZinkFrame> witt(RingPtr k, int N);

  const ZinkPtr& zink() const { return Z_; }

  std::string name() const override;
  uint32_t p() const override { return Z_->p(); }
  ZinkElement zero() const override { return ZinkElement::zero(Z_); }
  ZinkElement one() const override { return ZinkElement::one(Z_); }
  ZinkElement from_int(int64_t k) const override { return ZinkElement::from_int(Z_, k); }
  ZinkElement add(const ZinkElement& a, const ZinkElement& b) const override { return zink_add(a, b); }
  ZinkElement neg(const ZinkElement& a) const override { return zink_neg(a); }
  ZinkElement mul(const ZinkElement& a, const ZinkElement& b) const override { return zink_mul(a, b); }
  bool eq(const ZinkElement& a, const ZinkElement& b) const override { return a == b; }
  std::string show(const ZinkElement& a) const override;
  ZinkElement sigma(const ZinkElement& a) const override { return zink_f(a); }
  ZinkElement sigma1(const ZinkElement& a) const override { return zink_f1(a); }
  bool in_I(const ZinkElement& a) const override { return zink_in_ideal(a); }
  bool is_unit(const ZinkElement& a) const override { return zink_is_unit(a); }
  ZinkElement inverse(const ZinkElement& a) const override { return zink_inverse(a); }
  ZinkElement sigma1_unit_preimage() const override { return zink_v(one()); }
  std::optional<bool> congruent_mod_p(const ZinkElement& a, const ZinkElement& b) const override;
  ZinkElement random(std::mt19937_64& g) const override;
  ZinkElement random_ideal(std::mt19937_64& g) const override;
  int min_level() const override;
  int max_level() const override { return Z_->precision(); }
  double count(int level) const override;
  std::vector<ZinkElement> elements(int level) const override;
  void for_each_element(int level, bool ideal_only, const std::function<void(const ZinkElement&)>& fn) const override;
  // W(k)-parts and m-parts.
  std::pair<std::vector<ZinkElement>, std::vector<ZinkElement>> split_elements(int level,
                                                                              bool ideal_only) const override;
  std::vector<ZinkElement> lifts(const ZinkElement& x) const override;
  int level(const ZinkElement& x) const override { return x.precision(); }
  ZinkElement reduce(const ZinkElement& x, int level) const override { return x.with_precision(level); }

 private:
  ZinkPtr Z_;
  int sample_support_;
  std::vector<RingElement> k_elems_, m_elems_;
};

// D+_R = (W+(R), I+_R, R, f, v^{-1}) for p = 2.
class ZinkPlusFrame : public Frame<PlusElement> {
 public:
  explicit ZinkPlusFrame(ZinkPtr Z, int sample_support = 1);
  const ZinkPtr& zink() const { return Z_; }

  std::string name() const override;
  uint32_t p() const override { return 2; }
  PlusElement zero() const override { return PlusElement::from_zink(ZinkElement::zero(Z_)); }
  PlusElement one() const override { return PlusElement::from_zink(ZinkElement::one(Z_)); }
  PlusElement from_int(int64_t k) const override { return PlusElement::from_zink(ZinkElement::from_int(Z_, k)); }
  PlusElement add(const PlusElement& a, const PlusElement& b) const override { return plus_add(a, b); }
  PlusElement neg(const PlusElement& a) const override { return plus_neg(a); }
  PlusElement mul(const PlusElement& a, const PlusElement& b) const override { return plus_mul(a, b); }
  bool eq(const PlusElement& a, const PlusElement& b) const override { return a == b; }
  std::string show(const PlusElement& a) const override { return a.str(); }
  PlusElement sigma(const PlusElement& a) const override { return plus_f(a); }
  PlusElement sigma1(const PlusElement& a) const override { return plus_f1(a); }
  bool in_I(const PlusElement& a) const override { return plus_in_ideal(a); }
  bool is_unit(const PlusElement& a) const override { return plus_is_unit(a); }
  PlusElement inverse(const PlusElement& a) const override { return plus_inverse(a); }
  PlusElement sigma1_unit_preimage() const override { return PlusElement::v1(Z_); }
  PlusElement random(std::mt19937_64& g) const override;
  PlusElement random_ideal(std::mt19937_64& g) const override;
  int min_level() const override;
  int max_level() const override { return Z_->precision(); }
  double count(int level) const override;
  std::vector<PlusElement> elements(int level) const override;
  std::vector<PlusElement> lifts(const PlusElement& x) const override;
  int level(const PlusElement& x) const override { return x.z().precision(); }
  PlusElement reduce(const PlusElement& x, int level) const override {
    return PlusElement(x.z().with_precision(level), x.lambda());
  }

 private:
  std::shared_ptr<const ZinkFrame> base_;
  ZinkPtr Z_;
};

// iota: D_R -> D+_R, a u0-homomorphism; c = c0 when R = Z/2^a.
FrameMap<ZinkElement, PlusElement> iota_map(std::shared_ptr<const ZinkFrame> D,
                                            std::shared_ptr<const ZinkPlusFrame> Dplus);

}  // namespace wz
