#include "wz/zink_frames.hpp"

#include <cmath>

namespace wz {

namespace {

constexpr double kDivisionSearch = 4096;

template <class T>
const T& pick(const std::vector<T>& v, std::mt19937_64& g) {
  return v[g() % v.size()];
}

ZinkElement make_ideal(const ZinkElement& x) {
  const auto& Z = x.zink();
  auto xi = x.wk().coords();
  xi[0] = Z->residue()->zero();
  ZinkElement r(Z, WittVector(Z->residue(), xi), x.m());
  RingElement c = zink_to_ring(r);
  if (c.is_zero()) return r;
  return zink_sub(r, ZinkElement::from_m(Z, {c}));
}

}  // namespace

ZinkFrame::ZinkFrame(ZinkPtr Z, int sample_support) : Z_(std::move(Z)), sample_support_(sample_support) {
  k_elems_ = Z_->residue()->elements();
  m_elems_ = Z_->ring()->enumerate_ideal(1);
  if (Z_->ring()->is_field()) sample_support_ = 0;
}

std::shared_ptr<const ZinkFrame> ZinkFrame::make(RingPtr R, int support_bound, int precision,
                                                 int sample_support) {
  return std::make_shared<ZinkFrame>(ZinkRing::make(std::move(R), support_bound, precision), sample_support);
}

std::shared_ptr<const ZinkFrame> ZinkFrame::witt(RingPtr k, int N) {
  if (!k->is_field()) throw UsageError("the Witt frame needs a finite field, got " + k->name());
  return make(std::move(k), 1, N);
}

std::string ZinkFrame::name() const {
  if (Z_->ring()->is_field())
    return "W_" + std::to_string(Z_->precision()) + "(" + Z_->ring()->name() + ")";
  return "D(" + Z_->name() + ")";
}

std::string ZinkFrame::show(const ZinkElement& a) const {
  if (!Z_->ring()->is_field()) return a.str();
  std::string s = "(";
  for (int i = 0; i < a.wk().length(); ++i) s += (i ? "," : "") + Z_->residue()->show(a.wk()[i]);
  return s + ")";
}

// a - b in pW(R): the W(k)-part must be p times a vector, i.e. start with 0
// (k is perfect), and the m-part must be p times an m-part, found by search
// over small m-parts when R is not of characteristic p.
std::optional<bool> ZinkFrame::congruent_mod_p(const ZinkElement& a, const ZinkElement& b) const {
  ZinkElement d = zink_sub(a, b);
  if (d.precision() == 0) return true;
  if (!d.wk()[0].is_zero()) return false;
  const auto& R = Z_->ring();
  if (R->is_field()) return true;
  if (d.m().empty()) return true;
  if (R->char_exponent() == 1) {
    // p y = v f y has m-part (0, y_0^p, y_1^p, ...)
    if (d.m().count(0)) return false;
    for (auto& [i, v] : d.m()) {
      bool found = false;
      for (auto& y : m_elems_)
        if (R->pow(y, p()) == v) found = true;
      if (!found) return false;
    }
    return true;
  }
  const int s = d.support();
  if (std::pow(double(m_elems_.size()), s) > kDivisionSearch) return std::nullopt;
  // search for an m-part y with p y = d_m, support(y) <= support(d)
  std::vector<size_t> idx(s, 0);
  ZinkElement target(Z_, WittVector::zero(Z_->residue(), d.precision()), d.m());
  const ZinkElement pz = from_int(p());
  for (;;) {
    std::vector<RingElement> y;
    for (int i = 0; i < s; ++i) y.push_back(m_elems_[idx[i]]);
    if (zink_mul(pz, ZinkElement::from_m(Z_, y)) == target) return true;
    int k = s - 1;
    while (k >= 0 && ++idx[k] == m_elems_.size()) idx[k--] = 0;
    if (k < 0) break;
  }
  return false;
}

ZinkElement ZinkFrame::random(std::mt19937_64& g) const {
  std::vector<RingElement> xi, y;
  for (int i = 0; i < Z_->precision(); ++i) xi.push_back(pick(k_elems_, g));
  for (int i = 0; i < sample_support_; ++i) y.push_back(pick(m_elems_, g));
  std::map<int, RingElement> m;
  for (int i = 0; i < int(y.size()); ++i) m.emplace(i, y[i]);
  return ZinkElement(Z_, WittVector(Z_->residue(), xi), m);
}

ZinkElement ZinkFrame::random_ideal(std::mt19937_64& g) const { return make_ideal(random(g)); }

int ZinkFrame::min_level() const { return Z_->ring()->is_field() ? std::min(2, max_level()) : Z_->min_precision(); }

double ZinkFrame::count(int level) const {
  const int B = Z_->ring()->is_field() ? 0 : Z_->support_bound();
  return std::pow(double(k_elems_.size()), level) * std::pow(double(m_elems_.size()), B);
}

std::vector<ZinkElement> ZinkFrame::elements(int level) const {
  std::vector<ZinkElement> out;
  for_each_element(level, false, [&out](const ZinkElement& a) { out.push_back(a); });
  return out;
}

void ZinkFrame::for_each_element(int level, bool ideal_only, const std::function<void(const ZinkElement&)>& fn) const {
  const int B = Z_->ring()->is_field() ? 0 : Z_->support_bound();
  const int n = level + B;
  std::vector<size_t> idx(n, 0);
  for (;;) {
    std::vector<RingElement> xi;
    std::map<int, RingElement> m;
    for (int i = 0; i < level; ++i) xi.push_back(k_elems_[idx[i]]);
    for (int i = 0; i < B; ++i) m.emplace(i, m_elems_[idx[level + i]]);
    ZinkElement x(Z_, WittVector(Z_->residue(), xi), m);
    if (!ideal_only || zink_in_ideal(x)) fn(x);
    int k = n - 1;
    while (k >= 0) {
      const size_t lim = k < level ? k_elems_.size() : m_elems_.size();
      if (++idx[k] < lim) break;
      idx[k--] = 0;
    }
    if (k < 0) break;
  }
}

// x in I is a + b with a in W(k) and a_0 = 0, so w0(a) lies in m; then
// x = (a - [w0(a)]) + b' with b' an m-part of vanishing coordinate 0.
std::pair<std::vector<ZinkElement>, std::vector<ZinkElement>> ZinkFrame::split_elements(int level,
                                                                                       bool ideal_only) const {
  const int B = Z_->ring()->is_field() ? 0 : Z_->support_bound();
  std::pair<std::vector<ZinkElement>, std::vector<ZinkElement>> out;
  std::vector<size_t> idx(level, 0);
  for (;;) {
    std::vector<RingElement> xi;
    for (int i = 0; i < level; ++i) xi.push_back(k_elems_[idx[i]]);
    ZinkElement a(Z_, WittVector(Z_->residue(), xi), std::map<int, RingElement>{});
    if (ideal_only) a = make_ideal(a);
    out.first.push_back(a.with_precision(level));
    int k = level - 1;
    while (k >= (ideal_only ? 1 : 0)) {
      if (++idx[k] < k_elems_.size()) break;
      idx[k--] = 0;
    }
    if (k < (ideal_only ? 1 : 0)) break;
  }
  const WittVector zk(Z_->residue(), std::vector<RingElement>(level, Z_->residue()->zero()));
  std::vector<size_t> jdx(B, 0);
  for (;;) {
    std::map<int, RingElement> m;
    for (int i = 0; i < B; ++i) m.emplace(i, m_elems_[jdx[i]]);
    out.second.emplace_back(Z_, zk, m);
    int k = B - 1;
    while (k >= (ideal_only ? 1 : 0)) {
      if (++jdx[k] < m_elems_.size()) break;
      jdx[k--] = 0;
    }
    if (k < (ideal_only ? 1 : 0)) break;
  }
  return out;
}

std::vector<ZinkElement> ZinkFrame::lifts(const ZinkElement& x) const {
  std::vector<ZinkElement> out;
  for (auto& a : k_elems_) {
    auto xi = x.wk().coords();
    xi.push_back(a);
    out.emplace_back(Z_, WittVector(Z_->residue(), xi), x.m());
  }
  return out;
}

// ---------------------------------------------------------------------------

ZinkPlusFrame::ZinkPlusFrame(ZinkPtr Z, int sample_support)
    : base_(std::make_shared<ZinkFrame>(Z, sample_support)), Z_(std::move(Z)) {
  if (Z_->p() != 2) throw DomainError("W+(R) is only built for p = 2");
}

std::string ZinkPlusFrame::name() const { return "D+(" + Z_->name() + ")"; }

PlusElement ZinkPlusFrame::random(std::mt19937_64& g) const {
  auto ks = Z_->residue()->elements();
  return PlusElement(base_->random(g), pick(ks, g));
}

PlusElement ZinkPlusFrame::random_ideal(std::mt19937_64& g) const {
  auto ks = Z_->residue()->elements();
  return PlusElement(base_->random_ideal(g), pick(ks, g));
}

int ZinkPlusFrame::min_level() const {
  return std::min(max_level(), Z_->needed_precision(plus_length(Z_)) + 1);
}

double ZinkPlusFrame::count(int level) const {
  return base_->count(level) * double(Z_->residue()->order());
}

std::vector<PlusElement> ZinkPlusFrame::elements(int level) const {
  std::vector<PlusElement> out;
  auto ks = Z_->residue()->elements();
  for (auto& z : base_->elements(level))
    for (auto& l : ks) out.emplace_back(z, l);
  return out;
}

std::vector<PlusElement> ZinkPlusFrame::lifts(const PlusElement& x) const {
  std::vector<PlusElement> out;
  for (auto& z : base_->lifts(x.z())) out.emplace_back(z, x.lambda());
  return out;
}

FrameMap<ZinkElement, PlusElement> iota_map(std::shared_ptr<const ZinkFrame> D,
                                            std::shared_ptr<const ZinkPlusFrame> Dplus) {
  if (D->zink() != Dplus->zink()) throw UsageError("iota needs both frames over the same Zink ring");
  FrameMap<ZinkElement, PlusElement> m;
  m.source = D;
  m.target = Dplus;
  m.alpha = [](const ZinkElement& x) { return PlusElement::from_zink(x); };
  m.u = plus_u0(D->zink());
  try {
    m.c = plus_c0(D->zink());
  } catch (const UsageError&) {
    m.c.reset();
  }
  m.name = "iota";
  return m;
}

}  // namespace wz
