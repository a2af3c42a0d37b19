#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wz/zink_frames.hpp"

// Example p-divisible groups as windows, and finite-level kernels and
// cokernels of F1 - 1: Q -> P.

namespace wz {

// ---------------------------------------------------------------------------
// Finite abelian p-groups.

// Invariant factors (ascending) of a finite abelian p-group from the counts
// c_j = |G[p^j]|, j = 0, 1, ..., ending at |G|.
std::vector<uint64_t> type_from_torsion_counts(uint32_t p, const std::vector<uint64_t>& counts);
std::string type_str(const std::vector<uint64_t>& factors);  // "Z/3 x Z/9", "0"

// Principal units 1 + m of R under multiplication.
struct PrincipalUnits {
  uint64_t order = 0;
  std::vector<uint64_t> type;
};
PrincipalUnits principal_units(const Ring& R);

// ---------------------------------------------------------------------------

struct KerCoker {
  int level_in = 0, level_out = 0;
  uint64_t source = 0, target = 0, image = 0, kernel = 0;
  std::vector<uint64_t> ker_type, coker_type;
  uint64_t coker_order() const { return target / image; }
};

namespace detail {

template <class E>
std::vector<Vector<E>> enumerate_P(const Window<E>& w, int level) {
  const auto& F = *w.frame;
  auto all = F.elements(level);
  std::vector<Vector<E>> out{Vector<E>{}};
  for (int i = 0; i < w.h; ++i) {
    std::vector<Vector<E>> next;
    for (auto& v : out)
      for (auto& a : all) {
        auto u = v;
        u.push_back(a);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

template <class E>
Vector<E> reduce_vec(const Frame<E>& F, const Vector<E>& x, int level) {
  Vector<E> r;
  for (auto& a : x) r.push_back(F.reduce(a, level));
  return r;
}

}  // namespace detail

// phi = F1 - 1 from Q at `level` to P at the level of its values. Q is
// split additively as Q' + Q'' (frame split_elements, row by row) and the
// kernel is counted by matching phi(Q') against -phi(Q''). Then
// |coker| = |P| |ker| / |Q|; when that is p^2 or more the image is
// enumerated and the cokernel type comes from p^j-torsion counts.
template <class E>
KerCoker kernel_cokernel(const Window<E>& w, int level, double budget = 4e5, bool coker_type = true) {
  const auto& F = *w.frame;
  const uint32_t p = F.p();
  KerCoker r;
  r.level_in = level;
  std::vector<std::vector<E>> A(w.h), M(w.h);
  double na = 1, nm = 1;
  for (int i = 0; i < w.h; ++i) {
    auto [a, m] = F.split_elements(level, w.is_T(i));
    na *= double(a.size());
    nm *= double(m.size());
    if (na > budget || nm > budget)
      throw PrecisionExhausted("kernel_cokernel: Q at level " + std::to_string(level) + " exceeds the budget");
    A[i] = std::move(a);
    M[i] = std::move(m);
  }
  auto product = [&](const std::vector<std::vector<E>>& parts) {
    std::vector<Vector<E>> out{Vector<E>{}};
    for (auto& part : parts) {
      std::vector<Vector<E>> next;
      for (auto& v : out)
        for (auto& a : part) {
          auto u = v;
          u.push_back(a);
          next.push_back(std::move(u));
        }
      out = std::move(next);
    }
    return out;
  };
  const auto L = product(A), Rt = product(M);
  int out = level;
  auto phi = [&](const Vector<E>& x) {
    auto y = vec_sub(F, window_F1(w, x), x);
    for (auto& a : y) out = std::min(out, F.level(a));
    return y;
  };
  std::vector<Vector<E>> fl, fr;
  for (auto& x : L) fl.push_back(phi(x));
  for (auto& x : Rt) fr.push_back(vec_sub(F, vec_zero(F, w.h), phi(x)));
  r.level_out = out;
  r.source = uint64_t(L.size()) * Rt.size();
  std::map<std::string, std::vector<size_t>> left;
  for (size_t i = 0; i < fl.size(); ++i) left[vec_key(F, detail::reduce_vec(F, fl[i], out))].push_back(i);
  std::vector<Vector<E>> ker;
  for (size_t j = 0; j < fr.size(); ++j) {
    auto it = left.find(vec_key(F, detail::reduce_vec(F, fr[j], out)));
    if (it == left.end()) continue;
    for (size_t i : it->second) ker.push_back(vec_add(F, L[i], Rt[j]));
  }
  r.kernel = ker.size();
  if (r.kernel == 0 || r.source % r.kernel) throw PropertyViolation("kernel_cokernel: |ker| does not divide |Q|");
  r.image = r.source / r.kernel;
  const double tsize = std::pow(F.count(out), w.h);
  r.target = uint64_t(std::llround(tsize));
  const uint64_t c = r.target / r.image;
  if (c * r.image != r.target) throw PropertyViolation("kernel_cokernel: |im| does not divide |P|");
  if (c == p) {
    r.coker_type = {p};
  } else if (c > p && coker_type) {
    if (tsize > budget || double(r.source) > budget)
      throw PrecisionExhausted("kernel_cokernel: P at level " + std::to_string(out) + " exceeds the budget");
    std::set<std::string> image;
    for (auto& a : fl)
      for (auto& b : fr) image.insert(vec_key(F, detail::reduce_vec(F, vec_sub(F, a, b), out)));
    if (image.size() != r.image)
      throw PropertyViolation("kernel_cokernel: |ker| |im| != |Q| (" + std::to_string(r.kernel) + " * " +
                              std::to_string(image.size()) + " != " + std::to_string(r.source) + ")");
    auto P = detail::enumerate_P(w, out);
    // |C[p^j]| = |{g : p^j g in im}| / |im|
    std::vector<uint64_t> cc{1};
    E pj = F.one();
    while (cc.back() < c) {
      pj = F.mul(pj, F.from_int(p));
      uint64_t n = 0;
      for (auto& g : P)
        if (image.count(vec_key(F, detail::reduce_vec(F, vec_scale(F, pj, g), out)))) ++n;
      if (n % r.image) throw PropertyViolation("kernel_cokernel: torsion count not divisible by |im|");
      cc.push_back(n / r.image);
      if (cc.size() > 64) throw PropertyViolation("kernel_cokernel: cokernel is not a p-group");
    }
    r.coker_type = type_from_torsion_counts(p, cc);
  }
  const auto zero = vec_zero(F, w.h);
  std::vector<uint64_t> kc{1};
  E pj = F.one();
  while (kc.back() < r.kernel) {
    pj = F.mul(pj, F.from_int(p));
    uint64_t n = 0;
    for (auto& x : ker)
      if (vec_eq(F, vec_scale(F, pj, x), zero)) ++n;
    kc.push_back(n);
    if (kc.size() > 64) throw PropertyViolation("kernel_cokernel: kernel is not a p-group");
  }
  r.ker_type = type_from_torsion_counts(p, kc);
  return r;
}

// Kernel and cokernel along a schedule of support bounds; certified once
// three consecutive bounds give the same kernel and cokernel types.
struct BTResult {
  std::vector<int> bounds;
  std::vector<KerCoker> runs;
  bool stabilized = false;
  int certified_bound = 0;  // first bound of the stable run
  KerCoker result;
  std::string certificate;
};

template <class E>
BTResult bt_kernel_cokernel(const std::function<Window<E>(int B)>& make, const std::function<int(const Window<E>&)>& level,
                            const std::vector<int>& schedule, double budget = 4e5, bool coker_type = true) {
  BTResult res;
  for (int B : schedule) {
    Window<E> w = make(B);
    res.bounds.push_back(B);
    res.runs.push_back(kernel_cokernel(w, level(w), budget, coker_type));
    const size_t n = res.runs.size();
    if (n >= 3) {
      const auto &a = res.runs[n - 3], &b = res.runs[n - 2], &c = res.runs[n - 1];
      if (a.coker_type == b.coker_type && b.coker_type == c.coker_type && a.ker_type == b.ker_type &&
          b.ker_type == c.ker_type && a.coker_order() == b.coker_order() && b.coker_order() == c.coker_order()) {
        res.stabilized = true;
        res.certified_bound = res.bounds[n - 3];
        res.result = a;
        res.certificate = "B=" + std::to_string(res.bounds[n - 3]) + "," + std::to_string(res.bounds[n - 2]) + "," +
                          std::to_string(res.bounds[n - 1]) + " agree: |coker| " + std::to_string(a.coker_order()) +
                          (coker_type ? " (" + type_str(a.coker_type) + ")" : "") + ", ker " + type_str(a.ker_type);
        return res;
      }
    }
  }
  std::string s;
  for (size_t i = 0; i < res.runs.size(); ++i)
    s += " B=" + std::to_string(res.bounds[i]) + ":" + type_str(res.runs[i].coker_type);
  throw PrecisionExhausted("cokernel did not stabilize over the support schedule:" + s);
}

// ---------------------------------------------------------------------------
// Examples.

struct GroupExample {
  enum class Tag { MultiplicativeUnit, EtaleUnit, Product, ExtensionClass, DualOf };
  Tag tag = Tag::MultiplicativeUnit;
  std::vector<GroupExample> parts;  // Product: two; DualOf: one
  std::string lambda;               // ExtensionClass: element of 1 + m in ring grammar

  static GroupExample mu() { return {Tag::MultiplicativeUnit, {}, ""}; }
  static GroupExample etale() { return {Tag::EtaleUnit, {}, ""}; }
  static GroupExample product(GroupExample a, GroupExample b) { return {Tag::Product, {a, b}, ""}; }
  static GroupExample extension(std::string lambda) { return {Tag::ExtensionClass, {}, lambda}; }
  static GroupExample dual_of(GroupExample a) { return {Tag::DualOf, {a}, ""}; }
  // mu, etale, product(mu,etale), ext(1+e), dual(mu)
  static GroupExample parse(const std::string& text);
  std::string str() const;
  // Height of the multiplicative part (rank of T in the realization).
  int multiplicative_height() const;
};

// Block sum of windows in normal form (L-blocks first, then T-blocks).
template <class E>
Window<E> window_sum(const Window<E>& a, const Window<E>& b) {
  const auto& F = *a.frame;
  const int h = a.h + b.h, la = a.l_rank(), lb = b.l_rank();
  auto pos_a = [&](int i) { return i < la ? i : la + lb + (i - la); };
  auto pos_b = [&](int i) { return i < lb ? la + i : la + lb + a.d + (i - lb); };
  Matrix<E> psi(h, Vector<E>(h, F.zero()));
  for (int i = 0; i < a.h; ++i)
    for (int j = 0; j < a.h; ++j) psi[pos_a(i)][pos_a(j)] = a.psi[i][j];
  for (int i = 0; i < b.h; ++i)
    for (int j = 0; j < b.h; ++j) psi[pos_b(i)][pos_b(j)] = b.psi[i][j];
  return window_make(a.frame, h, a.d + b.d, psi);
}

// Extension windows are built over Zink frames: Psi = [[1, 0], [[lambda - 1], 1]]
// with the etale line first.
Window<ZinkElement> realize(const GroupExample& ex, std::shared_ptr<const ZinkFrame> F);

// ---------------------------------------------------------------------------

struct TorsionMatch {
  bool ok = false;
  std::string expected, computed;
  std::string certificate;
  std::vector<std::string> lines;
};
// mu: coker(F1 - 1) against 1 + m; etale: |ker| = |coker|. For p = 2 the mu
// computation runs over D+. Over a field there is no
// support truncation: the schedule lists precisions N and the etale check
// is |ker(f - 1)| = p^N on W_N(k), exact at each N.
TorsionMatch torsion_match(const GroupExample& ex, const RingPtr& R, const std::vector<int>& schedule);

struct PlusCheck {
  bool trivial = false;  // p odd
  CheckReport identity;  // c0 (F1 - 1) = (F1+ - 1) c0
  int quotient_dimension = 0;  // of W+(R)/W(R) over k
  bool f1bar_fixes_v1 = false;
  int kernel_dimension = -1;  // F_2-dimension of ker(F1bar - 1) on the v(1) lines
  std::vector<std::string> lines;
};
PlusCheck plus_variant_diagram_check(const Window<ZinkElement>& w, int samples, std::mt19937_64& g);

struct PairingCheck {
  uint64_t t_order = 0, dual_order = 0;
  std::vector<std::vector<std::string>> matrix;  // pairings of generators
  bool values_invariant = true;
  bool bilinear = true;
  bool degenerate = false;  // one side trivial at this level (informational)
  bool perfect = false;
  std::vector<std::string> lines;
};

template <class E>
PairingCheck invariants_pairing_check(const Window<E>& w, int level = -1) {
  const auto& F = *w.frame;
  PairingCheck r;
  auto wt = dual(w);
  auto T = invariants(w, 2e5, level), Tt = invariants(wt, 2e5, level);
  r.t_order = T.order();
  r.dual_order = Tt.order();
  auto gamma = dual_pairing(w);
  const auto& target = gamma.target;
  for (auto& x : T.generators) {
    std::vector<std::string> row;
    for (auto& y : Tt.generators) {
      auto v = pair(gamma, x, y);
      row.push_back(vec_show(F, v));
      if (!is_invariant(target, v)) r.values_invariant = false;
    }
    r.matrix.push_back(row);
  }
  for (auto& x : T.generators)
    for (auto& y : Tt.generators) {
      auto v = pair(gamma, vec_add(F, x, x), y);
      auto w2 = vec_add(F, pair(gamma, x, y), pair(gamma, x, y));
      if (!vec_eq(F, v, w2)) r.bilinear = false;
    }
  r.degenerate = T.order() == 1 || Tt.order() == 1;
  if (!r.degenerate) {
    // perfect: x -> gamma(x, -) is injective on T and y -> gamma(-, y) on T^t
    auto inj = [&](const std::vector<Vector<E>>& A, const std::vector<Vector<E>>& B, bool left) {
      const auto z = vec_zero(F, w.h);
      for (auto& x : A) {
        if (vec_eq(F, x, z)) continue;
        bool nonzero = false;
        for (auto& y : B) {
          auto v = left ? pair(gamma, x, y) : pair(gamma, y, x);
          if (!vec_eq(F, v, vec_zero(F, int(v.size())))) nonzero = true;
        }
        if (!nonzero) return false;
      }
      return true;
    };
    r.perfect = inj(T.elements, Tt.elements, true) && inj(Tt.elements, T.elements, false);
  } else {
    r.perfect = T.order() == 1 && Tt.order() == 1;
  }
  r.lines.push_back("T order " + std::to_string(r.t_order) + ", dual T order " + std::to_string(r.dual_order));
  r.lines.push_back(std::string("pairing values invariant: ") + (r.values_invariant ? "yes" : "no"));
  r.lines.push_back(std::string("pairing: ") +
                    (r.degenerate ? (r.perfect ? "trivially perfect" : "degenerate at this level (informational)")
                                  : (r.perfect ? "perfect" : "not perfect")));
  return r;
}

}  // namespace wz
