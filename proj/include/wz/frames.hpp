#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wz/errors.hpp"

// Frames (S, I, R = S/I, sigma, sigma1), windows in normal form, u-homomorphisms,
// bilinear forms, duals and modules of invariants. Everything is generic in
// the element type of S; elements carry their own precision and equality is
// taken at the common precision.

namespace wz {

struct CheckReport {
  int checked = 0;
  int skipped = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void expect(bool cond, const std::string& what) {
    ++checked;
    if (!cond) failures.push_back(what);
  }
  void merge(const CheckReport& o, const std::string& prefix = "") {
    checked += o.checked;
    skipped += o.skipped;
    for (auto& f : o.failures) failures.push_back(prefix + f);
  }
};

template <class E>
class Frame {
 public:
  virtual ~Frame() = default;

  virtual std::string name() const = 0;
  virtual uint32_t p() const = 0;

  virtual E zero() const = 0;
  virtual E one() const = 0;
  virtual E from_int(int64_t k) const = 0;
  virtual E add(const E& a, const E& b) const = 0;
  virtual E neg(const E& a) const = 0;
  virtual E mul(const E& a, const E& b) const = 0;
  E sub(const E& a, const E& b) const { return add(a, neg(b)); }
  E pow(E a, uint64_t e) const {
    E r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      e >>= 1;
      if (e) a = mul(a, a);
    }
    return r;
  }
  virtual bool eq(const E& a, const E& b) const = 0;
  virtual std::string show(const E& a) const = 0;

  virtual E sigma(const E& a) const = 0;
  // Defined on I; throws PropertyViolation elsewhere.
  virtual E sigma1(const E& a) const = 0;
  virtual bool in_I(const E& a) const = 0;
  virtual bool is_unit(const E& a) const = 0;
  virtual E inverse(const E& a) const = 0;

  // An element of I with sigma1 = 1, which shows that sigma1(I) generates S.
  virtual E sigma1_unit_preimage() const = 0;
  // theta with sigma(a) = theta sigma1(a) for a in I.
  virtual E theta() const { return sigma(sigma1_unit_preimage()); }
  // Whether a - b lies in pS; nullopt when the frame cannot decide.
  virtual std::optional<bool> congruent_mod_p(const E&, const E&) const { return std::nullopt; }

  virtual E random(std::mt19937_64& g) const = 0;
  virtual E random_ideal(std::mt19937_64& g) const = 0;

  // Finite levels for enumeration: level(x) is the precision of x, elements
  // at a level are all of S known to that precision, lifts(x) are the
  // elements one level up reducing to x.
  virtual int min_level() const = 0;
  virtual int max_level() const = 0;
  virtual double count(int level) const = 0;
  virtual std::vector<E> elements(int level) const = 0;
  // Streams the elements at `level` (only those in I when ideal_only).
  virtual void for_each_element(int level, bool ideal_only, const std::function<void(const E&)>& fn) const {
    for (auto& a : elements(level))
      if (!ideal_only || in_I(a)) fn(a);
  }
  // Additive splitting: every element at `level` (of I when ideal_only) is
  // uniquely a + b with a in first, b in second.
  virtual std::pair<std::vector<E>, std::vector<E>> split_elements(int level, bool ideal_only) const {
    std::vector<E> all;
    for_each_element(level, ideal_only, [&all](const E& a) { all.push_back(a); });
    return {all, {reduce(zero(), level)}};
  }
  virtual std::vector<E> lifts(const E& x) const = 0;
  virtual int level(const E& x) const = 0;
  virtual E reduce(const E& x, int level) const = 0;
};

template <class E>
using FramePtr = std::shared_ptr<const Frame<E>>;
template <class E>
using Vector = std::vector<E>;
template <class E>
using Matrix = std::vector<std::vector<E>>;

// ---------------------------------------------------------------------------
// Vectors and matrices over S.

template <class E>
Vector<E> vec_zero(const Frame<E>& F, int n) {
  return Vector<E>(n, F.zero());
}

template <class E>
Vector<E> vec_add(const Frame<E>& F, const Vector<E>& a, const Vector<E>& b) {
  Vector<E> r;
  for (size_t i = 0; i < a.size(); ++i) r.push_back(F.add(a[i], b[i]));
  return r;
}

template <class E>
Vector<E> vec_sub(const Frame<E>& F, const Vector<E>& a, const Vector<E>& b) {
  Vector<E> r;
  for (size_t i = 0; i < a.size(); ++i) r.push_back(F.sub(a[i], b[i]));
  return r;
}

template <class E>
Vector<E> vec_scale(const Frame<E>& F, const E& s, const Vector<E>& a) {
  Vector<E> r;
  for (auto& x : a) r.push_back(F.mul(s, x));
  return r;
}

template <class E>
bool vec_eq(const Frame<E>& F, const Vector<E>& a, const Vector<E>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!F.eq(a[i], b[i])) return false;
  return true;
}

template <class E>
std::string vec_show(const Frame<E>& F, const Vector<E>& a) {
  std::string s = "(";
  for (size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + F.show(a[i]);
  return s + ")";
}

template <class E>
Matrix<E> mat_identity(const Frame<E>& F, int n) {
  Matrix<E> m(n, Vector<E>(n, F.zero()));
  for (int i = 0; i < n; ++i) m[i][i] = F.one();
  return m;
}

template <class E>
Matrix<E> mat_mul(const Frame<E>& F, const Matrix<E>& A, const Matrix<E>& B) {
  const size_t n = A.size(), k = B.size(), m = k ? B[0].size() : 0;
  Matrix<E> C(n, Vector<E>(m, F.zero()));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      E acc = F.zero();
      for (size_t l = 0; l < k; ++l) acc = F.add(acc, F.mul(A[i][l], B[l][j]));
      C[i][j] = acc;
    }
  return C;
}

template <class E>
Vector<E> mat_apply(const Frame<E>& F, const Matrix<E>& A, const Vector<E>& v) {
  Vector<E> r;
  for (auto& row : A) {
    E acc = F.zero();
    for (size_t j = 0; j < v.size(); ++j) acc = F.add(acc, F.mul(row[j], v[j]));
    r.push_back(acc);
  }
  return r;
}

template <class E>
Matrix<E> mat_transpose(const Matrix<E>& A) {
  if (A.empty()) return A;
  Matrix<E> T(A[0].size(), Vector<E>());
  for (auto& row : A)
    for (size_t j = 0; j < row.size(); ++j) T[j].push_back(row[j]);
  return T;
}

template <class E>
bool mat_eq(const Frame<E>& F, const Matrix<E>& A, const Matrix<E>& B) {
  if (A.size() != B.size()) return false;
  for (size_t i = 0; i < A.size(); ++i)
    if (!vec_eq(F, A[i], B[i])) return false;
  return true;
}

template <class E2, class E1, class Fn>
Matrix<E2> mat_map(const Matrix<E1>& A, Fn f) {
  Matrix<E2> B;
  for (auto& row : A) {
    Vector<E2> r;
    for (auto& x : row) r.push_back(f(x));
    B.push_back(r);
  }
  return B;
}

template <class E>
std::string mat_show(const Frame<E>& F, const Matrix<E>& A) {
  std::string s = "[";
  for (size_t i = 0; i < A.size(); ++i) s += (i ? "; " : "") + vec_show(F, A[i]);
  return s + "]";
}

// Gauss-Jordan over a local ring: a matrix is invertible iff every column
// has a unit pivot below the diagonal during elimination.
template <class E>
std::optional<Matrix<E>> mat_inverse(const Frame<E>& F, Matrix<E> A) {
  const size_t n = A.size();
  Matrix<E> B = mat_identity(F, int(n));
  for (size_t c = 0; c < n; ++c) {
    size_t piv = n;
    for (size_t r = c; r < n && piv == n; ++r)
      if (F.is_unit(A[r][c])) piv = r;
    if (piv == n) return std::nullopt;
    std::swap(A[c], A[piv]);
    std::swap(B[c], B[piv]);
    E inv = F.inverse(A[c][c]);
    A[c] = vec_scale(F, inv, A[c]);
    B[c] = vec_scale(F, inv, B[c]);
    for (size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      E f = A[r][c];
      A[r] = vec_sub(F, A[r], vec_scale(F, f, A[c]));
      B[r] = vec_sub(F, B[r], vec_scale(F, f, B[c]));
    }
  }
  return B;
}

// ---------------------------------------------------------------------------
// Windows in normal form: P = S^h with basis L (first h-d vectors) then T
// (last d vectors), Q = L + I T. Column i of psi is F1(l_i) for i < h-d and
// F(t_j) for the T-columns, so F1(x) = psi (sigma(x_L), sigma1(x_T)) on Q and
// F(x) = psi (theta sigma(x_L), sigma(x_T)) on P.

template <class E>
struct Window {
  FramePtr<E> frame;
  int h = 0;
  int d = 0;
  Matrix<E> psi;
  Matrix<E> psi_inv;

  int l_rank() const { return h - d; }
  bool is_T(int i) const { return i >= h - d; }
};

template <class E>
Window<E> window_make(FramePtr<E> F, int h, int d, Matrix<E> psi) {
  if (h < 0 || d < 0 || d > h) throw UsageError("window ranks need 0 <= d <= h");
  if (int(psi.size()) != h) throw UsageError("structure matrix must be h x h");
  for (auto& row : psi)
    if (int(row.size()) != h) throw UsageError("structure matrix must be h x h");
  auto inv = mat_inverse(*F, psi);
  if (!inv) throw PropertyViolation("structure matrix " + mat_show(*F, psi) + " is not invertible");
  Window<E> w;
  w.frame = std::move(F);
  w.h = h;
  w.d = d;
  w.psi = std::move(psi);
  w.psi_inv = *inv;
  return w;
}

// The frame as a window of rank 1 with P = S, Q = I, F1 = sigma1.
template <class E>
Window<E> unit_window(FramePtr<E> F) {
  auto one = mat_identity(*F, 1);
  return window_make(F, 1, 1, one);
}

// P = Q = S, F1 = sigma.
template <class E>
Window<E> etale_unit_window(FramePtr<E> F) {
  auto one = mat_identity(*F, 1);
  return window_make(F, 1, 0, one);
}

template <class E>
Window<E> zero_window(FramePtr<E> F) {
  return window_make(F, 0, 0, Matrix<E>{});
}

template <class E>
bool in_Q(const Window<E>& w, const Vector<E>& x) {
  for (int i = w.l_rank(); i < w.h; ++i)
    if (!w.frame->in_I(x[i])) return false;
  return true;
}

template <class E>
Vector<E> window_F1(const Window<E>& w, const Vector<E>& x) {
  const auto& F = *w.frame;
  if (int(x.size()) != w.h) throw UsageError("vector has the wrong rank");
  if (!in_Q(w, x)) throw PropertyViolation("F1 applied outside Q: " + vec_show(F, x));
  Vector<E> a;
  for (int i = 0; i < w.h; ++i) a.push_back(w.is_T(i) ? F.sigma1(x[i]) : F.sigma(x[i]));
  return mat_apply(F, w.psi, a);
}

template <class E>
Vector<E> window_F(const Window<E>& w, const Vector<E>& x) {
  const auto& F = *w.frame;
  const E theta = F.theta();
  Vector<E> a;
  for (int i = 0; i < w.h; ++i) a.push_back(w.is_T(i) ? F.sigma(x[i]) : F.mul(theta, F.sigma(x[i])));
  return mat_apply(F, w.psi, a);
}

template <class E>
Vector<E> random_P(const Window<E>& w, std::mt19937_64& g) {
  Vector<E> x;
  for (int i = 0; i < w.h; ++i) x.push_back(w.frame->random(g));
  return x;
}

template <class E>
Vector<E> random_Q(const Window<E>& w, std::mt19937_64& g) {
  Vector<E> x;
  for (int i = 0; i < w.h; ++i) x.push_back(w.is_T(i) ? w.frame->random_ideal(g) : w.frame->random(g));
  return x;
}

// Frame axioms on samples.
template <class E>
CheckReport check_frame(const Frame<E>& F, int samples, std::mt19937_64& g) {
  CheckReport r;
  const E a1 = F.sigma1_unit_preimage();
  r.expect(F.in_I(a1), "sigma1 preimage of 1 is not in I");
  r.expect(F.eq(F.sigma1(a1), F.one()), "sigma1(a1) != 1");
  r.expect(F.eq(F.sigma(F.one()), F.one()), "sigma(1) != 1");
  const E theta = F.theta();
  for (int s = 0; s < samples; ++s) {
    E a = F.random(g), b = F.random(g), i = F.random_ideal(g), j = F.random_ideal(g);
    r.expect(F.in_I(i), "sampled ideal element not in I");
    r.expect(F.eq(F.sigma(F.add(a, b)), F.add(F.sigma(a), F.sigma(b))), "sigma not additive at " + F.show(a));
    r.expect(F.eq(F.sigma(F.mul(a, b)), F.mul(F.sigma(a), F.sigma(b))),
             "sigma not multiplicative at " + F.show(a) + ", " + F.show(b));
    r.expect(F.in_I(F.mul(a, i)), "I not an ideal at " + F.show(a));
    r.expect(F.eq(F.sigma1(F.mul(a, i)), F.mul(F.sigma(a), F.sigma1(i))),
             "sigma1 not sigma-linear at " + F.show(a) + ", " + F.show(i));
    r.expect(F.eq(F.sigma1(F.add(i, j)), F.add(F.sigma1(i), F.sigma1(j))), "sigma1 not additive");
    r.expect(F.eq(F.sigma(i), F.mul(theta, F.sigma1(i))), "sigma != theta sigma1 at " + F.show(i));
    auto c = F.congruent_mod_p(F.sigma(a), F.pow(a, F.p()));
    if (!c) ++r.skipped;
    else r.expect(*c, "sigma(a) != a^p mod p at " + F.show(a));
  }
  return r;
}

// Window axioms on samples: F computed from psi agrees with theta F1 on Q,
// F1(a x) = sigma1(a) F(x) for a in I, and F1(Q) generates P.
template <class E>
CheckReport check_window(const Window<E>& w, int samples, std::mt19937_64& g) {
  const auto& F = *w.frame;
  CheckReport r;
  r.expect(mat_eq(F, mat_mul(F, w.psi, w.psi_inv), mat_identity(F, w.h)), "psi psi^{-1} != 1");
  const E theta = F.theta();
  for (int s = 0; s < samples; ++s) {
    auto x = random_Q(w, g);
    r.expect(vec_eq(F, window_F(w, x), vec_scale(F, theta, window_F1(w, x))),
             "F != theta F1 at " + vec_show(F, x));
    auto y = random_P(w, g);
    E a = F.random_ideal(g);
    r.expect(vec_eq(F, window_F1(w, vec_scale(F, a, y)), vec_scale(F, F.sigma1(a), window_F(w, y))),
             "F1(a x) != sigma1(a) F(x) at " + vec_show(F, y));
    auto x2 = random_Q(w, g);
    r.expect(vec_eq(F, window_F1(w, vec_add(F, x, x2)), vec_add(F, window_F1(w, x), window_F1(w, x2))),
             "F1 not additive");
  }
  // F1(l_i) and F1(a1 t_j) = F(t_j) form the columns of psi.
  const E a1 = F.sigma1_unit_preimage();
  Matrix<E> cols;
  for (int i = 0; i < w.h; ++i) {
    Vector<E> e = vec_zero(F, w.h);
    e[i] = w.is_T(i) ? a1 : F.one();
    cols.push_back(window_F1(w, e));
  }
  r.expect(bool(mat_inverse(F, mat_transpose(cols))), "F1(Q) does not generate P");
  return r;
}

// ---------------------------------------------------------------------------
// u-homomorphisms alpha: F -> F' with sigma1' alpha = u alpha sigma1 on I,
// and optionally a unit c with c sigma'(c)^{-1} = u.

template <class E1, class E2>
struct FrameMap {
  FramePtr<E1> source;
  FramePtr<E2> target;
  std::function<E2(const E1&)> alpha;
  E2 u;
  std::optional<E2> c;
  std::string name;
};

template <class E>
FrameMap<E, E> identity_map(FramePtr<E> F) {
  return FrameMap<E, E>{F, F, [](const E& x) { return x; }, F->one(), F->one(), "id"};
}

template <class E1, class E2, class E3>
FrameMap<E1, E3> compose(const FrameMap<E2, E3>& b, const FrameMap<E1, E2>& a) {
  const auto& T = *b.target;
  FrameMap<E1, E3> m;
  m.source = a.source;
  m.target = b.target;
  auto fa = a.alpha, fb = b.alpha;
  m.alpha = [fa, fb](const E1& x) { return fb(fa(x)); };
  m.u = T.mul(b.u, b.alpha(a.u));
  if (a.c && b.c) m.c = T.mul(*b.c, b.alpha(*a.c));
  m.name = b.name + "." + a.name;
  return m;
}

template <class E1, class E2>
CheckReport check_map(const FrameMap<E1, E2>& m, int samples, std::mt19937_64& g) {
  const auto& S = *m.source;
  const auto& T = *m.target;
  CheckReport r;
  r.expect(T.is_unit(m.u), "u is not a unit");
  r.expect(T.eq(m.alpha(S.one()), T.one()), "alpha(1) != 1");
  if (m.c) {
    r.expect(T.is_unit(*m.c), "c is not a unit");
    r.expect(T.eq(T.mul(*m.c, T.inverse(T.sigma(*m.c))), m.u), "c sigma(c)^{-1} != u");
  }
  for (int s = 0; s < samples; ++s) {
    E1 a = S.random(g), b = S.random(g), i = S.random_ideal(g);
    r.expect(T.eq(m.alpha(S.add(a, b)), T.add(m.alpha(a), m.alpha(b))), "alpha not additive");
    r.expect(T.eq(m.alpha(S.mul(a, b)), T.mul(m.alpha(a), m.alpha(b))), "alpha not multiplicative");
    r.expect(T.eq(m.alpha(S.sigma(a)), T.sigma(m.alpha(a))), "alpha sigma != sigma' alpha at " + S.show(a));
    const E2 ai = m.alpha(i);
    r.expect(T.in_I(ai), "alpha(I) not in I' at " + S.show(i));
    if (T.in_I(ai))
      r.expect(T.eq(T.sigma1(ai), T.mul(m.u, m.alpha(S.sigma1(i)))),
               "sigma1' alpha != u alpha sigma1 at " + S.show(i));
  }
  return r;
}

// Base change: psi' = alpha(psi) diag(u on L-columns, 1 on T-columns).
template <class E1, class E2>
Window<E2> base_change(const FrameMap<E1, E2>& m, const Window<E1>& w) {
  const auto& T = *m.target;
  Matrix<E2> psi = mat_map<E2>(w.psi, m.alpha);
  for (auto& row : psi)
    for (int j = 0; j < w.l_rank(); ++j) row[j] = T.mul(row[j], m.u);
  return window_make(m.target, w.h, w.d, psi);
}

// tau_c(x) = c alpha(x) in alpha_* P.
template <class E1, class E2>
Vector<E2> tau(const FrameMap<E1, E2>& m, const Vector<E1>& x) {
  if (!m.c) throw UsageError("frame map " + m.name + " has no unit c");
  Vector<E2> y;
  for (auto& v : x) y.push_back(m.target->mul(*m.c, m.alpha(v)));
  return y;
}

// ---------------------------------------------------------------------------
// Bilinear forms P x P' -> P'': component k of gamma(x, y) is x^T G_k y.

template <class E>
struct BilinearForm {
  Window<E> left, right, target;
  std::vector<Matrix<E>> gram;  // one h x h' matrix per basis vector of the target
};

template <class E>
Vector<E> pair(const BilinearForm<E>& b, const Vector<E>& x, const Vector<E>& y) {
  const auto& F = *b.left.frame;
  Vector<E> r;
  for (auto& G : b.gram) {
    auto Gy = mat_apply(F, G, y);
    E acc = F.zero();
    for (size_t i = 0; i < x.size(); ++i) acc = F.add(acc, F.mul(x[i], Gy[i]));
    r.push_back(acc);
  }
  return r;
}

template <class E>
CheckReport check_bilinear(const BilinearForm<E>& b, int samples, std::mt19937_64& g) {
  const auto& F = *b.left.frame;
  CheckReport r;
  for (int s = 0; s < samples; ++s) {
    auto x = random_Q(b.left, g), y = random_Q(b.right, g);
    auto v = pair(b, x, y);
    r.expect(in_Q(b.target, v), "gamma(Q x Q') not in Q'' at " + vec_show(F, x) + ", " + vec_show(F, y));
    if (!in_Q(b.target, v)) continue;
    r.expect(vec_eq(F, pair(b, window_F1(b.left, x), window_F1(b.right, y)), window_F1(b.target, v)),
             "gamma(F1 x, F1 y) != F1(gamma(x, y)) at " + vec_show(F, x) + ", " + vec_show(F, y));
  }
  return r;
}

// Perfect: target of rank 1 and invertible Gram matrix.
template <class E>
bool is_perfect(const BilinearForm<E>& b) {
  if (b.gram.size() != 1 || b.left.h != b.right.h) return false;
  return bool(mat_inverse(*b.left.frame, b.gram[0]));
}

// Gram matrix of the canonical pairing between the basis (L, T) of P and
// the dual basis (T*, L*) of P^t: l_i pairs with the i-th L* vector, t_j
// with the j-th T* vector.
template <class E>
Matrix<E> dual_gram(const Frame<E>& F, int h, int d) {
  Matrix<E> G(h, Vector<E>(h, F.zero()));
  for (int i = 0; i < h - d; ++i) G[i][d + i] = F.one();
  for (int j = 0; j < d; ++j) G[h - d + j][j] = F.one();
  return G;
}

// The dual window has rank h, Hodge rank h-d, and structure matrix
// G^T (psi^{-1})^T G, forced by psi^T G psi^t = G.
template <class E>
Window<E> dual(const Window<E>& w) {
  const auto& F = *w.frame;
  auto G = dual_gram(F, w.h, w.d);
  auto psi = mat_mul(F, mat_transpose(G), mat_mul(F, mat_transpose(w.psi_inv), G));
  return window_make(w.frame, w.h, w.h - w.d, psi);
}

template <class E>
BilinearForm<E> dual_pairing(const Window<E>& w) {
  return BilinearForm<E>{w, dual(w), unit_window(w.frame), {dual_gram(*w.frame, w.h, w.d)}};
}

// alpha_*(gamma) = c^{-1} alpha(gamma) between the base-changed windows.
template <class E1, class E2>
BilinearForm<E2> base_change_form(const FrameMap<E1, E2>& m, const BilinearForm<E1>& b) {
  if (!m.c) throw UsageError("frame map " + m.name + " has no unit c");
  const auto& T = *m.target;
  const E2 ci = T.inverse(*m.c);
  BilinearForm<E2> r{base_change(m, b.left), base_change(m, b.right), base_change(m, b.target), {}};
  for (auto& G : b.gram) r.gram.push_back(mat_map<E2>(G, [&](const E1& x) { return T.mul(ci, m.alpha(x)); }));
  return r;
}

// ---------------------------------------------------------------------------
// Modules of invariants T(P) = {x in Q : F1(x) = x}.

template <class E>
bool is_invariant(const Window<E>& w, const Vector<E>& x) {
  return in_Q(w, x) && vec_eq(*w.frame, window_F1(w, x), x);
}

template <class E>
std::string vec_key(const Frame<E>& F, const Vector<E>& x) {
  std::string s;
  for (auto& v : x) s += F.show(v) + "|";
  return s;
}

template <class E>
struct Invariants {
  int level = 0;
  std::vector<Vector<E>> elements;    // all of T(P) at the level, sorted by key
  std::vector<Vector<E>> generators;  // greedy generating set in that order
  std::vector<uint64_t> generator_orders;
  std::string method;
  bool cross_checked = false;
  uint64_t candidates = 0;  // vectors tested

  uint64_t order() const { return elements.size(); }
};

namespace detail {

// All vectors in Q at the given level, or nullopt past the budget.
template <class E>
std::optional<std::vector<Vector<E>>> enumerate_Q(const Window<E>& w, int level, double budget) {
  const auto& F = *w.frame;
  double total = 1;
  for (int i = 0; i < w.h; ++i) total *= F.count(level);
  if (total > budget) return std::nullopt;
  auto all = F.elements(level);
  std::vector<E> ideal;
  for (auto& a : all)
    if (F.in_I(a)) ideal.push_back(a);
  std::vector<Vector<E>> out{Vector<E>{}};
  for (int i = 0; i < w.h; ++i) {
    const auto& choices = w.is_T(i) ? ideal : all;
    std::vector<Vector<E>> next;
    for (auto& v : out)
      for (auto& a : choices) {
        auto u = v;
        u.push_back(a);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

template <class E>
std::vector<Vector<E>> sort_unique(const Frame<E>& F, std::vector<Vector<E>> v) {
  std::map<std::string, Vector<E>> m;
  for (auto& x : v) m.emplace(vec_key(F, x), x);
  std::vector<Vector<E>> out;
  for (auto& [k, x] : m) out.push_back(x);
  return out;
}

}  // namespace detail

// Brute force at the top level when |Q| fits the budget; filtration lifting
// from the lowest level otherwise (and in addition, as a cross-check, when
// both fit). Lifting is exact: solutions at level j+1 reduce to solutions
// at level j, so each level only tests the lifts of the previous solutions.
template <class E>
Invariants<E> invariants(const Window<E>& w, double budget = 2e5, int level = -1) {
  const auto& F = *w.frame;
  const int top = level < 0 ? F.max_level() : level;
  Invariants<E> res;
  res.level = top;

  std::optional<std::vector<Vector<E>>> brute;
  if (auto Q = detail::enumerate_Q(w, top, budget)) {
    std::vector<Vector<E>> sol;
    for (auto& x : *Q)
      if (is_invariant(w, x)) sol.push_back(x);
    res.candidates += Q->size();
    brute = detail::sort_unique(F, sol);
  }

  std::optional<std::vector<Vector<E>>> lifted;
  const int base = std::min(F.min_level(), top);
  if (auto Q0 = detail::enumerate_Q(w, base, budget)) {
    std::vector<Vector<E>> sol;
    for (auto& x : *Q0)
      if (is_invariant(w, x)) sol.push_back(x);
    res.candidates += Q0->size();
    bool over = false;
    for (int j = base; j < top && !over; ++j) {
      std::vector<Vector<E>> next;
      for (auto& x : sol) {
        std::vector<Vector<E>> cand{Vector<E>{}};
        for (int i = 0; i < w.h; ++i) {
          std::vector<Vector<E>> grow;
          for (auto& v : cand)
            for (auto& a : F.lifts(x[i])) {
              if (w.is_T(i) && !F.in_I(a)) continue;
              auto u = v;
              u.push_back(a);
              grow.push_back(std::move(u));
            }
          cand = std::move(grow);
        }
        res.candidates += cand.size();
        for (auto& y : cand)
          if (is_invariant(w, y)) next.push_back(y);
        if (double(res.candidates) > 4 * budget) {
          over = true;
          break;
        }
      }
      sol = std::move(next);
    }
    if (!over) lifted = detail::sort_unique(F, sol);
  }

  if (!brute && !lifted)
    throw PrecisionExhausted("invariants: Q exceeds the budget " + std::to_string(int64_t(budget)) +
                             " and filtration lifting did not fit");
  if (brute && lifted) {
    res.cross_checked = true;
    if (brute->size() != lifted->size())
      throw PropertyViolation("invariants: brute force found " + std::to_string(brute->size()) +
                              " solutions, filtration lifting " + std::to_string(lifted->size()));
    for (size_t i = 0; i < brute->size(); ++i)
      if (vec_key(F, (*brute)[i]) != vec_key(F, (*lifted)[i]))
        throw PropertyViolation("invariants: brute force and lifting disagree at " +
                                vec_show(F, (*brute)[i]));
    res.method = "lifting+brute-force";
  } else {
    res.method = brute ? "brute-force" : "lifting";
  }
  res.elements = brute ? *brute : *lifted;

  // greedy generators, largest order first (ties in key order)
  const std::string zero_key = vec_key(F, vec_zero(F, w.h));
  auto multiples = [&](const Vector<E>& x) {
    std::vector<Vector<E>> mult{vec_zero(F, w.h)};
    const auto z = vec_zero(F, w.h);
    for (auto m = x; !vec_eq(F, m, z); m = vec_add(F, m, x)) mult.push_back(m);
    return mult;
  };
  std::vector<std::pair<size_t, size_t>> by_order;  // (order, index)
  for (size_t i = 0; i < res.elements.size(); ++i) by_order.emplace_back(multiples(res.elements[i]).size(), i);
  std::stable_sort(by_order.begin(), by_order.end(), [](auto& a, auto& b) { return a.first > b.first; });
  std::set<std::string> span{zero_key};
  std::vector<Vector<E>> span_v{vec_zero(F, w.h)};
  for (auto& [ord, i] : by_order) {
    const auto& x = res.elements[i];
    if (span.count(vec_key(F, x))) continue;
    res.generators.push_back(x);
    auto mult = multiples(x);
    res.generator_orders.push_back(mult.size());
    std::vector<Vector<E>> grown;
    for (auto& s : span_v)
      for (auto& m : mult) {
        auto v = vec_add(F, s, m);
        if (span.insert(vec_key(F, v)).second) grown.push_back(v);
      }
    for (auto& v : grown) span_v.push_back(v);
  }
  return res;
}

}  // namespace wz
