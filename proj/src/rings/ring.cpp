#include "wz/ring.hpp"

#include <algorithm>
#include <array>

#include "wz/kernels.hpp"

namespace wz {

// ---------------------------------------------------------------------------
// FreeAlgebra / ModAlgebra

std::vector<int64_t> FreeAlgebra::mul(const std::vector<int64_t>& x,
                                      const std::vector<int64_t>& y) const {
  std::vector<__int128> acc(n, 0);
  for (int i = 0; i < n; ++i) {
    if (!x[i]) continue;
    for (int j = 0; j < n; ++j) {
      if (!y[j]) continue;
      const __int128 s = (__int128)x[i] * y[j];
      const int64_t* row = &table[(size_t(i) * n + j) * n];
      for (int k = 0; k < n; ++k)
        if (row[k]) acc[k] += s * row[k];
    }
  }
  std::vector<int64_t> out(n);
  const __int128 lim = (__int128)1 << 62;
  for (int k = 0; k < n; ++k) {
    if (acc[k] > lim || acc[k] < -lim) throw EnvelopeExceeded("lift structure constants overflow");
    out[k] = int64_t(acc[k]);
  }
  return out;
}

namespace {

uint32_t mod_of(int64_t v, uint32_t Q) {
  int64_t r = v % int64_t(Q);
  if (r < 0) r += Q;
  return uint32_t(r);
}

}  // namespace

ModAlgebra::ModAlgebra(const FreeAlgebra& f, uint32_t Q) : n_(f.n), Q_(Q) {
  if (uint64_t(Q) >= kernels::kMaxModulus)
    throw EnvelopeExceeded("modulus " + std::to_string(Q) + " exceeds the 2^24 kernel envelope");
  table_.resize(f.table.size());
  for (size_t i = 0; i < f.table.size(); ++i) table_[i] = mod_of(f.table[i], Q);
  nonzero_.assign(size_t(n_) * n_, 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        if (table_[(size_t(i) * n_ + j) * n_ + k]) nonzero_[size_t(i) * n_ + j] = 1;
  one_.resize(n_);
  for (int i = 0; i < n_; ++i) one_[i] = mod_of(f.one[i], Q);
}

void ModAlgebra::mul(const uint32_t* x, const uint32_t* y, uint32_t* out) const {
  std::array<uint64_t, 64> small{};
  std::vector<uint64_t> big;
  uint64_t* acc = small.data();
  if (n_ > 64) {
    big.assign(n_, 0);
    acc = big.data();
  }
  const auto axpy = kernels::active();
  size_t pending = 0;
  for (int i = 0; i < n_; ++i) {
    const uint64_t xi = x[i];
    if (!xi) continue;
    for (int j = 0; j < n_; ++j) {
      if (!y[j] || !nonzero_[size_t(i) * n_ + j]) continue;
      const uint32_t s = uint32_t(xi * y[j] % Q_);
      if (!s) continue;
      axpy(acc, &table_[(size_t(i) * n_ + j) * n_], s, size_t(n_));
      if (++pending == kernels::kMaxPending) {
        for (int k = 0; k < n_; ++k) acc[k] %= Q_;
        pending = 0;
      }
    }
  }
  for (int k = 0; k < n_; ++k) out[k] = uint32_t(acc[k] % Q_);
}

void ModAlgebra::add(const uint32_t* x, const uint32_t* y, uint32_t* out) const {
  for (int k = 0; k < n_; ++k) {
    uint32_t s = x[k] + y[k];
    out[k] = s >= Q_ ? s - Q_ : s;
  }
}

void ModAlgebra::sub(const uint32_t* x, const uint32_t* y, uint32_t* out) const {
  for (int k = 0; k < n_; ++k) out[k] = x[k] >= y[k] ? x[k] - y[k] : x[k] + Q_ - y[k];
}

// ---------------------------------------------------------------------------
// construction helpers

namespace {

std::string join_name(const std::string& b, const std::string& var, int j) {
  std::string v = j == 0 ? "" : (j == 1 ? var : var + "^" + std::to_string(j));
  if (b.empty()) return v;
  if (v.empty()) return b;
  return b + "*" + v;
}

std::vector<int64_t> lift_coords(const RingElement& x) {
  return std::vector<int64_t>(x.coords().begin(), x.coords().end());
}

struct Spec {
  std::shared_ptr<FreeAlgebra> lift;
  std::vector<Vec> gens;
};

Spec series_spec(const Ring& B, const std::string& var, int M) {
  if (M < 1) throw DomainError("series precision must be at least 1");
  const FreeAlgebra& fb = B.lift();
  const int nb = fb.n;
  auto f = std::make_shared<FreeAlgebra>();
  f->n = nb * M;
  const int n = f->n;
  f->table.assign(size_t(n) * n * n, 0);
  for (int j = 0; j < M; ++j)
    for (int l = 0; j + l < M; ++l)
      for (int i = 0; i < nb; ++i)
        for (int k = 0; k < nb; ++k)
          for (int m = 0; m < nb; ++m) {
            int64_t c = fb.table[(size_t(i) * nb + k) * nb + m];
            if (!c) continue;
            int a = j * nb + i, b = l * nb + k, o = (j + l) * nb + m;
            f->table[(size_t(a) * n + b) * n + o] = c;
          }
  f->one.assign(n, 0);
  for (int i = 0; i < nb; ++i) f->one[i] = fb.one[i];
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < nb; ++i) f->names.push_back(join_name(fb.names[i], var, j));
  for (const auto& [name, v] : fb.vars) {
    std::vector<int64_t> w(n, 0);
    for (int i = 0; i < nb; ++i) w[i] = v[i];
    f->vars[name] = w;
  }
  std::vector<int64_t> t(n, 0);
  if (M > 1)
    for (int i = 0; i < nb; ++i) t[nb + i] = fb.one[i];
  f->vars[var] = t;
  Spec s{f, {}};
  for (const auto& g : B.lattice().generators())
    for (int j = 0; j < M; ++j) {
      Vec v(n, 0);
      for (int i = 0; i < nb; ++i) v[j * nb + i] = g[i];
      s.gens.push_back(v);
    }
  return s;
}

Spec ext_spec(const Ring& B, const std::string& var, const UPoly& g) {
  const int d = g.degree();
  if (d < 1) throw DomainError("extension polynomial must have degree at least 1");
  if (g.c[d] != B.one()) throw DomainError("extension polynomial " + g.str(var) + " is not monic");
  const FreeAlgebra& fb = B.lift();
  const int nb = fb.n;
  std::vector<std::vector<int64_t>> gl(d);
  for (int j = 0; j < d; ++j) gl[j] = lift_coords(g.c[j]);
  // X[m] = x^m reduced, as d coefficients in the lift of B
  using BV = std::vector<int64_t>;
  std::vector<std::vector<BV>> X(std::max(2 * d - 1, d + 1), std::vector<BV>(d, BV(nb, 0)));
  for (int m = 0; m < d; ++m) X[m][m] = fb.one;
  for (size_t m = d; m < X.size(); ++m) {
    const BV c = X[m - 1][d - 1];
    for (int s = d - 1; s >= 1; --s) X[m][s] = X[m - 1][s - 1];
    X[m][0] = BV(nb, 0);
    for (int j = 0; j < d; ++j) {
      BV t = fb.mul(c, gl[j]);
      for (int u = 0; u < nb; ++u) X[m][j][u] -= t[u];
    }
  }
  auto f = std::make_shared<FreeAlgebra>();
  f->n = nb * d;
  const int n = f->n;
  f->table.assign(size_t(n) * n * n, 0);
  for (int i = 0; i < nb; ++i)
    for (int k = 0; k < nb; ++k) {
      BV bi(nb, 0), bk(nb, 0);
      bi[i] = 1;
      bk[k] = 1;
      const BV prod = fb.mul(bi, bk);
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
          for (int s = 0; s < d; ++s) {
            const BV c = fb.mul(prod, X[j + l][s]);
            for (int u = 0; u < nb; ++u) {
              if (!c[u]) continue;
              int a = j * nb + i, b = l * nb + k, o = s * nb + u;
              f->table[(size_t(a) * n + b) * n + o] = c[u];
            }
          }
    }
  f->one.assign(n, 0);
  for (int i = 0; i < nb; ++i) f->one[i] = fb.one[i];
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < nb; ++i) f->names.push_back(join_name(fb.names[i], var, j));
  for (const auto& [name, v] : fb.vars) {
    std::vector<int64_t> w(n, 0);
    for (int i = 0; i < nb; ++i) w[i] = v[i];
    f->vars[name] = w;
  }
  std::vector<int64_t> x(n, 0);
  for (int s = 0; s < d; ++s)
    for (int u = 0; u < nb; ++u) x[s * nb + u] = X[1][s][u];
  f->vars[var] = x;
  Spec sp{f, {}};
  for (const auto& gen : B.lattice().generators())
    for (int j = 0; j < d; ++j) {
      Vec v(n, 0);
      for (int i = 0; i < nb; ++i) v[j * nb + i] = gen[i];
      sp.gens.push_back(v);
    }
  return sp;
}

// Frobenius-matrix test: f squarefree with a single irreducible factor.
bool irreducible_mod_p(uint32_t p, const std::vector<uint32_t>& f) {
  const int r = int(f.size()) - 1;
  auto mulmodf = [&](const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint64_t> c(2 * r, 0);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) c[i + j] = (c[i + j] + uint64_t(a[i]) * b[j]) % p;
    for (int m = 2 * r - 2; m >= r; --m) {
      uint64_t t = c[m];
      if (!t) continue;
      c[m] = 0;
      for (int j = 0; j < r; ++j) c[m - r + j] = (c[m - r + j] + (p - t) * f[j]) % p;
    }
    std::vector<uint32_t> o(r);
    for (int i = 0; i < r; ++i) o[i] = uint32_t(c[i]);
    return o;
  };
  FpMatrix Q(p, r, r);
  for (int j = 0; j < r; ++j) {
    std::vector<uint32_t> b(r, 0), acc(r, 0);
    b[j] = 1;
    acc[0] = 1;
    if (r == 1) acc[0] = 1;
    for (uint32_t k = 0; k < p; ++k) acc = mulmodf(acc, b);
    for (int i = 0; i < r; ++i) Q.at(i, j) = acc[i];
  }
  if (Q.rank() != r) return false;
  FpMatrix M = Q;
  for (int i = 0; i < r; ++i) M.at(i, i) = (M.at(i, i) + p - 1) % p;
  return r - M.rank() == 1;
}

std::vector<uint32_t> smallest_irreducible(uint32_t p, int r) {
  uint64_t total = 1;
  for (int i = 0; i < r; ++i) total *= p;
  for (uint64_t N = 0; N < total; ++N) {
    std::vector<uint32_t> f(r + 1, 0);
    uint64_t t = N;
    for (int i = 0; i < r; ++i) {
      f[i] = uint32_t(t % p);
      t /= p;
    }
    f[r] = 1;
    if (irreducible_mod_p(p, f)) return f;
  }
  throw DomainError("no irreducible polynomial found");
}

std::string poly_text(const std::vector<uint32_t>& f, const std::string& var) {
  std::string s;
  for (int i = int(f.size()) - 1; i >= 0; --i) {
    if (!f[i]) continue;
    std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
    std::string term;
    if (mono.empty()) term = std::to_string(f[i]);
    else if (f[i] == 1) term = mono;
    else term = std::to_string(f[i]) + "*" + mono;
    s += (s.empty() ? "" : "+") + term;
  }
  return s;
}

}  // namespace

ExprPtr field_polynomial(const RingDescriptor& d) {
  using K = RingDescriptor::Kind;
  if (d.kind == K::PrimeField) return nullptr;
  if (d.kind != K::FiniteField) throw UsageError("not a finite field descriptor: " + d.str());
  if (d.poly) return d.poly;
  if (d.degree < 1) throw DomainError("field degree must be positive");
  if (d.degree == 1) return nullptr;
  return parse_expr(poly_text(smallest_irreducible(d.p, d.degree), d.var.empty() ? "z" : d.var));
}

// ---------------------------------------------------------------------------
// Ring

RingPtr Ring::from_lattice(std::shared_ptr<const FreeAlgebra> lift, uint32_t p, const Lattice& L,
                           std::string name) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  std::shared_ptr<Ring> R(new Ring());
  R->name_ = std::move(name);
  R->lift_ = std::move(lift);
  R->p_ = p;
  R->L_ = L;
  R->alg_ = ModAlgebra(*R->lift_, L.modulus());
  R->one_ = R->alg_.one();
  L.reduce(R->one_.data());
  if (L.index() == 1) throw DomainError("descriptor describes the zero ring");
  // characteristic exponent
  R->a_ = 0;
  for (uint64_t q = 1;; q *= p) {
    bool all = true;
    for (int i = 0; i < R->lift_->n && all; ++i) {
      Vec v(R->lift_->n, 0);
      v[i] = uint32_t(q % L.modulus());
      all = L.contains(v);
    }
    if (all) break;
    ++R->a_;
  }
  R->init_local();
  return R;
}

void Ring::init_local() {
  const int n = lift_->n;
  const Lattice Lp = L_.with_modulus(p_);
  std::vector<int> freeix;
  for (int i = 0; i < n; ++i)
    if (Lp.pivot(i) == p_) freeix.push_back(i);
  const int dA = int(freeix.size());
  ModAlgebra algp(*lift_, p_);
  auto mulp = [&](const Vec& x, const Vec& y) {
    Vec o(n);
    algp.mul(x.data(), y.data(), o.data());
    Lp.reduce(o.data());
    return o;
  };
  FpMatrix F(p_, dA, dA);
  for (int j = 0; j < dA; ++j) {
    Vec b(n, 0);
    b[freeix[j]] = 1;
    Vec w = b;
    for (uint32_t k = 1; k < p_; ++k) w = mulp(w, b);
    for (int i = 0; i < dA; ++i) F.at(i, j) = w[freeix[i]];
  }
  FpMatrix Fk = F;
  for (int k = 1; k < dA; ++k) Fk = Fk.mul(F);
  const auto N = dA ? Fk.kernel() : std::vector<Vec>{};
  const int dimN = int(N.size());
  // fixed points of Frobenius on A/N
  FpMatrix MN(p_, dA, dA + dimN);
  for (int i = 0; i < dA; ++i) {
    for (int j = 0; j < dA; ++j) MN.at(i, j) = (F.at(i, j) + (i == j ? p_ - 1 : 0)) % p_;
    for (int j = 0; j < dimN; ++j) MN.at(i, dA + j) = N[j][i];
  }
  const int fixed = dA - MN.rank();
  if (fixed != 1)
    throw DomainError("ring " + name_ + " is not local (" + std::to_string(fixed) +
                      " residue factors)");
  r_ = dA - dimN;
  std::vector<Vec> mg = L_.generators();
  for (int i = 0; i < n; ++i) {
    Vec v(n, 0);
    v[i] = p_ % L_.modulus();
    mg.push_back(v);
  }
  for (const auto& b : N) {
    Vec v(n, 0);
    for (int i = 0; i < dA; ++i) v[freeix[i]] = b[i];
    mg.push_back(v);
  }
  m_ = Lattice::from_generators(n, L_.modulus(), mg);
  std::vector<Vec> idg;
  for (int i = 0; i < n; ++i) {
    Vec v(n, 0);
    v[i] = 1;
    idg.push_back(v);
  }
  powers_.clear();
  powers_.push_back(Lattice::from_generators(n, L_.modulus(), idg));
  powers_.push_back(m_);
  if (m_ == L_) {
    e_ = 1;
  } else {
    const auto mgens = m_.generators();
    for (int j = 2;; ++j) {
      if (j > 4096) throw PropertyViolation("maximal ideal is not nilpotent");
      std::vector<Vec> g = L_.generators();
      for (const auto& x : powers_.back().generators())
        for (const auto& y : mgens) {
          Vec o(n);
          alg_.mul(x.data(), y.data(), o.data());
          g.push_back(o);
        }
      powers_.push_back(Lattice::from_generators(n, L_.modulus(), g));
      if (powers_.back() == L_) {
        e_ = j;
        break;
      }
    }
  }
  section_exp_ = r_;
  while (section_exp_ < e_) section_exp_ += r_;
  self_residue_ = (e_ == 1);
}

RingPtr Ring::residue_field() const {
  if (self_residue_) return shared_from_this();
  if (!k_) k_ = from_lattice(lift_, p_, m_.with_modulus(p_), "k(" + name_ + ")");
  return k_;
}

uint64_t Ring::residue_order() const {
  uint64_t q = 1;
  for (int i = 0; i < r_; ++i) q *= p_;
  return q;
}

RingPtr Ring::make(const RingDescriptor& d) {
  using K = RingDescriptor::Kind;
  RingPtr R;
  switch (d.kind) {
    case K::IntegersMod:
    case K::PrimeField: {
      const int a = d.kind == K::PrimeField ? 1 : d.exponent;
      if (!is_prime(d.p)) throw DomainError(std::to_string(d.p) + " is not prime");
      if (a < 1) throw DomainError("exponent must be positive");
      uint64_t D = 1;
      for (int i = 0; i < a; ++i) {
        D *= d.p;
        if (D >= kernels::kMaxModulus) throw EnvelopeExceeded("modulus exceeds 2^24");
      }
      auto f = std::make_shared<FreeAlgebra>();
      f->n = 1;
      f->table = {1};
      f->one = {1};
      f->names = {""};
      R = from_lattice(f, d.p, Lattice::from_generators(1, uint32_t(D), {}), d.str());
      break;
    }
    case K::FiniteField: {
      if (!is_prime(d.p)) throw DomainError(std::to_string(d.p) + " is not prime");
      RingPtr B = make(*RingDescriptor::fp(d.p));
      const std::string var = d.var.empty() ? "z" : d.var;
      ExprPtr poly = d.poly;
      if (!poly) {
        if (d.degree < 1) throw DomainError("field degree must be positive");
        poly = parse_expr(poly_text(smallest_irreducible(d.p, d.degree), var));
      }
      UPoly g = UPoly::from_expr(*B, *poly, var, {{"p", int64_t(d.p)}});
      Spec s = ext_spec(*B, var, g);
      const int n = s.lift->n;
      R = from_lattice(s.lift, d.p, Lattice::from_generators(n, B->modulus(), s.gens), d.str());
      if (!R->is_field()) throw DomainError(to_string(*poly) + " is not irreducible mod " + std::to_string(d.p));
      break;
    }
    case K::TruncatedSeries: {
      RingPtr B = make(*d.base);
      Spec s = series_spec(*B, d.var, d.precision);
      R = from_lattice(s.lift, B->p(), Lattice::from_generators(s.lift->n, B->modulus(), s.gens),
                       d.str());
      break;
    }
    case K::QuotientExtension: {
      RingPtr B = make(*d.base);
      if (B->has_var(d.var)) throw DomainError("variable '" + d.var + "' already used by the base");
      UPoly g = UPoly::from_expr(*B, *d.poly, d.var, {{"p", int64_t(B->p())}});
      Spec s = ext_spec(*B, d.var, g);
      const int n = s.lift->n;
      R = from_lattice(s.lift, B->p(), Lattice::from_generators(n, B->modulus(), s.gens), d.str());
      if (d.ideal_power > 0) {
        std::vector<Vec> gens = s.gens;
        for (const auto& v : R->ideal_power(d.ideal_power).generators()) gens.push_back(v);
        R = from_lattice(s.lift, B->p(), Lattice::from_generators(n, B->modulus(), gens), d.str());
      }
      break;
    }
  }
  auto Rm = std::const_pointer_cast<Ring>(R);
  Rm->desc_ = std::make_shared<RingDescriptor>(d);
  return R;
}

// elements -------------------------------------------------------------------

RingElement Ring::zero() const { return RingElement(this, Vec(lift_->n, 0)); }
RingElement Ring::one() const { return RingElement(this, one_); }

RingElement Ring::from_int(int64_t v) const { return scale(one(), v); }

RingElement Ring::element(const Vec& coords) const {
  Vec c(lift_->n, 0);
  for (int i = 0; i < lift_->n && i < int(coords.size()); ++i) c[i] = coords[i] % L_.modulus();
  L_.reduce(c.data());
  return RingElement(this, std::move(c));
}

RingElement Ring::from_lift(const std::vector<int64_t>& v) const {
  Vec c(lift_->n, 0);
  for (int i = 0; i < lift_->n; ++i) c[i] = mod_of(v[i], L_.modulus());
  L_.reduce(c.data());
  return RingElement(this, std::move(c));
}

RingElement Ring::var(const std::string& name) const {
  auto it = lift_->vars.find(name);
  if (it == lift_->vars.end()) throw UsageError("ring " + name_ + " has no variable '" + name + "'");
  return from_lift(it->second);
}

RingElement Ring::eval(const Expr& e) const {
  ExprOps<RingElement> ops;
  ops.from_int = [this](int64_t v) { return from_int(v); };
  ops.var = [this](const std::string& n, size_t pos) {
    if (has_var(n)) return var(n);
    if (n == "p") return from_int(p_);
    throw ParseError("unknown variable '" + n + "' for ring " + name_, pos);
  };
  ops.add = [this](const RingElement& a, const RingElement& b) { return add(a, b); };
  ops.sub = [this](const RingElement& a, const RingElement& b) { return sub(a, b); };
  ops.mul = [this](const RingElement& a, const RingElement& b) { return mul(a, b); };
  ops.neg = [this](const RingElement& a) { return neg(a); };
  ops.int_env = {{"p", int64_t(p_)}};
  return eval_expr(e, ops);
}

RingElement Ring::parse(const std::string& text) const { return eval(*parse_expr(text)); }

std::string Ring::show(const RingElement& x) const {
  std::string s;
  const auto& c = x.coords();
  for (int i = 0; i < lift_->n; ++i) {
    if (!c[i]) continue;
    const std::string& nm = lift_->names[i];
    std::string term;
    if (nm.empty()) term = std::to_string(c[i]);
    else if (c[i] == 1) term = nm;
    else term = std::to_string(c[i]) + "*" + nm;
    s += (s.empty() ? "" : "+") + term;
  }
  return s.empty() ? "0" : s;
}

void Ring::mul_raw(const uint32_t* x, const uint32_t* y, uint32_t* out) const {
  alg_.mul(x, y, out);
  L_.reduce(out);
}
void Ring::add_raw(const uint32_t* x, const uint32_t* y, uint32_t* out) const {
  alg_.add(x, y, out);
  L_.reduce(out);
}
void Ring::sub_raw(const uint32_t* x, const uint32_t* y, uint32_t* out) const {
  alg_.sub(x, y, out);
  L_.reduce(out);
}

RingElement Ring::add(const RingElement& x, const RingElement& y) const {
  Vec o(lift_->n);
  add_raw(x.coords().data(), y.coords().data(), o.data());
  return RingElement(this, std::move(o));
}
RingElement Ring::sub(const RingElement& x, const RingElement& y) const {
  Vec o(lift_->n);
  sub_raw(x.coords().data(), y.coords().data(), o.data());
  return RingElement(this, std::move(o));
}
RingElement Ring::neg(const RingElement& x) const { return sub(zero(), x); }
RingElement Ring::mul(const RingElement& x, const RingElement& y) const {
  Vec o(lift_->n);
  mul_raw(x.coords().data(), y.coords().data(), o.data());
  return RingElement(this, std::move(o));
}

RingElement Ring::pow(const RingElement& x, uint64_t e) const {
  RingElement r = one(), b = x;
  while (e) {
    if (e & 1) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}

RingElement Ring::scale(const RingElement& x, int64_t k) const {
  const uint32_t D = L_.modulus();
  const uint64_t kk = mod_of(k, D);
  Vec o(lift_->n);
  for (int i = 0; i < lift_->n; ++i) o[i] = uint32_t(kk * x.coords()[i] % D);
  L_.reduce(o.data());
  return RingElement(this, std::move(o));
}

bool Ring::is_unit(const RingElement& x) const { return !in_max_ideal(x); }

RingElement Ring::inverse(const RingElement& x) const {
  if (!is_unit(x)) throw DomainError("element " + show(x) + " is not a unit in " + name_);
  const uint64_t q = residue_order();
  const uint64_t units = order() / q * (q - 1);
  return pow(x, units - 1);
}

std::vector<RingElement> Ring::elements() const {
  const uint64_t N = order();
  if (N > (uint64_t(1) << 22)) throw EnvelopeExceeded("ring " + name_ + " too large to enumerate");
  const int n = lift_->n;
  std::vector<RingElement> out;
  out.reserve(N);
  Vec c(n, 0);
  for (uint64_t idx = 0; idx < N; ++idx) {
    out.emplace_back(this, c);
    for (int i = n - 1; i >= 0; --i) {
      if (++c[i] < L_.pivot(i)) break;
      c[i] = 0;
    }
  }
  return out;
}

std::vector<RingElement> Ring::max_ideal_generators() const {
  std::vector<RingElement> g;
  for (const auto& row : m_.generators()) {
    RingElement x = element(row);
    if (!x.is_zero()) g.push_back(x);
  }
  return g;
}

const Lattice& Ring::ideal_power(int j) const {
  if (j < 0) throw UsageError("negative ideal power");
  if (j >= int(powers_.size())) return L_;
  return powers_[j];
}

std::vector<RingElement> Ring::enumerate_ideal(int power) const {
  const Lattice& P = ideal_power(power);
  const int n = lift_->n;
  std::vector<uint32_t> bound(n);
  uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    bound[i] = L_.pivot(i) / P.pivot(i);
    total *= bound[i];
  }
  if (total > (uint64_t(1) << 22)) throw EnvelopeExceeded("ideal too large to enumerate");
  std::vector<RingElement> out;
  std::vector<uint32_t> c(n, 0);
  const uint64_t D = L_.modulus();
  for (uint64_t idx = 0; idx < total; ++idx) {
    Vec v(n, 0);
    for (int i = 0; i < n; ++i) {
      if (!c[i]) continue;
      const Vec& row = P.row(i);
      for (int j = i; j < n; ++j) v[j] = uint32_t((v[j] + uint64_t(c[i]) * row[j]) % D);
    }
    L_.reduce(v.data());
    out.emplace_back(this, std::move(v));
    for (int i = n - 1; i >= 0; --i) {
      if (++c[i] < bound[i]) break;
      c[i] = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

RingElement Ring::residue(const RingElement& x) const {
  RingPtr k = residue_field();
  Vec c = x.coords();
  for (auto& v : c) v %= p_;
  return k->element(c);
}

RingElement Ring::section(const RingElement& a) const {
  Vec c = a.coords();
  RingElement x = element(c);
  for (int i = 0; i < section_exp_; ++i) x = pow(x, p_);
  return x;
}

RingElement Ring::frobenius_inverse(const RingElement& x) const {
  RingElement y = x;
  for (int i = 1; i < r_; ++i) y = pow(y, p_);
  return y;
}

// RingElement ----------------------------------------------------------------

bool RingElement::is_zero() const {
  for (auto v : c_)
    if (v) return false;
  return true;
}
RingElement RingElement::operator+(const RingElement& o) const { return ring_->add(*this, o); }
RingElement RingElement::operator-(const RingElement& o) const { return ring_->sub(*this, o); }
RingElement RingElement::operator-() const { return ring_->neg(*this); }
RingElement RingElement::operator*(const RingElement& o) const { return ring_->mul(*this, o); }
std::string RingElement::str() const { return ring_ ? ring_->show(*this) : "<null>"; }

// UPoly ----------------------------------------------------------------------

int UPoly::degree() const {
  for (int i = int(c.size()) - 1; i >= 0; --i)
    if (!c[i].is_zero()) return i;
  return -1;
}

void UPoly::trim() {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

UPoly UPoly::operator+(const UPoly& o) const {
  UPoly r{ring, {}};
  size_t n = std::max(c.size(), o.c.size());
  for (size_t i = 0; i < n; ++i) {
    RingElement a = i < c.size() ? c[i] : ring->zero();
    RingElement b = i < o.c.size() ? o.c[i] : ring->zero();
    r.c.push_back(a + b);
  }
  r.trim();
  return r;
}

UPoly UPoly::operator-(const UPoly& o) const {
  UPoly r{ring, {}};
  size_t n = std::max(c.size(), o.c.size());
  for (size_t i = 0; i < n; ++i) {
    RingElement a = i < c.size() ? c[i] : ring->zero();
    RingElement b = i < o.c.size() ? o.c[i] : ring->zero();
    r.c.push_back(a - b);
  }
  r.trim();
  return r;
}

UPoly UPoly::operator*(const UPoly& o) const {
  UPoly r{ring, {}};
  if (c.empty() || o.c.empty()) return r;
  r.c.assign(c.size() + o.c.size() - 1, ring->zero());
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
  r.trim();
  return r;
}

UPoly UPoly::from_expr(const Ring& R, const Expr& e, const std::string& var,
                       const std::map<std::string, int64_t>& ints) {
  ExprOps<UPoly> ops;
  ops.from_int = [&R](int64_t v) {
    UPoly p{&R, {R.from_int(v)}};
    p.trim();
    return p;
  };
  ops.var = [&](const std::string& n, size_t pos) {
    if (n == var) return UPoly{&R, {R.zero(), R.one()}};
    if (R.has_var(n)) {
      UPoly p{&R, {R.var(n)}};
      p.trim();
      return p;
    }
    auto it = ints.find(n);
    if (it != ints.end()) {
      UPoly p{&R, {R.from_int(it->second)}};
      p.trim();
      return p;
    }
    throw ParseError("unknown variable '" + n + "'", pos);
  };
  ops.add = [](const UPoly& a, const UPoly& b) { return a + b; };
  ops.sub = [](const UPoly& a, const UPoly& b) { return a - b; };
  ops.mul = [](const UPoly& a, const UPoly& b) { return a * b; };
  ops.neg = [&R](const UPoly& a) { return UPoly{&R, {}} - a; };
  ops.int_env = ints;
  UPoly r = eval_expr(e, ops);
  r.ring = &R;
  return r;
}

std::string UPoly::str(const std::string& var) const {
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    if (c[i].is_zero()) continue;
    std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
    std::string cs = c[i].str();
    std::string term;
    if (mono.empty()) term = cs;
    else if (cs == "1") term = mono;
    else term = "(" + cs + ")*" + mono;
    s += (s.empty() ? "" : "+") + term;
  }
  return s.empty() ? "0" : s;
}

}  // namespace wz
