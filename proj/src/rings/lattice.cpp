#include <cassert>
#include <numeric>

#include "wz/errors.hpp"
#include "wz/linalg.hpp"

namespace wz {

namespace {

int64_t ext_gcd(int64_t a, int64_t b, int64_t& x, int64_t& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  int64_t x1, y1;
  int64_t g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

uint32_t md(int64_t v, int64_t D) {
  v %= D;
  if (v < 0) v += D;
  return uint32_t(v);
}

}  // namespace

Lattice Lattice::from_generators(int n, uint32_t D, const std::vector<Vec>& gens) {
  Lattice L;
  L.n_ = n;
  L.D_ = D;
  L.rows_.assign(n, Vec(n, 0));
  const int64_t DD = D;
  std::vector<std::vector<int64_t>> pool;
  for (const auto& g : gens) {
    std::vector<int64_t> r(n);
    bool nz = false;
    for (int j = 0; j < n; ++j) {
      r[j] = md(g[j], DD);
      nz |= r[j] != 0;
    }
    if (nz) pool.push_back(std::move(r));
  }
  for (int i = 0; i < n; ++i) {
    // pivot row starts as D*e_i
    std::vector<int64_t> h(n, 0);
    int64_t g = DD;
    for (auto& r : pool) {
      if (r[i] == 0) continue;
      int64_t u, v;
      int64_t gp = ext_gcd(g, r[i], u, v);
      if (gp < 0) {
        gp = -gp;
        u = -u;
        v = -v;
      }
      std::vector<int64_t> nh(n), nr(n);
      const int64_t a = r[i] / gp, b = g / gp;
      for (int j = i + 1; j < n; ++j) {
        nh[j] = md((__int128)u * h[j] % DD + (__int128)v * r[j] % DD, DD);
        nr[j] = md((__int128)a * h[j] % DD - (__int128)b * r[j] % DD, DD);
      }
      nh[i] = gp;
      nr[i] = 0;
      h = std::move(nh);
      r = std::move(nr);
      g = gp;
    }
    // (D/g) * h lies in L and vanishes at column i
    std::vector<int64_t> sat(n, 0);
    bool nz = false;
    for (int j = i + 1; j < n; ++j) {
      sat[j] = md((DD / g) * h[j], DD);
      nz |= sat[j] != 0;
    }
    if (nz) pool.push_back(std::move(sat));
    for (int j = 0; j < n; ++j) L.rows_[i][j] = uint32_t(j == i ? g : (j > i ? h[j] : 0));
    // drop rows that became zero
    std::vector<std::vector<int64_t>> keep;
    for (auto& r : pool) {
      bool any = false;
      for (int j = i + 1; j < n; ++j) any |= r[j] != 0;
      if (any) keep.push_back(std::move(r));
    }
    pool = std::move(keep);
  }
  // back-reduce entries above each pivot
  for (int i = 0; i < n; ++i) {
    const int64_t d = L.rows_[i][i];
    for (int r = 0; r < i; ++r) {
      int64_t q = L.rows_[r][i] / d;
      if (q == 0) continue;
      for (int j = i; j < n; ++j) {
        int64_t sub = (j == i) ? q * d : q * int64_t(L.rows_[i][j]);
        L.rows_[r][j] = md(int64_t(L.rows_[r][j]) - sub % DD, DD);
      }
    }
  }
  return L;
}

void Lattice::reduce(uint32_t* x) const {
  const uint64_t D = D_;
  for (int i = 0; i < n_; ++i) {
    const uint32_t d = rows_[i][i];
    const uint32_t q = x[i] / d;
    if (q == 0) continue;
    x[i] -= q * d;
    const Vec& r = rows_[i];
    for (int j = i + 1; j < n_; ++j) {
      uint64_t s = (uint64_t(q) * r[j]) % D;
      x[j] = uint32_t((x[j] + D - s) % D);
    }
  }
}

bool Lattice::contains(const Vec& x) const {
  Vec y = x;
  for (auto& v : y) v %= D_;
  reduce(y.data());
  for (auto v : y)
    if (v) return false;
  return true;
}

uint64_t Lattice::index() const {
  unsigned __int128 r = 1;
  for (int i = 0; i < n_; ++i) {
    r *= rows_[i][i];
    if (r > (unsigned __int128)(~uint64_t(0))) throw EnvelopeExceeded("ring order exceeds 2^64");
  }
  return uint64_t(r);
}

std::vector<Vec> Lattice::generators() const {
  std::vector<Vec> g;
  for (int i = 0; i < n_; ++i) {
    Vec r = rows_[i];
    for (auto& v : r) v %= D_;
    bool nz = false;
    for (auto v : r) nz |= v != 0;
    if (nz) g.push_back(std::move(r));
  }
  return g;
}

Lattice Lattice::with_modulus(uint32_t Dp) const {
  std::vector<Vec> g;
  for (int i = 0; i < n_; ++i) {
    Vec r = rows_[i];
    for (auto& v : r) v %= Dp;
    g.push_back(std::move(r));
  }
  return from_generators(n_, Dp, g);
}

}  // namespace wz
