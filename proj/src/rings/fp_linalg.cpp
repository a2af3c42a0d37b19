#include <algorithm>

#include "wz/linalg.hpp"

namespace wz {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return uint64_t((unsigned __int128)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

uint64_t invmod(uint64_t a, uint64_t m) {
  int64_t t = 0, nt = 1;
  int64_t r = int64_t(m), nr = int64_t(a % m);
  while (nr) {
    int64_t q = r / nr;
    int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += int64_t(m);
  return uint64_t(t);
}

FpMatrix FpMatrix::mul(const FpMatrix& o) const {
  FpMatrix r(p, rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      uint64_t v = at(i, k);
      if (!v) continue;
      for (int j = 0; j < o.cols; ++j) r.at(i, j) = uint32_t((r.at(i, j) + v * o.at(k, j)) % p);
    }
  return r;
}

std::vector<int> FpMatrix::rref() {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (at(i, c)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    for (int j = 0; j < cols; ++j) std::swap(at(r, j), at(sel, j));
    uint64_t inv = invmod(at(r, c), p);
    for (int j = 0; j < cols; ++j) at(r, j) = uint32_t(at(r, j) * inv % p);
    for (int i = 0; i < rows; ++i) {
      if (i == r || !at(i, c)) continue;
      uint64_t f = at(i, c);
      for (int j = 0; j < cols; ++j)
        at(i, j) = uint32_t((at(i, j) + (p - f) * at(r, j)) % p);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

int FpMatrix::rank() const {
  FpMatrix t = *this;
  return int(t.rref().size());
}

std::vector<Vec> FpMatrix::kernel() const {
  FpMatrix t = *this;
  auto piv = t.rref();
  std::vector<bool> is_piv(cols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<Vec> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    Vec v(cols, 0);
    v[f] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = (p - t.at(int(i), f)) % p;
    basis.push_back(v);
  }
  return basis;
}

std::optional<Vec> FpMatrix::solve(const Vec& b) const {
  FpMatrix aug(p, rows, cols + 1);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols) = b[i] % p;
  }
  auto piv = aug.rref();
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  Vec x(cols, 0);
  for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug.at(int(i), cols);
  return x;
}

}  // namespace wz
