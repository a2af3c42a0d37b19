#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace wz {

using Vec = std::vector<uint32_t>;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);
bool is_prime(uint64_t n);
// Inverse of a modulo m for gcd(a, m) = 1.
uint64_t invmod(uint64_t a, uint64_t m);

// Dense matrices over F_p, row-major. Used for the Frobenius kernels that
// locate the nilradical and for the residue-level solvers.
struct FpMatrix {
  uint32_t p = 2;
  int rows = 0, cols = 0;
  std::vector<uint32_t> a;

  FpMatrix() = default;
  FpMatrix(uint32_t p_, int r, int c) : p(p_), rows(r), cols(c), a(size_t(r) * c, 0) {}
  uint32_t& at(int i, int j) { return a[size_t(i) * cols + j]; }
  uint32_t at(int i, int j) const { return a[size_t(i) * cols + j]; }

  FpMatrix mul(const FpMatrix& o) const;
  // Row echelon form in place; returns pivot columns.
  std::vector<int> rref();
  int rank() const;
  // Basis of {x : A x = 0}.
  std::vector<Vec> kernel() const;
  // Some x with A x = b, if any.
  std::optional<Vec> solve(const Vec& b) const;
};

// Full-rank sublattice L of Z^n with D*Z^n contained in L, kept in Hermite
// normal form modulo D: row i has its pivot d_i at column i (d_i | D),
// zeros to the left and entries in [0, d_j) above each later pivot.
class Lattice {
 public:
  Lattice() = default;
  static Lattice from_generators(int n, uint32_t D, const std::vector<Vec>& gens);

  int dim() const { return n_; }
  uint32_t modulus() const { return D_; }
  uint32_t pivot(int i) const { return rows_[i][i]; }
  const Vec& row(int i) const { return rows_[i]; }
  const std::vector<Vec>& rows() const { return rows_; }

  // Canonical representative of x modulo the lattice (entries already < D).
  void reduce(uint32_t* x) const;
  Vec reduced(Vec x) const {
    reduce(x.data());
    return x;
  }
  bool contains(const Vec& x) const;
  // [Z^n : L]
  uint64_t index() const;
  bool operator==(const Lattice& o) const { return n_ == o.n_ && D_ == o.D_ && rows_ == o.rows_; }
  // Rows whose pivot is not 1; a generating set of L / D Z^n plus D e_i.
  std::vector<Vec> generators() const;
  // Same lattice read modulo a divisor D' of D (requires D' Z^n in L).
  Lattice with_modulus(uint32_t Dp) const;

 private:
  int n_ = 0;
  uint32_t D_ = 1;
  std::vector<Vec> rows_;
};

}  // namespace wz
