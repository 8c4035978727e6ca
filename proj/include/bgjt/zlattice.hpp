#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bgjt {

using Int = mpz_class;
using IntVec = std::vector<Int>;

// Dense row-major matrix of arbitrary-precision integers. Row lattices are
// the lattices generated by the rows.
class IntMat {
 public:
  IntMat() = default;
  IntMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMat identity(std::size_t n);
  static IntMat from_rows(const std::vector<IntVec>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVec row(std::size_t r) const;
  void append_row(const IntVec& v);
  IntMat operator*(const IntMat& other) const;
  bool operator==(const IntMat& other) const = default;

  // row_i += factor * row_j
  void add_row_multiple(std::size_t i, std::size_t j, const Int& factor);
  void swap_rows(std::size_t i, std::size_t j);
  void negate_row(std::size_t i);
  void add_col_multiple(std::size_t i, std::size_t j, const Int& factor);
  void swap_cols(std::size_t i, std::size_t j);
  void negate_col(std::size_t i);

  bool is_zero() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> data_;
};

// x * M for a row vector x.
IntVec row_times(const IntVec& x, const IntMat& M);
Int determinant(const IntMat& M);  // square matrices, Bareiss

struct HnfResult {
  IntMat H;  // row echelon; positive pivots; entries above pivots in [0, pivot)
  IntMat T;  // unimodular, T * M = H
  std::size_t rank = 0;
};

HnfResult hnf(const IntMat& M);

struct SnfResult {
  IntMat D;  // U * M * V, diagonal
  IntMat U, V, Vinv;
  IntVec diagonal;  // min(rows, cols) entries, d_i | d_{i+1}, zeros last
};

// Smallest-entry pivoting with row and column reduction. The transforms are
// re-verified by multiplication before returning.
SnfResult snf(const IntMat& M);

// Upper-triangular square HNF basis of rowlattice(M) + modulus * Z^n, computed
// with entries kept below the modulus.
IntMat hnf_basis_mod(const IntMat& M, const Int& modulus);

struct ModSnfResult {
  // d_0 | d_1 | ... | d_{n-1}, each a positive divisor of the modulus.
  IntVec diagonal;
  // Invertible modulo the modulus: x -> (x V)_i mod d_i is an isomorphism
  // Z^n / lattice -> (+) Z/d_i, and row i of Vinv generates summand i.
  IntMat V, Vinv;
};

// Smith form of Z^n / (rowlattice(M) + modulus * Z^n), computed over
// Z/modulus. Checked by V * Vinv = I, divisibility of M * V by the diagonal,
// and the group order against a triangular basis.
ModSnfResult snf_mod(const IntMat& M, const Int& modulus);

// Integer coefficients c with c * L = target, verified exactly; nullopt if the
// target is outside the row lattice.
std::optional<IntVec> solve_membership(const IntMat& L, const IntVec& target);

// Invariant factors of Z^ambient_dim / rowlattice(L): unit factors dropped,
// 0 for each free (infinite cyclic) factor.
IntVec quotient_invariants(const IntMat& L, std::size_t ambient_dim);

// As quotient_invariants for rowlattice(L) + modulus * Z^n.
IntVec quotient_invariants_mod(const IntMat& L, const Int& modulus);

// Invariant-factor normal form of a finite abelian group given by any list of
// cyclic orders (ones dropped). Used to compare decompositions.
IntVec canonical_invariants(const IntVec& cyclic_orders);

std::string to_string(const IntVec& v);

}  // namespace bgjt
