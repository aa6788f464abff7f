#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace modslope {

using Int = mpz_class;
using Rat = mpq_class;
using IntVector = std::vector<Int>;

// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  // Builds a matrix whose columns are the given vectors (all of equal length).
  static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntVector column(std::size_t j) const;
  void set_column(std::size_t j, const IntVector& v);
  IntMatrix transpose() const;
  IntMatrix columns(std::size_t begin, std::size_t end) const;

  bool operator==(const IntMatrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> a_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& x);

Int dot(const IntVector& a, const IntVector& b);

// Bareiss fraction-free determinant of a square matrix.
Int determinant(IntMatrix m);

// Rank over Q.
std::size_t rank(const IntMatrix& m);

// U * A = H with U unimodular and H in row echelon form; rows >= rank are zero.
// u_inv is maintained alongside so callers get U^{-1} without a second inversion.
struct RowEchelon {
  IntMatrix h;
  IntMatrix u;
  IntMatrix u_inv;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};
RowEchelon row_echelon(const IntMatrix& a, bool track_transform = true);

// Canonical Hermite normal form of the lattice spanned by the columns of b.
// Returns an n x rank matrix; equal lattices give equal results.
IntMatrix hnf_columns(const IntMatrix& b);

// Unimodular k x k matrix whose first column is the primitive vector v.
IntMatrix complete_to_unimodular(const IntVector& v);

// Exact solution of A x = b for A with full column rank and b in its column space;
// returns false if b is not in the Q-span.
bool solve_rational(const IntMatrix& a, const IntVector& b, std::vector<Rat>& x);

std::string to_string(const IntMatrix& m);

}  // namespace modslope
