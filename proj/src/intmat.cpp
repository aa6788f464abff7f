#include "modslope/intmat.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "modslope/error.hpp"

namespace modslope {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& cols, std::size_t rows) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return m;
}

IntVector IntMatrix::column(std::size_t j) const {
  IntVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void IntMatrix::set_column(std::size_t j, const IntVector& v) {
  if (v.size() != rows_) throw InternalError("set_column: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::columns(std::size_t begin, std::size_t end) const {
  IntMatrix m(rows_, end - begin);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = begin; j < end; ++j) m(i, j - begin) = (*this)(i, j);
  return m;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InternalError("matrix product: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  Int t;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), b(k, j).get_mpz_t());
      }
    }
  return c;
}

IntVector operator*(const IntMatrix& a, const IntVector& x) {
  if (a.cols() != x.size()) throw InternalError("matrix-vector product: shape mismatch");
  IntVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (x[k] != 0) mpz_addmul(y[i].get_mpz_t(), a(i, k).get_mpz_t(), x[k].get_mpz_t());
  return y;
}

Int dot(const IntVector& a, const IntVector& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
  return s;
}

Int determinant(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw DomainError("determinant: matrix is not square");
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

namespace {

// row_t <- row_t - q * row_p, mirrored on the transforms.
void sub_row(IntMatrix& h, IntMatrix* u, IntMatrix* u_inv, std::size_t t, std::size_t p, const Int& q) {
  if (q == 0) return;
  for (std::size_t k = 0; k < h.cols(); ++k) mpz_submul(h(t, k).get_mpz_t(), q.get_mpz_t(), h(p, k).get_mpz_t());
  if (u)
    for (std::size_t k = 0; k < u->cols(); ++k) mpz_submul((*u)(t, k).get_mpz_t(), q.get_mpz_t(), (*u)(p, k).get_mpz_t());
  if (u_inv)
    for (std::size_t k = 0; k < u_inv->rows(); ++k)
      mpz_addmul((*u_inv)(k, p).get_mpz_t(), q.get_mpz_t(), (*u_inv)(k, t).get_mpz_t());
}

void swap_rows(IntMatrix& h, IntMatrix* u, IntMatrix* u_inv, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < h.cols(); ++k) std::swap(h(i, k), h(j, k));
  if (u)
    for (std::size_t k = 0; k < u->cols(); ++k) std::swap((*u)(i, k), (*u)(j, k));
  if (u_inv)
    for (std::size_t k = 0; k < u_inv->rows(); ++k) std::swap((*u_inv)(k, i), (*u_inv)(k, j));
}

void negate_row(IntMatrix& h, IntMatrix* u, IntMatrix* u_inv, std::size_t i) {
  for (std::size_t k = 0; k < h.cols(); ++k) h(i, k) = -h(i, k);
  if (u)
    for (std::size_t k = 0; k < u->cols(); ++k) (*u)(i, k) = -(*u)(i, k);
  if (u_inv)
    for (std::size_t k = 0; k < u_inv->rows(); ++k) (*u_inv)(k, i) = -(*u_inv)(k, i);
}

}  // namespace

RowEchelon row_echelon(const IntMatrix& a, bool track_transform) {
  RowEchelon out;
  out.h = a;
  const std::size_t m = a.rows();
  if (track_transform) {
    out.u = IntMatrix::identity(m);
    out.u_inv = IntMatrix::identity(m);
  }
  IntMatrix* u = track_transform ? &out.u : nullptr;
  IntMatrix* ui = track_transform ? &out.u_inv : nullptr;
  IntMatrix& h = out.h;

  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < m; ++col) {
    // Euclid across rows r..m-1 in this column: repeatedly reduce by the smallest entry.
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i) {
        if (h(i, col) == 0) continue;
        if (best == m || abs(h(i, col)) < abs(h(best, col))) best = i;
      }
      if (best == m) break;
      swap_rows(h, u, ui, r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, col) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(r, col).get_mpz_t());
        sub_row(h, u, ui, i, r, q);
        if (h(i, col) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, col) == 0) continue;
    if (h(r, col) < 0) negate_row(h, u, ui, r);
    // Reduce the rows above into [0, pivot) to keep entries bounded.
    for (std::size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(r, col).get_mpz_t());
      sub_row(h, u, ui, i, r, q);
    }
    out.pivot_cols.push_back(col);
    ++r;
  }
  out.rank = r;
  return out;
}

std::size_t rank(const IntMatrix& m) { return row_echelon(m, false).rank; }

IntMatrix hnf_columns(const IntMatrix& b) {
  RowEchelon e = row_echelon(b.transpose(), false);
  IntMatrix out(b.rows(), e.rank);
  for (std::size_t j = 0; j < e.rank; ++j)
    for (std::size_t i = 0; i < b.rows(); ++i) out(i, j) = e.h(j, i);
  return out;
}

IntMatrix complete_to_unimodular(const IntVector& v) {
  IntMatrix col(v.size(), 1);
  col.set_column(0, v);
  RowEchelon e = row_echelon(col, true);
  if (e.rank != 1 || e.h(0, 0) != 1) throw DomainError("complete_to_unimodular: vector is not primitive");
  return e.u_inv;
}

bool solve_rational(const IntMatrix& a, const IntVector& b, std::vector<Rat>& x) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::vector<Rat>> aug(m, std::vector<Rat>(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a(i, j);
    aug[i][n] = b[i];
  }
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && aug[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(aug[p], aug[r]);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || aug[i][c] == 0) continue;
      Rat f = aug[i][c] / aug[r][c];
      for (std::size_t j = c; j <= n; ++j) aug[i][j] -= f * aug[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (aug[i][n] != 0) return false;
  if (r != n) throw DomainError("solve_rational: matrix does not have full column rank");
  x.assign(n, Rat(0));
  for (std::size_t i = 0; i < r; ++i) {
    x[piv[i]] = aug[i][n] / aug[i][piv[i]];
    x[piv[i]].canonicalize();
  }
  return true;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j).get_str();
    os << ']' << (i + 1 < m.rows() ? "\n" : "");
  }
  os << ']';
  return os.str();
}

}  // namespace modslope
