#include "modslope/latred.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace modslope::lat {

namespace {

long double to_ld(const Int& x) {
  if (mpz_fits_slong_p(x.get_mpz_t())) return static_cast<long double>(mpz_get_si(x.get_mpz_t()));
  long e = 0;
  const double m = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::ldexp(static_cast<long double>(m), static_cast<int>(e));
}

double log_rat(const Rat& q) {
  long en = 0, ed = 0;
  const double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  const double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log(mn / md) + static_cast<double>(en - ed) * std::log(2.0);
}

Int round_div(const Int& a, const Int& b) {  // nearest integer to a/b, b > 0
  Int num = 2 * a + b, den = 2 * b, q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

IntMatrix gram_of(const IntMatrix& b) {
  const std::size_t k = b.cols();
  std::vector<IntVector> cols(k);
  for (std::size_t j = 0; j < k; ++j) cols[j] = b.column(j);
  IntMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j <= i; ++j) g(i, j) = g(j, i) = dot(cols[i], cols[j]);
  return g;
}

// Integral Gram-Schmidt data: D[0] = 1, D[i+1] = det of the leading (i+1) Gram minor,
// lambda[i][j] = D[j+1] mu[i][j].
struct IntegralGso {
  std::vector<Int> D;
  std::vector<std::vector<Int>> lambda;
};

// Returns false (and the failing index) if the columns are dependent.
bool integral_gso(const IntMatrix& g, IntegralGso& out, std::size_t& bad) {
  const std::size_t k = g.rows();
  out.D.assign(k + 1, Int(0));
  out.D[0] = 1;
  out.lambda.assign(k, std::vector<Int>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Int u = g(i, j);
      for (std::size_t l = 0; l < j; ++l) {
        u = out.D[l + 1] * u - out.lambda[i][l] * out.lambda[j][l];
        mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), out.D[l].get_mpz_t());
      }
      if (j < i)
        out.lambda[i][j] = u;
      else
        out.D[i + 1] = u;
    }
    if (out.D[i + 1] == 0) {
      bad = i;
      return false;
    }
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> Profile::ellK() const {
  if (block <= 0 || ellQ.size() % block != 0) throw DomainError("ellK: profile length is not a multiple of the block size");
  std::vector<double> out(ellQ.size() / block, 0.0);
  for (std::size_t i = 0; i < ellQ.size(); ++i) out[i / block] += ellQ[i];
  return out;
}

double Profile::sum() const {
  double s = 0.0;
  for (double v : ellQ) s += v;
  return s;
}

IntLattice::IntLattice(IntMatrix basis) : basis_(std::move(basis)), gram_(gram_of(basis_)) {}

DependencyError::DependencyError(std::size_t r, IntVector w)
    : DomainError("basis columns are linearly dependent (rank " + std::to_string(r) + ")"),
      rank(r),
      witness(std::move(w)) {}

ExactGso gso(const IntLattice& L) {
  IntegralGso ig;
  std::size_t bad = 0;
  if (!integral_gso(L.gram(), ig, bad)) {
    const RowEchelon e = row_echelon(L.basis().transpose(), true);
    IntVector w(L.rank());
    for (std::size_t j = 0; j < L.rank(); ++j) w[j] = e.u(e.rank, j);
    throw DependencyError(e.rank, w);
  }
  const std::size_t k = L.rank();
  ExactGso out;
  out.mu.assign(k, {});
  out.bstar_sq.resize(k);
  out.profile.ellQ.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.mu[i].resize(i);
    for (std::size_t j = 0; j < i; ++j) {
      out.mu[i][j] = Rat(ig.lambda[i][j], ig.D[j + 1]);
      out.mu[i][j].canonicalize();
    }
    out.bstar_sq[i] = Rat(ig.D[i + 1], ig.D[i]);
    out.bstar_sq[i].canonicalize();
    out.profile.ellQ[i] = 0.5 * log_rat(out.bstar_sq[i]);
  }
  return out;
}

IntLattice lll(const IntLattice& L, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("lll: delta must lie in (0, 1)");
  IntMatrix b = L.basis();
  if (b.cols() == 0) return L;
  if (modslope::rank(b) < b.cols()) b = hnf_columns(b);
  const std::size_t k = b.cols(), n = b.rows();
  std::vector<IntVector> cols(k);
  for (std::size_t j = 0; j < k; ++j) cols[j] = b.column(j);
  IntMatrix g = gram_of(b);
  IntegralGso ig;
  std::size_t bad = 0;
  if (!integral_gso(g, ig, bad)) throw InternalError("lll: dependency survived elimination");
  auto& D = ig.D;
  auto& lam = ig.lambda;
  const Rat dq(delta);
  const Int dnum = dq.get_num(), dden = dq.get_den();

  auto reduce = [&](std::size_t kk, std::size_t l) {
    Int twice = 2 * lam[kk][l];
    if (abs(twice) <= D[l + 1]) return;
    const Int q = round_div(lam[kk][l], D[l + 1]);
    for (std::size_t t = 0; t < n; ++t) mpz_submul(cols[kk][t].get_mpz_t(), q.get_mpz_t(), cols[l][t].get_mpz_t());
    lam[kk][l] -= q * D[l + 1];
    for (std::size_t i = 0; i < l; ++i) lam[kk][i] -= q * lam[l][i];
  };
  auto swap_step = [&](std::size_t kk) {
    std::swap(cols[kk], cols[kk - 1]);
    for (std::size_t j = 0; j + 1 < kk; ++j) std::swap(lam[kk][j], lam[kk - 1][j]);
    const Int l = lam[kk][kk - 1];
    Int B = D[kk - 1] * D[kk + 1] + l * l;
    mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), D[kk].get_mpz_t());
    for (std::size_t i = kk + 1; i < k; ++i) {
      const Int t = lam[i][kk];
      Int a = D[kk + 1] * lam[i][kk - 1] - l * t;
      mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), D[kk].get_mpz_t());
      lam[i][kk] = a;
      Int c = B * t + l * lam[i][kk];
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), D[kk + 1].get_mpz_t());
      lam[i][kk - 1] = c;
    }
    D[kk] = B;
  };

  std::size_t kk = 1;
  while (kk < k) {
    reduce(kk, kk - 1);
    // swap iff D[k+1] D[k-1] < delta D[k]^2 - lambda^2, scaled by the denominator of delta
    const Int lhs = dden * D[kk + 1] * D[kk - 1];
    const Int rhs = dnum * D[kk] * D[kk] - dden * lam[kk][kk - 1] * lam[kk][kk - 1];
    if (lhs < rhs) {
      swap_step(kk);
      if (kk > 1) --kk;
    } else {
      for (std::size_t l = kk - 1; l-- > 0;) reduce(kk, l);
      ++kk;
    }
  }
  return IntLattice(IntMatrix::from_columns(cols, n));
}

bool is_lll_reduced(const IntLattice& L, double delta) {
  IntegralGso ig;
  std::size_t bad = 0;
  if (!integral_gso(L.gram(), ig, bad)) return false;
  const Rat dq(delta);
  const std::size_t k = L.rank();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (2 * abs(ig.lambda[i][j]) > ig.D[j + 1]) return false;
  for (std::size_t i = 1; i < k; ++i) {
    const Int lhs = dq.get_den() * ig.D[i + 1] * ig.D[i - 1];
    const Int rhs = dq.get_num() * ig.D[i] * ig.D[i] - dq.get_den() * ig.lambda[i][i - 1] * ig.lambda[i][i - 1];
    if (lhs < rhs) return false;
  }
  return true;
}

ShortVector svp_enum(const IntLattice& L, int guard) {
  if (static_cast<long>(L.rank()) > guard)
    throw GuardError("svp_enum: rank " + std::to_string(L.rank()) + " exceeds the enumeration guard " +
                     std::to_string(guard) + "; reduce the dimension or raise the guard explicitly");
  if (L.rank() == 0) throw DomainError("svp_enum: empty lattice");
  const IntLattice red = lll(L, 0.99);
  Reducer R(red.basis());
  const std::size_t k = R.rank();
  std::vector<std::vector<long>> ties;
  const long double radius = R.r(0) * (1.0L + 1e-6L);
  std::vector<long> x = R.enumerate(0, k, radius, &ties);
  if (x.empty()) throw InternalError("svp_enum: enumeration found no vector within |b_1|");
  ShortVector best;
  bool have = false;
  for (const auto& cand : ties) {
    IntVector v(R.dimension());
    for (std::size_t j = 0; j < k; ++j) {
      if (cand[j] == 0) continue;
      const Int c = cand[j];
      for (std::size_t t = 0; t < v.size(); ++t) mpz_addmul(v[t].get_mpz_t(), c.get_mpz_t(), R.column(j)[t].get_mpz_t());
    }
    const Int nsq = dot(v, v);
    if (!have || nsq < best.norm_sq) {
      best.vector = std::move(v);
      best.norm_sq = nsq;
      have = true;
    }
  }
  return best;
}

double measure_slope(const Profile& P, int head, int tail) {
  const int k = static_cast<int>(P.ellQ.size());
  if (head < 0 || tail < 0 || k - head - tail < 8)
    throw DomainError("measure_slope: fewer than 8 profile indices remain after excluding head and tail");
  const int lo = head, hi = k - tail;  // 0-based [lo, hi)
  const double m = hi - lo;
  double sx = 0, sy = 0;
  for (int i = lo; i < hi; ++i) {
    sx += i;
    sy += P.ellQ[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0, sxx = 0;
  for (int i = lo; i < hi; ++i) {
    sxy += (i - mx) * (P.ellQ[i] - my);
    sxx += (i - mx) * (i - mx);
  }
  return sxy / sxx;
}

void write_matrix(std::ostream& os, const IntMatrix& basis) {
  os << '[';
  for (std::size_t j = 0; j < basis.cols(); ++j) {
    os << '[';
    for (std::size_t i = 0; i < basis.rows(); ++i) os << (i ? " " : "") << basis(i, j).get_str();
    os << "]\n";
  }
  os << "]\n";
}

IntMatrix read_matrix(std::istream& is) {
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  std::vector<IntVector> rows;
  int depth = 0;
  std::string tok;
  IntVector cur;
  auto flush = [&]() {
    if (tok.empty()) return;
    Int v;
    if (v.set_str(tok, 10) != 0) throw DomainError("read_matrix: bad integer '" + tok + "'");
    cur.push_back(v);
    tok.clear();
  };
  for (char ch : text) {
    if (ch == '[') {
      ++depth;
      if (depth > 2) throw DomainError("read_matrix: nesting too deep");
      if (depth == 2) cur.clear();
    } else if (ch == ']') {
      flush();
      if (depth == 2) rows.push_back(cur);
      --depth;
      if (depth < 0) throw DomainError("read_matrix: unbalanced brackets");
    } else if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      flush();
    } else if (depth == 2) {
      tok.push_back(ch);
    } else {
      throw DomainError("read_matrix: unexpected character outside a row");
    }
  }
  if (depth != 0) throw DomainError("read_matrix: unbalanced brackets");
  if (rows.empty()) return IntMatrix();
  const std::size_t n = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != n) throw DomainError("read_matrix: rows of unequal length");
  return IntMatrix::from_columns(rows, n);
}

// ---------------------------------------------------------------------------
// Reducer

Reducer::Reducer(const IntMatrix& basis) : n_(basis.rows()) {
  const std::size_t k = basis.cols();
  cols_.resize(k);
  for (std::size_t j = 0; j < k; ++j) cols_[j] = basis.column(j);
  gram_.assign(k, std::vector<Int>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j <= i; ++j) gram_[i][j] = gram_[j][i] = dot(cols_[i], cols_[j]);
  mu_.assign(k, std::vector<long double>(k, 0.0L));
  rij_.assign(k, std::vector<long double>(k, 0.0L));
  r_.assign(k, 0.0L);
}

IntMatrix Reducer::basis() const { return IntMatrix::from_columns(cols_, n_); }

void Reducer::compute_row(std::size_t i) {
  for (std::size_t j = 0; j <= i; ++j) {
    long double v = to_ld(gram_[i][j]);
    for (std::size_t l = 0; l < j; ++l) v -= mu_[j][l] * rij_[i][l];
    rij_[i][j] = v;
    if (j < i)
      mu_[i][j] = v / r_[j];
    else
      r_[i] = v;
  }
  if (!(r_[i] > 0.0L)) throw InternalError("Reducer: non-positive Gram-Schmidt norm (dependent basis?)");
}

void Reducer::refresh(std::size_t end) {
  for (; valid_ < end; ++valid_) compute_row(valid_);
}

long double Reducer::r(std::size_t i) {
  refresh(i + 1);
  return r_[i];
}

long double Reducer::mu(std::size_t i, std::size_t j) {
  refresh(i + 1);
  return mu_[i][j];
}

Profile Reducer::profile(double log_scale) {
  refresh(rank());
  Profile p;
  p.ellQ.resize(rank());
  for (std::size_t i = 0; i < rank(); ++i) p.ellQ[i] = static_cast<double>(0.5L * std::log(r_[i])) - log_scale;
  return p;
}

void Reducer::add_multiple(std::size_t i, std::size_t j, const Int& x) {
  if (x == 0) return;
  auto& bi = cols_[i];
  const auto& bj = cols_[j];
  for (std::size_t t = 0; t < n_; ++t) mpz_addmul(bi[t].get_mpz_t(), x.get_mpz_t(), bj[t].get_mpz_t());
  // G_ii += 2x G_ij + x^2 G_jj, then row/column i += x row j
  Int gii = gram_[i][i] + 2 * x * gram_[i][j] + x * x * gram_[j][j];
  for (std::size_t l = 0; l < rank(); ++l) {
    if (l == i) continue;
    mpz_addmul(gram_[i][l].get_mpz_t(), x.get_mpz_t(), gram_[j][l].get_mpz_t());
    gram_[l][i] = gram_[i][l];
  }
  gram_[i][i] = gii;
  if (j < i) {
    // only row i of the GSO changes
    if (valid_ > i) compute_row(i);
  } else {
    invalidate(i);
  }
}

void Reducer::swap_columns(std::size_t i, std::size_t j) {
  if (i == j) return;
  std::swap(cols_[i], cols_[j]);
  std::swap(gram_[i], gram_[j]);
  for (auto& row : gram_) std::swap(row[i], row[j]);
  invalidate(std::min(i, j));
}

void Reducer::transform_window(std::size_t begin, const IntMatrix& U) {
  const std::size_t k = U.rows(), total = rank();
  if (U.cols() != k || begin + k > total) throw InternalError("transform_window: bad window");
  std::vector<IntVector> fresh(k, IntVector(n_));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      if (U(a, b) == 0) continue;
      for (std::size_t t = 0; t < n_; ++t)
        mpz_addmul(fresh[b][t].get_mpz_t(), U(a, b).get_mpz_t(), cols_[begin + a][t].get_mpz_t());
    }
  // A = G[:, window] * U
  std::vector<std::vector<Int>> A(total, std::vector<Int>(k));
  for (std::size_t row = 0; row < total; ++row)
    for (std::size_t a = 0; a < k; ++a) {
      const Int& g = gram_[row][begin + a];
      if (g == 0) continue;
      for (std::size_t b = 0; b < k; ++b)
        if (U(a, b) != 0) mpz_addmul(A[row][b].get_mpz_t(), g.get_mpz_t(), U(a, b).get_mpz_t());
    }
  for (std::size_t row = 0; row < total; ++row) {
    if (row >= begin && row < begin + k) continue;
    for (std::size_t b = 0; b < k; ++b) gram_[row][begin + b] = gram_[begin + b][row] = A[row][b];
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      Int s = 0;
      for (std::size_t t = 0; t < k; ++t)
        if (U(t, a) != 0) mpz_addmul(s.get_mpz_t(), U(t, a).get_mpz_t(), A[begin + t][b].get_mpz_t());
      gram_[begin + a][begin + b] = s;
    }
  for (std::size_t a = 0; a < k; ++a) cols_[begin + a] = std::move(fresh[a]);
  invalidate(begin);
}

void Reducer::restore(const State& s) {
  cols_ = s.cols;
  gram_ = s.gram;
  valid_ = 0;
}

void Reducer::reduce_row(std::size_t k, std::size_t floor, IntMatrix* transform, std::size_t tbegin) {
  refresh(k);
  for (int iter = 0; iter < 64; ++iter) {
    compute_row(k);
    bool changed = false;
    for (std::size_t j = k; j-- > floor;) {
      const long double m = mu_[k][j];
      if (std::fabs(m) <= 0.51L) continue;
      const long double xr = std::nearbyint(m);
      Int negx;
      if (std::fabs(xr) < 9e18L)
        negx = -static_cast<long>(xr);
      else
        mpz_set_d(negx.get_mpz_t(), -static_cast<double>(xr));
      auto& bk = cols_[k];
      const auto& bj = cols_[j];
      for (std::size_t t = 0; t < n_; ++t) mpz_addmul(bk[t].get_mpz_t(), negx.get_mpz_t(), bj[t].get_mpz_t());
      Int gkk = gram_[k][k] + 2 * negx * gram_[k][j] + negx * negx * gram_[j][j];
      for (std::size_t l = 0; l < rank(); ++l) {
        if (l == k) continue;
        mpz_addmul(gram_[k][l].get_mpz_t(), negx.get_mpz_t(), gram_[j][l].get_mpz_t());
        gram_[l][k] = gram_[k][l];
      }
      gram_[k][k] = gkk;
      if (transform && j >= tbegin) {
        const std::size_t w = transform->rows();
        for (std::size_t t = 0; t < w; ++t)
          mpz_addmul((*transform)(t, k - tbegin).get_mpz_t(), negx.get_mpz_t(), (*transform)(t, j - tbegin).get_mpz_t());
      }
      for (std::size_t l = 0; l < j; ++l) mu_[k][l] -= xr * mu_[j][l];
      mu_[k][j] -= xr;
      changed = true;
    }
    if (!changed) break;
  }
  compute_row(k);
  valid_ = k + 1;
}

void Reducer::size_reduce(std::size_t k, std::size_t floor) { reduce_row(k, floor, nullptr, 0); }

void Reducer::lll(std::size_t begin, std::size_t end, double delta, IntMatrix* transform) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("lll: delta must lie in (0, 1)");
  if (end > rank() || begin >= end) return;
  const std::size_t w = end - begin;
  if (transform) *transform = IntMatrix::identity(w);
  std::size_t k = begin;
  while (k < end) {
    reduce_row(k, 0, transform, begin);
    if (k > begin) {
      const long double m = mu_[k][k - 1];
      if (r_[k] < (static_cast<long double>(delta) - m * m) * r_[k - 1]) {
        swap_columns(k - 1, k);
        if (transform)
          for (std::size_t t = 0; t < w; ++t) std::swap((*transform)(t, k - 1 - begin), (*transform)(t, k - begin));
        --k;
        continue;
      }
    }
    ++k;
  }
  invalidate(end);
}

std::vector<long> Reducer::enumerate(std::size_t begin, std::size_t end, long double radius_sq,
                                     std::vector<std::vector<long>>* ties) {
  refresh(end);
  const std::size_t n = end - begin;
  std::vector<long> best;
  if (n == 0) return best;
  std::vector<std::vector<double>> mu(n, std::vector<double>(n, 0.0));
  std::vector<double> rr(n);
  for (std::size_t i = 0; i < n; ++i) {
    rr[i] = static_cast<double>(r_[begin + i]);
    for (std::size_t j = 0; j < i; ++j) mu[i][j] = static_cast<double>(mu_[begin + i][begin + j]);
  }
  std::vector<double> v(n, 0.0), c(n, 0.0), w(n, 0.0), rho(n + 1, 0.0);
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n + 1, 0.0));
  std::vector<std::size_t> hi(n);
  for (std::size_t k = 0; k < n; ++k) hi[k] = n - 1;
  auto mark = [&](std::size_t k) {
    if (k > 0 && hi[k - 1] < k) hi[k - 1] = k;
  };
  constexpr double kTieSlack = 1e-9;
  double R2 = static_cast<double>(radius_sq);
  double best_rho = 0.0;
  std::vector<std::pair<double, std::vector<long>>> found;

  v[0] = 1.0;
  std::size_t last_nonzero = 0;
  std::size_t k = 0;
  while (true) {
    const double diff = v[k] - c[k];
    rho[k] = rho[k + 1] + diff * diff * rr[k];
    ++nodes_;
    bool go_up = false;
    if (rho[k] < R2) {
      if (k == 0) {
        std::vector<long> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<long>(v[i]);
        if (best.empty() || rho[0] < best_rho) {
          best = x;
          best_rho = rho[0];
        }
        if (ties) {
          found.emplace_back(rho[0], std::move(x));
          R2 = best_rho * (1.0 + kTieSlack);
        } else {
          R2 = best_rho;
        }
      } else {
        --k;
        if (k > 0 && hi[k - 1] < hi[k]) hi[k - 1] = hi[k];
        for (std::size_t i = hi[k]; i > k; --i) sigma[k][i] = sigma[k][i + 1] + v[i] * mu[i][k];
        hi[k] = k;
        c[k] = -sigma[k][k + 1];
        v[k] = std::nearbyint(c[k]);
        w[k] = 1.0;
        mark(k);
        continue;
      }
    } else {
      go_up = true;
    }
    if (go_up) {
      ++k;
      if (k == n) break;
    }
    if (k >= last_nonzero) {
      last_nonzero = k;
      v[k] += 1.0;
    } else {
      if (v[k] > c[k])
        v[k] -= w[k];
      else
        v[k] += w[k];
      w[k] += 1.0;
    }
    mark(k);
  }
  if (ties) {
    ties->clear();
    for (auto& [val, x] : found)
      if (val <= best_rho * (1.0 + kTieSlack)) ties->push_back(std::move(x));
  }
  return best;
}

IntVector Reducer::coordinates(const IntVector& v, std::size_t end) {
  refresh(end);
  std::vector<long double> y(end), z(end);
  for (std::size_t l = 0; l < end; ++l) {
    long double s = to_ld(dot(v, cols_[l]));
    for (std::size_t j = 0; j < l; ++j) s -= mu_[l][j] * y[j];
    y[l] = s;
  }
  for (std::size_t l = end; l-- > 0;) {
    long double s = y[l] / r_[l];
    for (std::size_t j = l + 1; j < end; ++j) s -= mu_[j][l] * z[j];
    z[l] = s;
  }
  IntVector x(end);
  IntVector check(n_);
  for (std::size_t l = 0; l < end; ++l) {
    const long double zr = std::nearbyint(z[l]);
    if (std::fabs(zr) < 9e18L)
      x[l] = static_cast<long>(zr);
    else
      mpz_set_d(x[l].get_mpz_t(), static_cast<double>(zr));
    if (x[l] == 0) continue;
    for (std::size_t t = 0; t < n_; ++t) mpz_addmul(check[t].get_mpz_t(), x[l].get_mpz_t(), cols_[l][t].get_mpz_t());
  }
  if (check == v) return x;
  std::vector<Rat> q;
  IntMatrix prefix = IntMatrix::from_columns(std::vector<IntVector>(cols_.begin(), cols_.begin() + end), n_);
  if (!solve_rational(prefix, v, q)) throw DomainError("coordinates: vector is not in the span of the basis prefix");
  for (std::size_t l = 0; l < end; ++l) {
    if (q[l].get_den() != 1) throw DomainError("coordinates: vector is not in the lattice");
    x[l] = q[l].get_num();
  }
  return x;
}

}  // namespace modslope::lat
