#pragma once

// Unstructured lattice engine. Bases are stored column-wise (one basis vector
// per column). Exact routines work on the integral Gram matrix; the Reducer is a
// floating-point GSO view over an exact integer basis and drives BKZ-type loops.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "modslope/error.hpp"
#include "modslope/intmat.hpp"

namespace modslope::lat {

struct Profile {
  std::vector<double> ellQ;  // ln |b*_i|
  int block = 0;             // d for K-profile aggregation, 0 if none

  std::vector<double> ellK() const;
  double sum() const;
};

class IntLattice {
 public:
  IntLattice() = default;
  explicit IntLattice(IntMatrix basis);

  const IntMatrix& basis() const { return basis_; }
  const IntMatrix& gram() const { return gram_; }
  std::size_t dimension() const { return basis_.rows(); }
  std::size_t rank() const { return basis_.cols(); }

 private:
  IntMatrix basis_;
  IntMatrix gram_;
};

struct DependencyError : DomainError {
  DependencyError(std::size_t rank, IntVector witness);
  std::size_t rank;
  IntVector witness;  // nonzero integer combination of the columns giving 0
};

struct ExactGso {
  std::vector<std::vector<Rat>> mu;  // mu[i][j], j < i
  std::vector<Rat> bstar_sq;
  Profile profile;
};

ExactGso gso(const IntLattice& L);

/// Exact LLL for any delta in (0,1). Dependent generators are removed first.
IntLattice lll(const IntLattice& L, double delta = 0.99);

/// Exact check of size reduction (|mu| <= 1/2) and the delta-Lovasz condition.
bool is_lll_reduced(const IntLattice& L, double delta);

struct ShortVector {
  IntVector vector;
  Int norm_sq;
};

inline constexpr int kDefaultEnumGuard = 46;

/// Exact shortest nonzero vector by unpruned Schnorr-Euchner enumeration.
ShortVector svp_enum(const IntLattice& L, int guard = kDefaultEnumGuard);

/// Least-squares slope of ellQ_i against i over indices (head, k - tail].
double measure_slope(const Profile& P, int head, int tail);

/// Plain text matrix in bracket style, one basis vector per row.
void write_matrix(std::ostream& os, const IntMatrix& basis);
IntMatrix read_matrix(std::istream& is);

// ---------------------------------------------------------------------------

class Reducer {
 public:
  explicit Reducer(const IntMatrix& basis);

  std::size_t rank() const { return cols_.size(); }
  std::size_t dimension() const { return n_; }
  const IntVector& column(std::size_t i) const { return cols_[i]; }
  IntMatrix basis() const;
  const Int& gram(std::size_t i, std::size_t j) const { return gram_[i][j]; }

  long double r(std::size_t i);  // |b*_i|^2
  long double mu(std::size_t i, std::size_t j);
  void refresh(std::size_t end);  // GSO rows [0, end) valid

  /// ln |b*_i| - log_scale for every i.
  Profile profile(double log_scale = 0.0);

  void add_multiple(std::size_t i, std::size_t j, const Int& x);  // b_i += x b_j
  void swap_columns(std::size_t i, std::size_t j);
  /// Columns [begin, begin + U.rows()) become (old window) * U.
  void transform_window(std::size_t begin, const IntMatrix& U);

  void size_reduce(std::size_t k, std::size_t floor = 0);
  /// LLL on columns [begin, end); size reduction also uses earlier columns.
  /// If `transform` is given it receives the window transform (old window * T = new window,
  /// modulo multiples of columns before `begin`).
  void lll(std::size_t begin, std::size_t end, double delta, IntMatrix* transform = nullptr);

  /// Coefficients x (relative to `begin`) of the shortest nonzero vector of the
  /// projected block [begin, end) with squared length < radius_sq; empty if none.
  /// With `ties` set, every coefficient vector within a relative 1e-9 of the
  /// final minimum is returned in it as well.
  std::vector<long> enumerate(std::size_t begin, std::size_t end, long double radius_sq,
                              std::vector<std::vector<long>>* ties = nullptr);

  /// Integer coordinates of v with respect to columns [0, end); throws if v is not there.
  IntVector coordinates(const IntVector& v, std::size_t end);

  struct State {
    std::vector<IntVector> cols;
    std::vector<std::vector<Int>> gram;
  };
  State save() const { return {cols_, gram_}; }
  void restore(const State& s);

  std::uint64_t enum_nodes() const { return nodes_; }

 private:
  void compute_row(std::size_t i);
  void reduce_row(std::size_t k, std::size_t floor, IntMatrix* transform, std::size_t tbegin);
  void invalidate(std::size_t from) {
    if (valid_ > from) valid_ = from;
  }

  std::size_t n_ = 0;
  std::vector<IntVector> cols_;
  std::vector<std::vector<Int>> gram_;
  std::vector<std::vector<long double>> mu_;
  std::vector<std::vector<long double>> rij_;
  std::vector<long double> r_;
  std::size_t valid_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace modslope::lat
