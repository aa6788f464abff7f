#pragma once

// Module-BKZ over cyclotomic fields on restructured Z-bases, and classical BKZ
// as its d = 1 case (same insertion and repair code).

#include <cstdint>
#include <string>
#include <vector>

#include "modslope/cyclembed.hpp"
#include "modslope/latred.hpp"

namespace modslope::mbkz {

struct StructureRepairError : std::runtime_error {
  StructureRepairError(const std::string& what, std::size_t position, std::size_t window);
  std::size_t position;
  std::size_t window;
};

struct ModuleBasis {
  embed::CyclicEmbedding embedding;
  int rank = 0;                  // r
  IntMatrix zbasis;              // (r c) x (r d), r blocks of d columns
  std::vector<Rat> ideal_norms;  // N(I_i) per block, all <= 1

  int degree() const { return embedding.field.degree; }
  long conductor() const { return embedding.field.conductor; }
};

/// {x in O_K^r : A x = 0 mod q O_K} with A = [I_k | H], H uniform mod q from the seed.
ModuleBasis generate_qary_module(const cyclo::CyclotomicField& K, int r, int k, const Int& q, std::uint64_t seed);

/// Same module from an explicit k x (r-k) matrix H over O_K/q.
ModuleBasis qary_module_from(const cyclo::CyclotomicField& K, int r, const std::vector<std::vector<cyclo::RingElement>>& H,
                             const Int& q);

/// ln det_Q of the module in trace geometry (embedding scale removed).
double log_det(const ModuleBasis& M);

struct Saturation {
  IntMatrix coords;     // k x d: Z-basis of the saturation in block coordinates, first column = v / content(v)
  Rat ideal_norm;       // N(I) = 1/[vK cap block : v O_K]
  IntMatrix transform;  // k x k unimodular, first d columns = coords
};

/// Saturation of v (given by its block coordinates) inside a lattice closed
/// under multiplication by w, from the coordinates of w^t v for t < d.
Saturation saturate_coords(const std::vector<IntVector>& orbit_coords, const IntVector& v_coords);

struct SaturationResult {
  IntMatrix basis;  // ambient columns: Z-basis of vK cap L, first column v divided by its content
  Rat ideal_norm;
};

/// Saturation of v inside the module lattice spanned by the columns of `block`.
SaturationResult saturate_rank1(const IntMatrix& block, const IntVector& v, int d, long c);

/// True if every block, projected orthogonally to the previous ones, is closed
/// under w (exact membership test).
bool is_restructured(const ModuleBasis& M);

struct InsertionEvent {
  int tour = 0;
  int position = 0;  // K-block index
  bool improved = false;
  Rat ideal_norm = 1;
  double delta = 0;  // LLL delta that passed the repair postcondition
  double log_norm_before = 0;
  double log_norm_after = 0;
};

struct TourOptions {
  int guard = lat::kDefaultEnumGuard;
  std::vector<double> delta_schedule{0.99, 0.75, 0.5, 0.25, 0.1, 0.05, 0.01};
  bool exact_checks = false;  // never-worse via exact Gram determinants (small dims only)
};

struct TourReport {
  int insertions = 0;
  bool never_worse = true;
  std::vector<InsertionEvent> events;
};

/// Replaces the leading d columns of block `position` by a Z-basis of the
/// saturated rank-1 module spanned by `new_block` (ambient columns, in M), then
/// removes dependencies with LLL along the delta schedule. Returns the delta used
/// (0 for a no-op).
double repair_structure(ModuleBasis& M, int position, const IntMatrix& new_block, const TourOptions& opt = {});

/// One module-BKZ tour with blocksize betaK (in K-ranks).
TourReport mbkz_tour(ModuleBasis& M, int betaK, const TourOptions& opt = {});

struct RunOptions {
  int max_tours = -1;              // per stage; -1 means 5 d
  double convergence_tol = 1e-4;   // absolute slope change per tour, nats
  bool progressive = true;         // stages betaK' = 2..betaK
  int slope_head = -1;             // -1: one embedded blocksize
  int slope_tail = -1;
  TourOptions tour;
};

struct TourRecord {
  int betaK = 0;
  int tour = 0;
  double slope = 0;
  lat::Profile profile;
};

struct RunResult {
  ModuleBasis basis;
  std::vector<TourRecord> history;
  std::vector<InsertionEvent> events;
  std::vector<std::string> stop_reasons;  // one per stage: "converged" or "tour_cap"
  double final_slope = 0;
  bool never_worse = true;
};

RunResult run_mbkz(const ModuleBasis& M, int betaK, const RunOptions& opt = {});

/// Q-profile with the embedding scale divided out, and K-profile blocks of size d.
lat::Profile k_profile(const ModuleBasis& M);

/// Classical BKZ (blocksize beta) on an integer basis, run by the same engine with d = 1.
struct BkzResult {
  IntMatrix basis;
  std::vector<TourRecord> history;
  std::vector<std::string> stop_reasons;
  double final_slope = 0;
};
BkzResult bkz(const lat::IntLattice& L, int beta, const RunOptions& opt = {}, double log_scale = 0.0);

/// Slope window used by the runs: head = tail = min(beta, (k - 8) / 2) unless set.
double run_slope(const lat::Profile& P, int beta, int head = -1, int tail = -1);

}  // namespace modslope::mbkz
