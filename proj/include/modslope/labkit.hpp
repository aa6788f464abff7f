#pragma once

// Desk-scale Monte-Carlo experiments. Trials run on a small thread pool
// (MODSLOPE_THREADS, default hardware concurrency); every trial draws from its
// own PRNG stream derived from (seed, trial), so results do not depend on the
// number of threads.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "modslope/cyclofield.hpp"
#include "modslope/modbkz.hpp"

namespace modslope::lab {

inline constexpr int kSchemaVersion = 1;
inline const Int kDefaultModulus = 521;

enum class Kind { gh_gap, skewness, index, slope, obliviousness, gain_curve };

Kind parse_kind(const std::string& s);
std::string to_string(Kind k);

struct ExperimentSpec {
  Kind kind = Kind::gh_gap;
  std::vector<long> conductors{1};
  int rank = 0;                  // r (gh_gap); 0 means rd / d
  int rd = 0;                    // embedded dimension (gh_gap, slope, obliviousness)
  std::vector<int> block_sizes;  // betaK for skewness/index, embedded beta for slope/obliviousness/gain_curve
  int constraints = 0;           // k in the q-ary construction; 0 means r / 2
  int trials = 1;                // seeds per configuration for slope/obliviousness
  Int q = kDefaultModulus;
  std::uint64_t seed = 1;
  int max_tours = -1;
};

void validate(const ExperimentSpec& spec);

int thread_count();

/// Seed of the PRNG stream of one trial.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

struct Stats {
  std::size_t n = 0;
  double mean = 0;
  std::optional<double> se;  // undefined for n < 2
};
Stats summarize(const std::vector<double>& xs);

struct GhGapRecord {
  long conductor;
  int d, r, trial;
  std::uint64_t seed;
  double ln_lambda1, pred_gap, emp_gap;
};
std::vector<GhGapRecord> exp_gh_gap(const ExperimentSpec& spec);

struct SkewnessRecord {
  long conductor;
  int d, betaK, trial;
  std::uint64_t seed;
  double skew, pred_skew;
};
std::vector<SkewnessRecord> exp_skewness(const ExperimentSpec& spec);

struct IndexRecord {
  long conductor;
  int d, betaK, trial;
  std::uint64_t seed;
  Rat ideal_norm;
  double index_gap, pred_index;
};
std::vector<IndexRecord> exp_index(const ExperimentSpec& spec);

struct SlopeRecord {
  long conductor;
  int d, r, beta, betaK, trial;
  std::uint64_t seed;
  double slope, pred_lower, pred_upper;
  bool out_of_model;
  int tours;
  bool converged;
};
std::vector<SlopeRecord> exp_slope(const ExperimentSpec& spec);

struct ObliviousnessRecord {
  std::string lattice;  // "module" or "unstructured"
  long conductor;
  int d, rd, beta, trial;
  std::uint64_t seed;
  double slope, pred_slope;
};
std::vector<ObliviousnessRecord> exp_obliviousness(const ExperimentSpec& spec);

struct GainRecord {
  long conductor;
  int d, beta;
  double gain_lower, gain_upper, gain_asymptotic;
  std::string error;  // empty unless the solver failed for this row
};
std::vector<GainRecord> exp_gain_curve(const ExperimentSpec& spec);

/// Module lattice of rank r with k constraints mod q, seen as a plain Z-lattice,
/// and a Z-lattice of the same dimension and determinant with no O_K-structure.
lat::IntLattice unstructured_qary(const cyclo::CyclotomicField& K, int r, int k, const Int& q, std::uint64_t seed);

/// Skewness records of s spherical in K_R^betaK, drawn coordinate by coordinate.
Stats sample_spherical_skewness(int d, int d_R, int d_C, int betaK, std::size_t trials, std::uint64_t seed);

/// ln(sqrt(d) N(s)^(1/d) / |s|) for a module vector given in K-coordinates.
double module_skewness(const cyclo::CyclotomicField& K, const std::vector<cyclo::RingElement>& s);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string csv() const;  // appends the schema_version column
};

struct ExperimentResult {
  Table table;
  nlohmann::json summary;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace modslope::lab
