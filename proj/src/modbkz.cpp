#include "modslope/modbkz.hpp"

#include <cmath>
#include <random>

#include "modslope/error.hpp"

namespace modslope::mbkz {

using cyclo::CyclotomicField;
using cyclo::RingElement;

StructureRepairError::StructureRepairError(const std::string& what, std::size_t pos, std::size_t win)
    : std::runtime_error(what), position(pos), window(win) {}

namespace {

double log_abs(const Int& x) {
  long e = 0;
  const double m = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

Int reduce_mod(const Int& x, const Int& q) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), q.get_mpz_t());
  return r;
}

double ls_slope(const std::vector<double>& y, std::size_t lo, std::size_t hi) {
  const double m = static_cast<double>(hi - lo);
  if (hi - lo < 2) return 0.0;
  double sx = 0, sy = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    sx += static_cast<double>(i);
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0, sxx = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    sxy += (i - mx) * (y[i] - my);
    sxx += (i - mx) * (i - mx);
  }
  return sxy / sxx;
}

bool first_block_preserved(const IntMatrix& T, std::size_t d) {
  for (std::size_t i = d; i < T.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (T(i, j) != 0) return false;
  return true;
}

Rat exact_bstar_sq(const lat::Reducer& R, std::size_t p) {
  auto gram_det = [&](std::size_t n) {
    if (n == 0) return Int(1);
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = R.gram(i, j);
    return determinant(g);
  };
  Rat x(gram_det(p + 1), gram_det(p));
  x.canonicalize();
  return x;
}

// Applies U to the window at p and runs LLL on [p, e) along the delta schedule
// until the leading d columns keep their span. Returns the delta that passed.
double repair_window(lat::Reducer& R, std::size_t p, std::size_t e, std::size_t d, const IntMatrix& U,
                     const TourOptions& opt, std::size_t block) {
  R.transform_window(p, U);
  for (double delta : opt.delta_schedule) {
    const lat::Reducer::State st = R.save();
    IntMatrix T;
    R.lll(p, e, delta, &T);
    if (first_block_preserved(T, d)) return delta;
    R.restore(st);
  }
  throw StructureRepairError("structure repair failed at block " + std::to_string(block) + " for every delta in the schedule",
                             block, e - p);
}

// One tour of the shared engine. d = 1 is classical BKZ.
TourReport tour(lat::Reducer& R, int d, long c, int betaK, const TourOptions& opt, int tour_index,
                std::vector<Rat>* ideal_norms) {
  TourReport rep;
  const std::size_t rk = R.rank();
  const std::size_t r = rk / d;
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t p = i * d;
    const std::size_t e = std::min(p + static_cast<std::size_t>(betaK) * d, rk);
    const std::size_t k = e - p;
    if (k <= 1) continue;
    if (static_cast<long>(k) > opt.guard)
      throw GuardError("block dimension " + std::to_string(k) + " exceeds the enumeration guard " +
                       std::to_string(opt.guard));
    const long double before = R.r(p);
    Rat before_exact;
    if (opt.exact_checks) before_exact = exact_bstar_sq(R, p);
    R.lll(p, e, 0.99);
    std::vector<long> x = R.enumerate(p, e, R.r(p) * (1.0L - 1e-6L));
    const bool improved = !x.empty();
    if (!improved) {
      if (d == 1) continue;
      x.assign(k, 0);
      x[0] = 1;
    }
    IntVector xv(k);
    for (std::size_t l = 0; l < k; ++l) xv[l] = x[l];
    IntVector V(R.dimension());
    for (std::size_t l = 0; l < k; ++l) {
      if (x[l] == 0) continue;
      for (std::size_t t = 0; t < V.size(); ++t)
        mpz_addmul(V[t].get_mpz_t(), xv[l].get_mpz_t(), R.column(p + l)[t].get_mpz_t());
    }
    std::vector<IntVector> orbit{xv};
    for (int t = 1; t < d; ++t) {
      const IntVector z = R.coordinates(embed::omega_shift(V, c, t), e);
      orbit.emplace_back(z.begin() + p, z.begin() + e);
    }
    const Saturation sat = saturate_coords(orbit, xv);
    if (ideal_norms) (*ideal_norms)[i] = sat.ideal_norm;
    if (!improved && first_block_preserved(sat.transform, d)) continue;

    const double used = repair_window(R, p, e, d, sat.transform, opt, i);
    const long double after = R.r(p);
    InsertionEvent ev;
    ev.tour = tour_index;
    ev.position = static_cast<int>(i);
    ev.improved = improved;
    ev.ideal_norm = sat.ideal_norm;
    ev.delta = used;
    ev.log_norm_before = static_cast<double>(0.5L * std::log(before));
    ev.log_norm_after = static_cast<double>(0.5L * std::log(after));
    if (opt.exact_checks) {
      if (exact_bstar_sq(R, p) > before_exact) rep.never_worse = false;
    } else if (after > before * (1.0L + 1e-9L)) {
      rep.never_worse = false;
    }
    rep.events.push_back(ev);
    ++rep.insertions;
  }
  return rep;
}

struct StagedResult {
  std::vector<TourRecord> history;
  std::vector<InsertionEvent> events;
  std::vector<std::string> stop_reasons;
  double final_slope = 0;
  bool never_worse = true;
};

StagedResult run_stages(lat::Reducer& R, int d, long c, int beta_top, const RunOptions& opt,
                        std::vector<Rat>* ideal_norms) {
  StagedResult out;
  const int r = static_cast<int>(R.rank()) / d;
  const int cap = opt.max_tours < 0 ? 5 * d : opt.max_tours;
  const double log_scale = std::log(static_cast<double>(c));
  auto profile = [&]() {
    lat::Profile P = R.profile(log_scale);
    P.block = d;
    return P;
  };
  if (cap == 0) return out;
  const int top = std::min(beta_top, r);
  const int first = opt.progressive ? std::min(2, top) : top;
  int tour_index = 0;
  for (int b = first; b <= top; ++b) {
    double prev = run_slope(profile(), b * d, opt.slope_head, opt.slope_tail);
    std::string reason = "tour_cap";
    for (int t = 0; t < cap; ++t) {
      TourReport rep = tour(R, d, c, b, opt.tour, tour_index++, ideal_norms);
      out.events.insert(out.events.end(), rep.events.begin(), rep.events.end());
      out.never_worse = out.never_worse && rep.never_worse;
      lat::Profile P = profile();
      const double s = run_slope(P, b * d, opt.slope_head, opt.slope_tail);
      out.history.push_back({b, t, s, std::move(P)});
      const bool still = std::fabs(s - prev) < opt.convergence_tol || rep.insertions == 0;
      prev = s;
      if (still) {
        reason = "converged";
        break;
      }
    }
    out.stop_reasons.push_back(reason);
  }
  out.final_slope = run_slope(profile(), top * d, opt.slope_head, opt.slope_tail);
  return out;
}

}  // namespace

double run_slope(const lat::Profile& P, int beta, int head, int tail) {
  const int k = static_cast<int>(P.ellQ.size());
  if (k < 8) return ls_slope(P.ellQ, 0, k);
  int h = head < 0 ? beta : head;
  int t = tail < 0 ? beta : tail;
  if (k - h - t < 8) h = t = (k - 8) / 2;
  return lat::measure_slope(P, h, t);
}

ModuleBasis qary_module_from(const CyclotomicField& K, int r, const std::vector<std::vector<RingElement>>& H, const Int& q) {
  const int k = static_cast<int>(H.size());
  if (r < 1 || k < 0 || k >= r) throw DomainError("qary module: need 0 <= k < r");
  if (q < 2) throw DomainError("qary module: q must be >= 2");
  std::vector<std::vector<RingElement>> entries(r, std::vector<RingElement>(r, cyclo::ring_zero(K)));
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(H[i].size()) != r - k) throw DomainError("qary module: H must be k x (r - k)");
    entries[i][i] = cyclo::ring_from_int(K, q);
    for (int j = k; j < r; ++j) {
      RingElement e = H[i][j - k];
      for (auto& a : e.coeffs) a = reduce_mod(-a, q);
      entries[i][j] = e;
    }
  }
  for (int j = k; j < r; ++j) entries[j][j] = cyclo::ring_from_int(K, 1);
  ModuleBasis M;
  M.embedding = embed::build_embedding(K);
  M.rank = r;
  M.zbasis = embed::embed_module_basis(M.embedding, entries);
  M.ideal_norms.assign(r, Rat(1));
  return M;
}

ModuleBasis generate_qary_module(const CyclotomicField& K, int r, int k, const Int& q, std::uint64_t seed) {
  if (r < 1 || k < 0 || k >= r) throw DomainError("generate_qary_module: need 0 <= k < r");
  if (q < 2) throw DomainError("generate_qary_module: q must be >= 2");
  std::mt19937_64 rng(seed);
  gmp_randclass gr(gmp_randinit_mt);
  gr.seed(static_cast<unsigned long>(rng()));
  std::vector<std::vector<RingElement>> H(k, std::vector<RingElement>(r - k, cyclo::ring_zero(K)));
  for (auto& row : H)
    for (auto& e : row)
      for (auto& a : e.coeffs) a = gr.get_z_range(q);
  return qary_module_from(K, r, H, q);
}

double log_det(const ModuleBasis& M) {
  const IntMatrix g = M.zbasis.transpose() * M.zbasis;
  const Int det = determinant(g);
  const double n = static_cast<double>(M.zbasis.cols());
  return 0.5 * log_abs(det) - n * std::log(static_cast<double>(M.conductor()));
}

Saturation saturate_coords(const std::vector<IntVector>& orbit_coords, const IntVector& v_coords) {
  const std::size_t d = orbit_coords.size();
  if (d == 0) throw DomainError("saturate: empty orbit");
  const std::size_t k = v_coords.size();
  const IntMatrix C = IntMatrix::from_columns(orbit_coords, k);
  const RowEchelon e = row_echelon(C, true);
  if (e.rank != d) throw InternalError("saturate: orbit of v is not linearly independent");
  Int det = 1;
  for (std::size_t i = 0; i < d; ++i) det *= e.h(i, i);
  det = abs(det);
  const IntVector hv = e.u * v_coords;
  IntVector h(hv.begin(), hv.begin() + d);
  for (std::size_t i = d; i < k; ++i)
    if (hv[i] != 0) throw DomainError("saturate: v is not in the span of its orbit");
  Int g = 0;
  for (const auto& x : h) g = gcd(g, x);
  if (g == 0) throw DomainError("saturate: v is zero");
  for (auto& x : h) x /= g;
  const IntMatrix W = complete_to_unimodular(h);
  Saturation s;
  s.transform = e.u_inv;
  const IntMatrix S = e.u_inv.columns(0, d);
  const IntMatrix SW = S * W;
  for (std::size_t j = 0; j < d; ++j) s.transform.set_column(j, SW.column(j));
  s.coords = SW;
  s.ideal_norm = Rat(1, det);
  s.ideal_norm.canonicalize();
  return s;
}

SaturationResult saturate_rank1(const IntMatrix& block, const IntVector& v, int d, long c) {
  std::vector<IntVector> orbit;
  for (int t = 0; t < d; ++t) {
    std::vector<Rat> z;
    if (!solve_rational(block, embed::omega_shift(v, c, t), z))
      throw DomainError(t == 0 ? "saturate_rank1: v is not in the block" : "saturate_rank1: block is not closed under w");
    IntVector zi(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (z[i].get_den() != 1) throw DomainError("saturate_rank1: v is not in the block lattice");
      zi[i] = z[i].get_num();
    }
    orbit.push_back(std::move(zi));
  }
  const Saturation s = saturate_coords(orbit, orbit[0]);
  return {block * s.coords, s.ideal_norm};
}

bool is_restructured(const ModuleBasis& M) {
  const std::size_t d = M.degree();
  const long c = M.conductor();
  const std::size_t rk = M.zbasis.cols();
  for (std::size_t i = 0; i * d < rk; ++i) {
    const IntMatrix P = M.zbasis.columns(0, (i + 1) * d);
    for (std::size_t j = i * d; j < (i + 1) * d; ++j) {
      std::vector<Rat> z;
      if (!solve_rational(P, embed::omega_shift(M.zbasis.column(j), c, 1), z)) return false;
      for (std::size_t l = i * d; l < (i + 1) * d; ++l)
        if (z[l].get_den() != 1) return false;
    }
  }
  return true;
}

double repair_structure(ModuleBasis& M, int position, const IntMatrix& new_block, const TourOptions& opt) {
  const std::size_t d = M.degree();
  const std::size_t rk = M.zbasis.cols();
  if (position < 0 || static_cast<std::size_t>(position) * d >= rk) throw DomainError("repair_structure: bad position");
  if (new_block.cols() != d || new_block.rows() != M.zbasis.rows())
    throw DomainError("repair_structure: new block must have d ambient columns");
  const std::size_t p = position * d;
  lat::Reducer R(M.zbasis);
  std::vector<IntVector> coords;
  for (std::size_t j = 0; j < d; ++j) {
    const IntVector z = R.coordinates(new_block.column(j), rk);
    coords.emplace_back(z.begin() + p, z.end());
  }
  const RowEchelon ech = row_echelon(IntMatrix::from_columns(coords, rk - p), true);
  if (ech.rank != d) throw DomainError("repair_structure: new block is not of rank d in the projection");
  if (first_block_preserved(ech.u_inv, d)) return 0.0;
  const double used = repair_window(R, p, rk, d, ech.u_inv, opt, position);
  M.zbasis = R.basis();
  return used;
}

TourReport mbkz_tour(ModuleBasis& M, int betaK, const TourOptions& opt) {
  if (betaK < 2) throw DomainError("mbkz_tour: betaK must be >= 2");
  lat::Reducer R(M.zbasis);
  TourReport rep = tour(R, M.degree(), M.conductor(), std::min(betaK, M.rank), opt, 0, &M.ideal_norms);
  M.zbasis = R.basis();
  return rep;
}

RunResult run_mbkz(const ModuleBasis& M, int betaK, const RunOptions& opt) {
  if (betaK < 2) throw DomainError("run_mbkz: betaK must be >= 2");
  RunResult out;
  out.basis = M;
  lat::Reducer R(M.zbasis);
  StagedResult s = run_stages(R, M.degree(), M.conductor(), betaK, opt, &out.basis.ideal_norms);
  out.basis.zbasis = R.basis();
  out.history = std::move(s.history);
  out.events = std::move(s.events);
  out.stop_reasons = std::move(s.stop_reasons);
  out.final_slope = s.final_slope;
  out.never_worse = s.never_worse;
  return out;
}

lat::Profile k_profile(const ModuleBasis& M) {
  lat::Reducer R(M.zbasis);
  lat::Profile P = R.profile(std::log(static_cast<double>(M.conductor())));
  P.block = M.degree();
  return P;
}

BkzResult bkz(const lat::IntLattice& L, int beta, const RunOptions& opt, double log_scale) {
  if (beta < 2) throw DomainError("bkz: beta must be >= 2");
  lat::Reducer R(L.basis());
  RunOptions o = opt;
  StagedResult s = run_stages(R, 1, 1, beta, o, nullptr);
  BkzResult out;
  out.basis = R.basis();
  out.history = std::move(s.history);
  out.stop_reasons = std::move(s.stop_reasons);
  out.final_slope = s.final_slope;
  if (log_scale != 0.0)
    for (auto& h : out.history)
      for (auto& v : h.profile.ellQ) v -= log_scale;
  return out;
}

}  // namespace modslope::mbkz
