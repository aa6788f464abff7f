#include "modslope/labkit.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "modslope/error.hpp"
#include "modslope/predictor.hpp"

namespace modslope::lab {

using cyclo::CyclotomicField;
using cyclo::RingElement;
using nlohmann::json;

namespace {

double log_int(const Int& x) {
  long e = 0;
  const double m = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

template <class F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(m);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

json stats_json(const Stats& s) {
  json j;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["stderr"] = s.se ? json(*s.se) : json(nullptr);
  return j;
}

// Shortest nonzero vector of the module lattice in embedded coordinates.
IntVector shortest(const mbkz::ModuleBasis& M) {
  return lat::svp_enum(lat::IntLattice(M.zbasis)).vector;
}

int constraints_for(const ExperimentSpec& spec, int r) {
  return spec.constraints > 0 ? spec.constraints : std::max(1, r / 2);
}

std::vector<CyclotomicField> fields_of(const ExperimentSpec& spec) {
  std::vector<CyclotomicField> out;
  for (long c : spec.conductors) out.push_back(cyclo::make_field(c));
  return out;
}

}  // namespace

Kind parse_kind(const std::string& s) {
  if (s == "gh_gap") return Kind::gh_gap;
  if (s == "skewness") return Kind::skewness;
  if (s == "index") return Kind::index;
  if (s == "slope") return Kind::slope;
  if (s == "obliviousness") return Kind::obliviousness;
  if (s == "gain_curve") return Kind::gain_curve;
  throw DomainError("unknown experiment kind '" + s +
                    "' (expected gh_gap, skewness, index, slope, obliviousness or gain_curve)");
}

std::string to_string(Kind k) {
  switch (k) {
    case Kind::gh_gap: return "gh_gap";
    case Kind::skewness: return "skewness";
    case Kind::index: return "index";
    case Kind::slope: return "slope";
    case Kind::obliviousness: return "obliviousness";
    case Kind::gain_curve: return "gain_curve";
  }
  return "?";
}

void validate(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw DomainError("trials must be >= 1");
  if (spec.conductors.empty()) throw DomainError("at least one conductor is required");
  if (spec.q < 2) throw DomainError("q must be >= 2");
  if (spec.constraints < 0) throw DomainError("constraints must be >= 0");
  for (long c : spec.conductors) {
    if (c < 1) throw DomainError("conductor must be >= 1");
    if (c % 4 == 2) throw DomainError("conductor " + std::to_string(c) + " = 2 mod 4 defines the same field as " +
                                      std::to_string(c / 2) + "; use that");
  }
  const bool needs_blocks = spec.kind != Kind::gh_gap;
  if (needs_blocks && spec.block_sizes.empty()) throw DomainError("at least one block size is required");
  for (int b : spec.block_sizes)
    if (b < 2) throw DomainError("block sizes must be >= 2");
  for (long c : spec.conductors) {
    const int d = static_cast<int>(cyclo::euler_phi(c));
    switch (spec.kind) {
      case Kind::gh_gap: {
        const int r = spec.rank > 0 ? spec.rank : (spec.rd % d == 0 ? spec.rd / d : 0);
        if (r < 2) throw DomainError("gh_gap needs a rank >= 2 (or rd a multiple of d = " + std::to_string(d) + ")");
        if (r * d > lat::kDefaultEnumGuard) throw GuardError("gh_gap: r d exceeds the enumeration guard");
        break;
      }
      case Kind::skewness:
      case Kind::index:
        for (int b : spec.block_sizes)
          if (b * d > lat::kDefaultEnumGuard) throw GuardError("betaK d exceeds the enumeration guard");
        break;
      case Kind::slope:
      case Kind::obliviousness:
        if (spec.rd < 4 || spec.rd % d != 0)
          throw DomainError("rd must be a multiple of d = " + std::to_string(d) + " and at least 4");
        for (int b : spec.block_sizes) {
          if (b % d != 0)
            throw DomainError("beta " + std::to_string(b) + " is not a multiple of d = " + std::to_string(d));
          if (b > lat::kDefaultEnumGuard) throw GuardError("beta exceeds the enumeration guard");
        }
        break;
      case Kind::gain_curve:
        for (int b : spec.block_sizes)
          if (b < predict::kGsaRegimeStart) throw DomainError("gain_curve needs beta >= 50");
        break;
    }
  }
}

int thread_count() {
  if (const char* s = std::getenv("MODSLOPE_THREADS")) {
    const int n = std::atoi(s);
    if (n >= 1) return n;
  }
  const unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 g(seq);
  return g();
}

Stats summarize(const std::vector<double>& xs) {
  Stats s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n >= 2) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(s.n - 1) / static_cast<double>(s.n));
  }
  return s;
}

double module_skewness(const CyclotomicField& K, const std::vector<RingElement>& s) {
  RingElement ip = cyclo::ring_zero(K);
  for (const auto& x : s) ip = cyclo::ring_add(ip, cyclo::ring_mul(K, x, cyclo::ring_conj(K, x)));
  const Int n = cyclo::ring_norm(K, ip);
  const Int tr = cyclo::ring_trace(K, ip);
  const double d = K.degree;
  return 0.5 * std::log(d) + log_int(n) / (2.0 * d) - 0.5 * log_int(tr);
}

std::vector<GhGapRecord> exp_gh_gap(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<GhGapRecord> out;
  for (const auto& K : fields_of(spec)) {
    const int d = K.degree;
    const int r = spec.rank > 0 ? spec.rank : spec.rd / d;
    const int n = r * d;
    const double pred = std::log(static_cast<double>(K.mu) / 2.0) / n;
    const double lgh = predict::lgh_q(n);
    const double scale = std::log(static_cast<double>(K.conductor));
    std::vector<GhGapRecord> recs(spec.trials);
    parallel_for(recs.size(), [&](std::size_t t) {
      const std::uint64_t s = trial_seed(spec.seed, t);
      const auto M = mbkz::generate_qary_module(K, r, constraints_for(spec, r), spec.q, s);
      const IntVector v = shortest(M);
      const Int nsq = dot(v, v);
      const double ln_l1 = 0.5 * log_int(nsq) - scale;
      recs[t] = {K.conductor, d, r, static_cast<int>(t), s, ln_l1, pred, ln_l1 - mbkz::log_det(M) / n - lgh};
    });
    out.insert(out.end(), recs.begin(), recs.end());
  }
  return out;
}

std::vector<SkewnessRecord> exp_skewness(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<SkewnessRecord> out;
  for (const auto& K : fields_of(spec))
    for (int b : spec.block_sizes) {
      const double pred = predict::skewness_model(K.degree, K.num_real, K.num_complex_pairs, b);
      std::vector<SkewnessRecord> recs(spec.trials);
      parallel_for(recs.size(), [&](std::size_t t) {
        const std::uint64_t s = trial_seed(spec.seed, t);
        const auto M = mbkz::generate_qary_module(K, b, constraints_for(spec, b), spec.q, s);
        const auto v = embed::unembed_module_vector(M.embedding, shortest(M));
        recs[t] = {K.conductor, K.degree, b, static_cast<int>(t), s, module_skewness(K, v), pred};
      });
      out.insert(out.end(), recs.begin(), recs.end());
    }
  return out;
}

std::vector<IndexRecord> exp_index(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<IndexRecord> out;
  for (const auto& K : fields_of(spec))
    for (int b : spec.block_sizes) {
      const double pred = predict::index_model(K, b);
      std::vector<IndexRecord> recs(spec.trials);
      parallel_for(recs.size(), [&](std::size_t t) {
        const std::uint64_t s = trial_seed(spec.seed, t);
        const auto M = mbkz::generate_qary_module(K, b, constraints_for(spec, b), spec.q, s);
        const auto sat = mbkz::saturate_rank1(M.zbasis, shortest(M), K.degree, K.conductor);
        const double gap = (log_int(sat.ideal_norm.get_num()) - log_int(sat.ideal_norm.get_den())) / K.degree;
        recs[t] = {K.conductor, K.degree, b, static_cast<int>(t), s, sat.ideal_norm, gap, pred};
      });
      out.insert(out.end(), recs.begin(), recs.end());
    }
  return out;
}

std::vector<SlopeRecord> exp_slope(const ExperimentSpec& spec) {
  validate(spec);
  struct Job {
    CyclotomicField K;
    int beta, trial;
  };
  std::vector<Job> jobs;
  for (const auto& K : fields_of(spec))
    for (int b : spec.block_sizes)
      for (int t = 0; t < spec.trials; ++t) jobs.push_back({K, b, t});
  std::vector<SlopeRecord> recs(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const auto& [K, beta, t] = jobs[j];
    const int d = K.degree, r = spec.rd / d, betaK = beta / d;
    const std::uint64_t s = trial_seed(spec.seed, t);
    const auto M = mbkz::generate_qary_module(K, r, constraints_for(spec, r), spec.q, s);
    mbkz::RunOptions opt;
    opt.max_tours = spec.max_tours;
    const auto res = mbkz::run_mbkz(M, betaK, opt);
    double lo, hi;
    bool oom = beta < predict::kGsaRegimeStart;
    if (d == 1) {
      lo = hi = predict::predict_bkz_slope(beta);
    } else {
      const auto p = predict::predict_mbkz_slope(K, betaK);
      lo = p.slope_lower;
      hi = p.slope_upper;
      oom = oom || p.out_of_model;
    }
    const bool conv = !res.stop_reasons.empty() && res.stop_reasons.back() == "converged";
    recs[j] = {K.conductor, d, r, beta, betaK, t, s, res.final_slope, lo, hi, oom,
               static_cast<int>(res.history.size()), conv};
  });
  return recs;
}

lat::IntLattice unstructured_qary(const CyclotomicField& K, int r, int k, const Int& q, std::uint64_t seed) {
  const int d = K.degree, n = r * d, m = k * d;
  if (k < 0 || k >= r) throw DomainError("unstructured_qary: need 0 <= k < r");
  std::mt19937_64 rng(seed);
  gmp_randclass gr(gmp_randinit_mt);
  gr.seed(static_cast<unsigned long>(rng()));
  IntMatrix L = IntMatrix::identity(n);
  for (int i = 0; i < m; ++i) L(i, i) = q;
  for (int i = 0; i < m; ++i)
    for (int j = m; j < n; ++j) {
      Int h = gr.get_z_range(q);
      L(i, j) = h == 0 ? Int(0) : Int(q - h);
    }
  std::vector<std::vector<RingElement>> id(r, std::vector<RingElement>(r, cyclo::ring_zero(K)));
  for (int i = 0; i < r; ++i) id[i][i] = cyclo::ring_from_int(K, 1);
  const IntMatrix B0 = embed::embed_module_basis(embed::build_embedding(K), id);
  return lat::IntLattice(B0 * L);
}

std::vector<ObliviousnessRecord> exp_obliviousness(const ExperimentSpec& spec) {
  validate(spec);
  struct Job {
    CyclotomicField K;
    int beta, trial;
    bool module;
  };
  std::vector<Job> jobs;
  for (const auto& K : fields_of(spec))
    for (int b : spec.block_sizes)
      for (int m = 1; m >= 0; --m)
        for (int t = 0; t < spec.trials; ++t) jobs.push_back({K, b, t, m == 1});
  std::vector<ObliviousnessRecord> recs(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const auto& [K, beta, t, module] = jobs[j];
    const int d = K.degree, r = spec.rd / d;
    const std::uint64_t s = trial_seed(spec.seed, t);
    const lat::IntLattice L = module ? lat::IntLattice(mbkz::generate_qary_module(K, r, constraints_for(spec, r), spec.q, s).zbasis)
                                     : unstructured_qary(K, r, constraints_for(spec, r), spec.q, s);
    mbkz::RunOptions opt;
    opt.max_tours = spec.max_tours;
    const auto res = mbkz::bkz(L, beta, opt, std::log(static_cast<double>(K.conductor)));
    recs[j] = {module ? "module" : "unstructured", K.conductor, d, spec.rd, beta, t, s, res.final_slope,
               predict::predict_bkz_slope(beta)};
  });
  return recs;
}

std::vector<GainRecord> exp_gain_curve(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<GainRecord> out;
  for (const auto& K : fields_of(spec))
    for (int b : spec.block_sizes) {
      GainRecord g{K.conductor, K.degree, b, NAN, NAN, NAN, ""};
      try {
        const auto eq = predict::solve_beta_eq(K, b);
        g.gain_lower = eq.lower - b;
        g.gain_upper = eq.upper - b;
        g.gain_asymptotic = predict::asymptotic_beta_eq(K, b) - b;
      } catch (const std::exception& e) {
        g.error = e.what();
        for (char& ch : g.error)
          if (ch == ',' || ch == '\n') ch = ';';
      }
      out.push_back(g);
    }
  return out;
}

Stats sample_spherical_skewness(int d, int d_R, int d_C, int betaK, std::size_t trials, std::uint64_t seed) {
  if (d < 1 || d_R < 0 || d_C < 0 || d != d_R + 2 * d_C) throw DomainError("invalid signature (d must equal d_R + 2 d_C)");
  if (betaK < 1) throw DomainError("betaK must be >= 1");
  if (trials < 1) throw DomainError("trials must be >= 1");
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<double> xs(trials);
  parallel_for(chunks, [&](std::size_t ch) {
    std::mt19937_64 g(trial_seed(seed, ch));
    std::normal_distribution<double> N;
    const std::size_t end = std::min(trials, (ch + 1) * kChunk);
    for (std::size_t t = ch * kChunk; t < end; ++t) {
      double norm_sq = 0, log_norm = 0;
      for (int j = 0; j < d_R; ++j) {
        double x = 0;
        for (int i = 0; i < betaK; ++i) {
          const double a = N(g);
          x += a * a;
        }
        norm_sq += x;
        log_norm += 0.5 * std::log(x);
      }
      for (int j = 0; j < d_C; ++j) {
        double y = 0;
        for (int i = 0; i < betaK; ++i) {
          const double b = N(g), c = N(g);
          y += b * b + c * c;
        }
        norm_sq += y;
        log_norm += std::log(y / 2.0);
      }
      xs[t] = 0.5 * std::log(static_cast<double>(d)) + log_norm / d - 0.5 * std::log(norm_sq);
    }
  });
  return summarize(xs);
}

std::string Table::csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << header[i] << ',';
  os << "schema_version\n";
  for (const auto& row : rows) {
    for (const auto& cell : row) os << cell << ',';
    os << kSchemaVersion << '\n';
  }
  return os.str();
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult res;
  json& j = res.summary;
  j["kind"] = to_string(spec.kind);
  j["schema_version"] = kSchemaVersion;
  j["conductors"] = spec.conductors;
  j["seed"] = spec.seed;
  j["trials"] = spec.trials;
  j["q"] = spec.q.get_str();
  j["constraints"] = spec.constraints > 0 ? json(spec.constraints) : json("r/2");
  j["threads"] = thread_count();
  json groups = json::array();
  Table& T = res.table;
  switch (spec.kind) {
    case Kind::gh_gap: {
      T.header = {"conductor", "d", "r", "trial", "seed", "ln_lambda1", "pred_gap", "emp_gap"};
      std::map<long, std::vector<double>> by;
      std::map<long, double> pred;
      for (const auto& x : exp_gh_gap(spec)) {
        T.rows.push_back({std::to_string(x.conductor), std::to_string(x.d), std::to_string(x.r), std::to_string(x.trial),
                          std::to_string(x.seed), fmt(x.ln_lambda1), fmt(x.pred_gap), fmt(x.emp_gap)});
        by[x.conductor].push_back(x.emp_gap);
        pred[x.conductor] = x.pred_gap;
      }
      for (auto& [c, xs] : by) groups.push_back({{"conductor", c}, {"emp_gap", stats_json(summarize(xs))}, {"pred_gap", pred[c]}});
      break;
    }
    case Kind::skewness: {
      T.header = {"conductor", "d", "betaK", "trial", "seed", "skew", "pred_skew"};
      std::map<std::pair<long, int>, std::vector<double>> by;
      std::map<std::pair<long, int>, double> pred;
      for (const auto& x : exp_skewness(spec)) {
        T.rows.push_back({std::to_string(x.conductor), std::to_string(x.d), std::to_string(x.betaK),
                          std::to_string(x.trial), std::to_string(x.seed), fmt(x.skew), fmt(x.pred_skew)});
        by[{x.conductor, x.betaK}].push_back(x.skew);
        pred[{x.conductor, x.betaK}] = x.pred_skew;
      }
      for (auto& [key, xs] : by)
        groups.push_back({{"conductor", key.first}, {"betaK", key.second}, {"skew", stats_json(summarize(xs))},
                          {"pred_skew", pred[key]}});
      break;
    }
    case Kind::index: {
      T.header = {"conductor", "d", "betaK", "trial", "seed", "ideal_norm", "index_gap", "pred_index"};
      std::map<std::pair<long, int>, std::vector<double>> by;
      std::map<std::pair<long, int>, double> pred;
      for (const auto& x : exp_index(spec)) {
        T.rows.push_back({std::to_string(x.conductor), std::to_string(x.d), std::to_string(x.betaK),
                          std::to_string(x.trial), std::to_string(x.seed), x.ideal_norm.get_str(), fmt(x.index_gap),
                          fmt(x.pred_index)});
        by[{x.conductor, x.betaK}].push_back(x.index_gap);
        pred[{x.conductor, x.betaK}] = x.pred_index;
      }
      for (auto& [key, xs] : by) {
        std::size_t neg = 0;
        for (double v : xs) neg += v < 0;
        groups.push_back({{"conductor", key.first}, {"betaK", key.second}, {"index_gap", stats_json(summarize(xs))},
                          {"negative_records", neg}, {"pred_index", pred[key]}});
      }
      break;
    }
    case Kind::slope: {
      j["rd"] = spec.rd;
      T.header = {"conductor", "d", "r", "beta", "betaK", "trial", "seed", "slope", "pred_lower", "pred_upper",
                  "out_of_model", "tours", "converged"};
      std::map<std::pair<long, int>, std::vector<double>> by;
      std::map<std::pair<long, int>, std::pair<double, double>> pred;
      for (const auto& x : exp_slope(spec)) {
        T.rows.push_back({std::to_string(x.conductor), std::to_string(x.d), std::to_string(x.r), std::to_string(x.beta),
                          std::to_string(x.betaK), std::to_string(x.trial), std::to_string(x.seed), fmt(x.slope),
                          fmt(x.pred_lower), fmt(x.pred_upper), x.out_of_model ? "1" : "0", std::to_string(x.tours),
                          x.converged ? "1" : "0"});
        by[{x.conductor, x.beta}].push_back(x.slope);
        pred[{x.conductor, x.beta}] = {x.pred_lower, x.pred_upper};
      }
      for (auto& [key, xs] : by)
        groups.push_back({{"conductor", key.first}, {"beta", key.second}, {"slope", stats_json(summarize(xs))},
                          {"pred_lower", pred[key].first}, {"pred_upper", pred[key].second}});
      j["stopping_rule"] = "slope change < 1e-4 per tour or 5d tours per stage";
      break;
    }
    case Kind::obliviousness: {
      j["rd"] = spec.rd;
      T.header = {"lattice", "conductor", "d", "rd", "beta", "trial", "seed", "slope", "pred_slope"};
      std::map<std::tuple<long, int, std::string>, std::vector<double>> by;
      for (const auto& x : exp_obliviousness(spec)) {
        T.rows.push_back({x.lattice, std::to_string(x.conductor), std::to_string(x.d), std::to_string(x.rd),
                          std::to_string(x.beta), std::to_string(x.trial), std::to_string(x.seed), fmt(x.slope),
                          fmt(x.pred_slope)});
        by[{x.conductor, x.beta, x.lattice}].push_back(x.slope);
      }
      for (long c : spec.conductors)
        for (int b : spec.block_sizes) {
          const Stats a = summarize(by[{c, b, "module"}]), u = summarize(by[{c, b, "unstructured"}]);
          json g{{"conductor", c}, {"beta", b}, {"module", stats_json(a)}, {"unstructured", stats_json(u)},
                 {"difference", a.mean - u.mean}, {"pred_slope", predict::predict_bkz_slope(b)}};
          if (a.se && u.se) {
            const double pooled = std::sqrt(*a.se * *a.se + *u.se * *u.se);
            g["pooled_stderr"] = pooled;
            g["within_2_stderr"] = std::fabs(a.mean - u.mean) < 2 * pooled;
          } else {
            g["pooled_stderr"] = nullptr;
          }
          groups.push_back(g);
        }
      break;
    }
    case Kind::gain_curve: {
      T.header = {"conductor", "d", "beta", "gain_lower", "gain_upper", "gain_asymptotic", "error"};
      std::size_t failed = 0;
      const auto rows = exp_gain_curve(spec);
      for (const auto& x : rows) {
        T.rows.push_back({std::to_string(x.conductor), std::to_string(x.d), std::to_string(x.beta), fmt(x.gain_lower),
                          fmt(x.gain_upper), fmt(x.gain_asymptotic), x.error});
        failed += !x.error.empty();
      }
      if (!rows.empty() && failed == rows.size()) throw SolverError("beta_eq solver failed on every row");
      break;
    }
  }
  j["groups"] = groups;
  return res;
}

}  // namespace modslope::lab
