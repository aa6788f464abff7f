#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modslope/error.hpp"
#include "modslope/labkit.hpp"
#include "modslope/report.hpp"

using namespace modslope;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "a", "a:b" or "a:b:step", inclusive.
std::vector<double> parse_range(const std::string& s) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t pos = 0;
      parts.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad range '" + s + "': expected lo[:hi[:step]]");
    }
  }
  if (parts.empty() || parts.size() > 3) throw UsageError("bad range '" + s + "': expected lo[:hi[:step]]");
  const double lo = parts[0], hi = parts.size() > 1 ? parts[1] : lo, step = parts.size() > 2 ? parts[2] : 1.0;
  if (step <= 0 || hi < lo) throw UsageError("bad range '" + s + "': need lo <= hi and step > 0");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double b = lo + i * step;
    if (b > hi + 1e-9) break;
    out.push_back(b);
  }
  return out;
}

std::vector<double> collect(const std::vector<std::string>& ranges) {
  std::vector<double> out;
  for (const auto& r : ranges)
    for (double b : parse_range(r)) out.push_back(b);
  return out;
}

cyclo::CyclotomicField field_or_usage(long c) {
  if (c < 1) throw UsageError("conductor must be a positive integer, got " + std::to_string(c));
  return cyclo::make_field(c);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Module-BKZ slope predictions, reductions and experiments over cyclotomic fields"};
  app.require_subcommand(1);
  bool bits = false;
  app.add_flag("--bits", bits, "Report logarithms in bits instead of nats");

  long fi_c = 0;
  std::string fi_out;
  auto* fi = app.add_subcommand("field-info", "Invariants of Q(w_c): degree, signature, discriminant, roots of unity, t2");
  fi->add_option("c", fi_c, "Conductor")->required();
  fi->add_option("--out", fi_out, "Output file (default stdout)");

  std::vector<long> pr_c;
  std::vector<std::string> pr_beta;
  bool pr_cont = false, pr_quiet = false;
  std::string pr_out;
  auto* pr = app.add_subcommand("predict", "Predicted Q-slope interval of module-BKZ as CSV");
  pr->add_option("--c", pr_c, "Conductors")->required();
  pr->add_option("--beta", pr_beta, "Embedded blocksizes as lo[:hi[:step]]")->required();
  pr->add_flag("--continuous", pr_cont, "Allow blocksizes that are not multiples of d");
  pr->add_flag("--no-gsa-warnings", pr_quiet, "Do not warn for beta below the GSA regime");
  pr->add_option("--out", pr_out, "Output CSV (default stdout)");

  std::vector<long> ga_c;
  std::vector<std::string> ga_beta;
  bool ga_asym = false;
  std::string ga_out;
  auto* ga = app.add_subcommand("gain", "Equivalent BKZ blocksize gain beta_eq - beta as CSV");
  ga->add_option("--c", ga_c, "Conductors")->required();
  ga->add_option("--beta", ga_beta, "Embedded blocksizes as lo[:hi[:step]]")->required();
  ga->add_flag("--asymptotic", ga_asym, "Only the asymptotic column (skip the root finder)");
  ga->add_option("--out", ga_out, "Output CSV (default stdout)");

  long rm_c = 1;
  int rm_r = 0, rm_betaK = 0, rm_k = 0, rm_tours = -1, rm_guard = lat::kDefaultEnumGuard;
  std::string rm_q = "521", rm_out;
  std::uint64_t rm_seed = 1;
  double rm_tol = 1e-4;
  bool rm_flat = false;
  auto* rm = app.add_subcommand("run-mbkz", "Progressive module-BKZ on a random q-ary module lattice");
  rm->add_option("--c", rm_c, "Conductor")->required();
  rm->add_option("--r", rm_r, "Module rank")->required();
  rm->add_option("--betaK", rm_betaK, "Blocksize in K-ranks")->required();
  rm->add_option("--k", rm_k, "Number of constraints (default r/2)");
  rm->add_option("--q", rm_q, "Modulus")->capture_default_str();
  rm->add_option("--seed", rm_seed, "Seed")->capture_default_str();
  rm->add_option("--tours", rm_tours, "Tour cap per stage (default 5d)");
  rm->add_option("--tol", rm_tol, "Slope change that ends a stage")->capture_default_str();
  rm->add_flag("--no-progressive", rm_flat, "Run only the final blocksize");
  rm->add_option("--guard", rm_guard, "Largest enumeration dimension")->capture_default_str();
  rm->add_option("--out", rm_out, "Output directory for report.json, profile.csv and basis.txt (default: report to stdout)");

  std::string ex_kind, ex_q = "521", ex_out;
  std::vector<long> ex_c{1};
  std::vector<int> ex_blocks;
  int ex_r = 0, ex_rd = 0, ex_k = 0, ex_trials = 1, ex_tours = -1;
  std::uint64_t ex_seed = 1;
  auto* ex = app.add_subcommand("experiment", "Monte-Carlo experiments: gh_gap, skewness, index, slope, obliviousness, gain_curve");
  ex->add_option("kind", ex_kind, "Experiment kind")->required();
  ex->add_option("--c", ex_c, "Conductors")->capture_default_str();
  ex->add_option("--r", ex_r, "Module rank (gh_gap)");
  ex->add_option("--rd", ex_rd, "Embedded dimension (gh_gap, slope, obliviousness)");
  ex->add_option("--betaK,--beta", ex_blocks, "Blocksizes: betaK for skewness/index, embedded beta otherwise");
  ex->add_option("--k", ex_k, "Number of constraints (default r/2)");
  ex->add_option("--trials", ex_trials, "Trials (seeds for slope and obliviousness)")->capture_default_str();
  ex->add_option("--q", ex_q, "Modulus")->capture_default_str();
  ex->add_option("--seed", ex_seed, "Seed")->capture_default_str();
  ex->add_option("--tours", ex_tours, "Tour cap per stage (default 5d)");
  ex->add_option("--out", ex_out, "Output CSV; the JSON summary goes to <out>.json (default: CSV to stdout, summary to stderr)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  const report::LogBase base = bits ? report::LogBase::bits : report::LogBase::nats;

  try {
    if (*fi) {
      const auto K = field_or_usage(fi_c);
      emit(fi_out, report::field_json(K, base).dump(2) + "\n");
    } else if (*pr) {
      const auto betas = collect(pr_beta);
      std::vector<report::PredictRow> rows;
      for (long c : pr_c) {
        const auto K = field_or_usage(c);
        for (double b : betas) {
          if (!pr_cont && (std::floor(b) != b || static_cast<long>(b) % K.degree != 0))
            throw UsageError("beta " + std::to_string(b) + " is not a multiple of d = " + std::to_string(K.degree) +
                             " for conductor " + std::to_string(c) + " (use --continuous for real-valued curves)");
          if (b < 2.0 * K.degree) throw UsageError("beta must be at least 2 d");
          if (!pr_quiet && b < predict::kGsaRegimeStart)
            std::cerr << "warning: beta " << b << " is below the GSA regime (beta >= 50); prediction is out of model\n";
          rows.push_back(report::predict_row(K, b));
        }
      }
      emit(pr_out, report::predict_csv(rows, base));
    } else if (*ga) {
      const auto betas = collect(ga_beta);
      std::vector<report::GainRow> rows;
      std::size_t failed = 0;
      for (long c : ga_c) {
        const auto K = field_or_usage(c);
        for (double b : betas) {
          if (std::floor(b) != b || static_cast<long>(b) % K.degree != 0)
            throw UsageError("beta " + std::to_string(b) + " is not a multiple of d = " + std::to_string(K.degree));
          report::GainRow g;
          if (ga_asym) {
            g = {c, static_cast<int>(b), NAN, NAN, predict::asymptotic_beta_eq(K, static_cast<int>(b)) - b, ""};
          } else {
            g = report::gain_row(K, static_cast<int>(b));
          }
          failed += !g.error.empty();
          rows.push_back(g);
        }
      }
      emit(ga_out, report::gain_csv(rows));
      if (!rows.empty() && failed == rows.size()) {
        std::cerr << "error: the beta_eq solver failed on every row\n";
        return kExitRuntime;
      }
    } else if (*rm) {
      const auto K = field_or_usage(rm_c);
      if (rm_c % 4 == 2) throw UsageError("conductor " + std::to_string(rm_c) + " = 2 mod 4; use " + std::to_string(rm_c / 2));
      if (rm_r < 2) throw UsageError("--r must be >= 2");
      if (rm_betaK < 2 || rm_betaK > rm_r) throw UsageError("--betaK must be in [2, r]");
      if (rm_betaK * K.degree > rm_guard)
        throw UsageError("betaK d = " + std::to_string(rm_betaK * K.degree) + " exceeds the enumeration guard " +
                         std::to_string(rm_guard));
      const int k = rm_k > 0 ? rm_k : rm_r / 2;
      if (k >= rm_r) throw UsageError("--k must be < r");
      const Int q(rm_q);
      const auto M = mbkz::generate_qary_module(K, rm_r, k, q, rm_seed);
      mbkz::RunOptions opt;
      opt.max_tours = rm_tours;
      opt.convergence_tol = rm_tol;
      opt.progressive = !rm_flat;
      opt.tour.guard = rm_guard;
      mbkz::RunResult res;
      try {
        res = mbkz::run_mbkz(M, rm_betaK, opt);
      } catch (const mbkz::StructureRepairError& e) {
        if (!rm_out.empty()) {
          fs::create_directories(rm_out);
          const std::string path = (fs::path(rm_out) / "failure_input_basis.txt").string();
          std::ofstream f(path);
          lat::write_matrix(f, M.zbasis);
          std::cerr << "diagnostic input basis: " << path << "\n";
        }
        std::cerr << "error: " << e.what() << " (block " << e.position << ", window " << e.window << ")\n";
        return kExitRuntime;
      }
      const report::RunInfo info{rm_r, rm_betaK, q, rm_seed, k};
      const auto j = report::run_json(res, info, base);
      if (rm_out.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        fs::create_directories(rm_out);
        emit((fs::path(rm_out) / "report.json").string(), j.dump(2) + "\n");
        emit((fs::path(rm_out) / "profile.csv").string(), report::profile_csv(mbkz::k_profile(res.basis), base));
        std::ofstream f(fs::path(rm_out) / "basis.txt");
        lat::write_matrix(f, res.basis.zbasis);
        std::cerr << "final slope " << j["final_slope"] << ", artifacts in " << rm_out << "\n";
      }
    } else if (*ex) {
      lab::ExperimentSpec spec;
      try {
        spec.kind = lab::parse_kind(ex_kind);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      spec.conductors = ex_c;
      spec.rank = ex_r;
      spec.rd = ex_rd;
      spec.block_sizes = ex_blocks;
      spec.constraints = ex_k;
      spec.trials = ex_trials;
      spec.q = Int(ex_q);
      spec.seed = ex_seed;
      spec.max_tours = ex_tours;
      try {
        lab::validate(spec);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      const auto res = lab::run_experiment(spec);
      emit(ex_out, res.table.csv());
      if (ex_out.empty() || ex_out == "-")
        std::cerr << res.summary.dump(2) << "\n";
      else
        emit(ex_out + ".json", res.summary.dump(2) + "\n");
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
