#include "modslope/report.hpp"

#include <cmath>
#include <sstream>

#include "modslope/error.hpp"
#include "modslope/labkit.hpp"

namespace modslope::report {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

LogBase parse_log_base(const std::string& s) {
  if (s == "nats") return LogBase::nats;
  if (s == "bits") return LogBase::bits;
  throw DomainError("log base must be 'nats' or 'bits'");
}

double to_base(double nats, LogBase b) { return b == LogBase::bits ? nats / std::log(2.0) : nats; }

json field_json(const cyclo::CyclotomicField& K, LogBase base) {
  json j;
  j["conductor"] = K.conductor;
  j["d"] = K.degree;
  j["d_R"] = K.num_real;
  j["d_C"] = K.num_complex_pairs;
  j["abs_discriminant"] = K.abs_discriminant.get_str();
  j["mu"] = K.mu;
  j["t2"] = to_base(cyclo::discriminant_gap(K), base);
  j["prime_divisors"] = K.prime_factors;
  j["log_base"] = base == LogBase::bits ? "bits" : "nats";
  return j;
}

PredictRow predict_row(const cyclo::CyclotomicField& K, double beta) {
  const double betaK = beta / K.degree;
  const auto p = predict::predict_mbkz_slope(K, betaK);
  PredictRow r{K.conductor, K.degree, beta, betaK, p.terms.t1, p.terms.t2, p.terms.t3_model, p.terms.t4_model,
               p.slope_lower, p.slope_upper, p.log_alpha_K_lower, p.log_alpha_K_upper, p.out_of_model};
  if (K.degree == 1) {
    r.slope_lower = r.slope_upper = predict::predict_bkz_slope(beta);
    r.log_alpha_K_lower = r.log_alpha_K_upper = -r.slope_lower;
  }
  return r;
}

std::string predict_csv(const std::vector<PredictRow>& rows, LogBase base) {
  std::ostringstream os;
  os << "conductor,d,beta,betaK,t1,t2,t3_model,t4_model,slope_lower,slope_upper,log_alpha_K_lower,"
        "log_alpha_K_upper,out_of_model,log_base,schema_version\n";
  const char* b = base == LogBase::bits ? "bits" : "nats";
  for (const auto& r : rows)
    os << r.conductor << ',' << r.d << ',' << fmt(r.beta) << ',' << fmt(r.betaK) << ',' << fmt(to_base(r.t1, base)) << ','
       << fmt(to_base(r.t2, base)) << ',' << fmt(to_base(r.t3_model, base)) << ',' << fmt(to_base(r.t4_model, base))
       << ',' << fmt(to_base(r.slope_lower, base)) << ',' << fmt(to_base(r.slope_upper, base)) << ','
       << fmt(to_base(r.log_alpha_K_lower, base)) << ',' << fmt(to_base(r.log_alpha_K_upper, base)) << ','
       << (r.out_of_model ? 1 : 0) << ',' << b << ',' << lab::kSchemaVersion << '\n';
  return os.str();
}

GainRow gain_row(const cyclo::CyclotomicField& K, int beta) {
  GainRow g{K.conductor, beta, NAN, NAN, NAN, ""};
  try {
    const auto eq = predict::solve_beta_eq(K, beta);
    g.gain_lower = eq.lower - beta;
    g.gain_upper = eq.upper - beta;
    g.gain_asymptotic = predict::asymptotic_beta_eq(K, beta) - beta;
  } catch (const std::exception& e) {
    g.error = e.what();
    for (char& ch : g.error)
      if (ch == ',' || ch == '\n') ch = ';';
  }
  return g;
}

std::string gain_csv(const std::vector<GainRow>& rows) {
  std::ostringstream os;
  os << "conductor,beta,gain_lower,gain_upper,gain_asymptotic,error,schema_version\n";
  for (const auto& g : rows)
    os << g.conductor << ',' << g.beta << ',' << fmt(g.gain_lower) << ',' << fmt(g.gain_upper) << ','
       << fmt(g.gain_asymptotic) << ',' << g.error << ',' << lab::kSchemaVersion << '\n';
  return os.str();
}

json run_json(const mbkz::RunResult& res, const RunInfo& info, LogBase base) {
  const auto& M = res.basis;
  const auto P = mbkz::k_profile(M);
  json j;
  j["schema_version"] = lab::kSchemaVersion;
  j["field"] = field_json(M.embedding.field, base);
  j["r"] = info.r;
  j["k"] = info.k;
  j["q"] = info.q.get_str();
  j["seed"] = info.seed;
  j["betaK"] = info.betaK;
  std::vector<int> schedule;
  for (const auto& h : res.history)
    if (schedule.empty() || schedule.back() != h.betaK) schedule.push_back(h.betaK);
  j["betaK_schedule"] = schedule;
  j["stop_reasons"] = res.stop_reasons;
  j["stopping_rule"] = "heuristic: slope change below tolerance or tour cap per stage";
  json tours = json::array();
  for (const auto& h : res.history) tours.push_back({{"betaK", h.betaK}, {"tour", h.tour}, {"slope", to_base(h.slope, base)}});
  j["tours"] = tours;
  j["final_slope"] = to_base(res.final_slope, base);
  std::vector<double> q, k;
  for (double x : P.ellQ) q.push_back(to_base(x, base));
  for (double x : P.ellK()) k.push_back(to_base(x, base));
  j["ellQ"] = q;
  j["ellK"] = k;
  j["never_worse"] = res.never_worse;
  json ev = json::array();
  for (const auto& e : res.events)
    if (e.ideal_norm != 1)
      ev.push_back({{"tour", e.tour}, {"position", e.position}, {"ideal_norm", e.ideal_norm.get_str()}, {"delta", e.delta}});
  j["ideal_norm_events"] = ev;
  j["insertions"] = res.events.size();
  std::vector<std::string> norms;
  for (const auto& n : M.ideal_norms) norms.push_back(n.get_str());
  j["ideal_norms"] = norms;
  j["log_base"] = base == LogBase::bits ? "bits" : "nats";
  return j;
}

std::string profile_csv(const lat::Profile& P, LogBase base) {
  std::ostringstream os;
  os << "index,block,ellQ,ellK,schema_version\n";
  const int d = P.block > 0 ? P.block : 1;
  const auto K = P.block > 0 ? P.ellK() : P.ellQ;
  for (std::size_t i = 0; i < P.ellQ.size(); ++i) {
    const std::size_t b = i / d;
    os << i << ',' << b << ',' << fmt(to_base(P.ellQ[i], base)) << ',';
    if ((i + 1) % d == 0 && b < K.size()) os << fmt(to_base(K[b], base));
    os << ',' << lab::kSchemaVersion << '\n';
  }
  return os.str();
}

}  // namespace modslope::report
