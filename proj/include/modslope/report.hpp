#pragma once

// JSON and CSV artifacts shared by the command-line tools.

#include <string>
#include <vector>

#include "json.hpp"
#include "modslope/cyclofield.hpp"
#include "modslope/modbkz.hpp"
#include "modslope/predictor.hpp"

namespace modslope::report {

enum class LogBase { nats, bits };

LogBase parse_log_base(const std::string& s);
double to_base(double nats, LogBase b);

nlohmann::json field_json(const cyclo::CyclotomicField& K, LogBase base = LogBase::nats);

struct PredictRow {
  long conductor;
  int d;
  double beta, betaK;
  double t1, t2, t3_model, t4_model;
  double slope_lower, slope_upper;
  double log_alpha_K_lower, log_alpha_K_upper;
  bool out_of_model;
};

/// One prediction row. For K = Q both slope ends are the classical BKZ slope.
PredictRow predict_row(const cyclo::CyclotomicField& K, double beta);

std::string predict_csv(const std::vector<PredictRow>& rows, LogBase base = LogBase::nats);

struct GainRow {
  long conductor;
  int beta;
  double gain_lower, gain_upper, gain_asymptotic;
  std::string error;
};

GainRow gain_row(const cyclo::CyclotomicField& K, int beta);
std::string gain_csv(const std::vector<GainRow>& rows);

struct RunInfo {
  int r = 0;
  int betaK = 0;
  Int q = 0;
  std::uint64_t seed = 0;
  int k = 0;
};

nlohmann::json run_json(const mbkz::RunResult& res, const RunInfo& info, LogBase base = LogBase::nats);

/// index,block,ellQ,ellK(on the last row of each block)
std::string profile_csv(const lat::Profile& P, LogBase base = LogBase::nats);

}  // namespace modslope::report
