#pragma once

// End-to-end comparison of the exact zero count R(0;P) with the prediction
// P^{d+1} * S * J, trend checks over several P, and serialization.

#include "cz/counting.hpp"
#include "cz/forms.hpp"
#include "cz/integral.hpp"
#include "cz/local.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cz {

struct PredictConfig {
  CountMethod count_method = CountMethod::convolution;
  Budget budget{};
  SeriesConfig series{};
  IntegralMethod j_method = IntegralMethod::cdf_reduction;
  std::int64_t grid = 4096;
  std::int64_t samples = 10'000'000;
  std::uint64_t seed = 1;
  double threshold = -1.0;  // trend threshold; negative picks the default for d
  double delta = -1.0;      // major-arc exponent; negative picks the default for d
  int threads = 0;          // recorded only
  bool timing = true;
};

// 0.15 for d <= 3, 0.25 above.
double default_threshold(int d);

struct Provenance {
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  std::int64_t grid = 0;
  std::string j_method;
  std::string count_method;
  std::int64_t prime_bound = 0;
  double tol = 0.0;
  int max_level_p2 = 0;
  bool level_capped = false;
  double delta = 0.0;
  double error_exponent = 0.0;
  int threads = 0;
  std::map<std::string, double> timings;

  bool operator==(const Provenance&) const = default;
};

struct PredictionReport {
  int d = 0;
  std::int64_t P = 0;
  ExactCount exact;
  double S_value = 0.0;
  double S_tail = 0.0;
  double J_value = 0.0;
  double J_err = 0.0;
  double predicted = 0.0;
  double rel_error = 0.0;
  double numeric_band = 0.0;  // relative uncertainty of S * J
  double band = 0.0;          // numeric_band + trend threshold
  Provenance provenance;

  bool operator==(const PredictionReport& o) const {
    return d == o.d && P == o.P && exact == o.exact && S_value == o.S_value && S_tail == o.S_tail &&
           J_value == o.J_value && J_err == o.J_err && predicted == o.predicted &&
           rel_error == o.rel_error && numeric_band == o.numeric_band && band == o.band &&
           provenance == o.provenance;
  }
};

// S and J do not depend on P, so trend runs compute them once.
struct PredictionComponents {
  SeriesEstimate series;
  IntegralEstimate integral;
  std::map<std::string, double> timings;
};

PredictionComponents compute_components(const FormSpec& spec, const PredictConfig& config);
PredictionReport assemble_report(const FormSpec& spec, std::int64_t P, const PredictionComponents& parts,
                                 const PredictConfig& config);
PredictionReport predict(const FormSpec& spec, std::int64_t P, const PredictConfig& config = {});

struct TrendResult {
  int d = 0;
  std::vector<PredictionReport> rows;
  double threshold = 0.0;
  int inversions = 0;
  bool monotone = false;
  bool final_ok = false;
  bool pass = false;
};

TrendResult verify_trend(const FormSpec& spec, const std::vector<std::int64_t>& P_list,
                         const PredictConfig& config = {});

// JSON
void to_json(nlohmann::ordered_json& j, const Provenance& p);
void from_json(const nlohmann::ordered_json& j, Provenance& p);
void to_json(nlohmann::ordered_json& j, const PredictionReport& r);
void from_json(const nlohmann::ordered_json& j, PredictionReport& r);
nlohmann::ordered_json trend_to_json(const TrendResult& t);

// CSV with a header row and one row per P.
std::string trend_to_csv(const TrendResult& t);
std::string report_to_csv(const PredictionReport& r);

}  // namespace cz
