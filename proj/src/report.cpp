#include "cz/report.hpp"

#include "cz/errors.hpp"
#include "cz/expsums.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace cz {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string count_method_name(CountMethod m) {
  return m == CountMethod::bruteforce ? "bruteforce" : "convolution";
}

// Enough digits to read back the same double.
std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double default_threshold(int d) { return d <= 3 ? 0.15 : 0.25; }

PredictionComponents compute_components(const FormSpec& spec, const PredictConfig& config) {
  PredictionComponents parts;
  auto t0 = Clock::now();
  parts.series = singular_series(spec, config.series);
  parts.timings["series"] = seconds_since(t0);

  t0 = Clock::now();
  switch (config.j_method) {
    case IntegralMethod::region_mc:
      parts.integral = J_region(spec, config.samples, config.seed);
      break;
    case IntegralMethod::cdf_reduction:
      parts.integral = J_cdf(spec, config.grid);
      break;
    case IntegralMethod::oscillatory_truncated:
      throw InputError("predict: J must come from region_mc or cdf_reduction");
  }
  parts.timings["integral"] = seconds_since(t0);
  return parts;
}

PredictionReport assemble_report(const FormSpec& spec, std::int64_t P, const PredictionComponents& parts,
                                 const PredictConfig& config) {
  if (P < 1) throw InputError("box side P must be >= 1");
  const int d = spec.d();
  PredictionReport r;
  r.d = d;
  r.P = P;

  const auto t0 = Clock::now();
  try {
    r.exact = count_zeros_exact(spec, P, config.count_method, config.budget);
  } catch (const CapacityError& e) {
    throw CapacityError("predict d=" + std::to_string(d) + " P=" + std::to_string(P) + ": " + e.what());
  }
  const double count_time = seconds_since(t0);

  r.S_value = parts.series.value;
  r.S_tail = parts.series.tail_bound;
  r.J_value = parts.integral.value;
  r.J_err = parts.integral.std_error;
  r.predicted = std::pow(static_cast<double>(P), d + 1) * r.S_value * r.J_value;
  if (!(r.predicted > 0.0)) {
    throw AnomalyError("predicted count " + fmt(r.predicted) + " is not positive");
  }
  r.rel_error = (r.exact.get_d() - r.predicted) / r.predicted;
  r.numeric_band = r.S_tail / r.S_value + 3.0 * r.J_err / r.J_value;
  const double threshold = config.threshold >= 0 ? config.threshold : default_threshold(d);
  r.band = r.numeric_band + threshold;

  auto& pv = r.provenance;
  pv.seed = parts.integral.method == IntegralMethod::region_mc ? config.seed : 0;
  pv.samples = parts.integral.method == IntegralMethod::region_mc ? parts.integral.samples : 0;
  pv.grid = parts.integral.method == IntegralMethod::cdf_reduction ? parts.integral.samples : 0;
  pv.j_method = to_string(parts.integral.method);
  pv.count_method = count_method_name(config.count_method);
  pv.prime_bound = config.series.prime_bound;
  pv.tol = config.series.tol;
  pv.max_level_p2 = config.series.max_level_p2;
  for (const auto& f : parts.series.factors) pv.level_capped = pv.level_capped || f.level_capped;
  pv.delta = config.delta > 0 ? config.delta : default_delta(d);
  pv.error_exponent = 1.0 / (1.0 + 5.0 * std::ldexp(1.0, d - 1));
  pv.threads = config.threads;
  if (config.timing) {
    pv.timings = parts.timings;
    pv.timings["count"] = count_time;
  }
  return r;
}

PredictionReport predict(const FormSpec& spec, std::int64_t P, const PredictConfig& config) {
  return assemble_report(spec, P, compute_components(spec, config), config);
}

TrendResult verify_trend(const FormSpec& spec, const std::vector<std::int64_t>& P_list,
                         const PredictConfig& config) {
  if (P_list.size() < 3) throw InputError("verify: need at least three values of P");
  for (std::size_t i = 1; i < P_list.size(); ++i) {
    if (P_list[i] <= P_list[i - 1]) throw InputError("verify: P values must be strictly ascending");
  }
  TrendResult t;
  t.d = spec.d();
  t.threshold = config.threshold >= 0 ? config.threshold : default_threshold(spec.d());
  const PredictionComponents parts = compute_components(spec, config);
  for (std::int64_t P : P_list) t.rows.push_back(assemble_report(spec, P, parts, config));
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if (std::fabs(t.rows[i].rel_error) > std::fabs(t.rows[i - 1].rel_error)) ++t.inversions;
  }
  t.monotone = t.inversions <= 1;
  t.final_ok = std::fabs(t.rows.back().rel_error) <= t.threshold;
  t.pass = t.monotone && t.final_ok;
  return t;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

void to_json(nlohmann::ordered_json& j, const Provenance& p) {
  j = nlohmann::ordered_json{{"seed", p.seed},
                             {"samples", p.samples},
                             {"grid", p.grid},
                             {"j_method", p.j_method},
                             {"count_method", p.count_method},
                             {"prime_bound", p.prime_bound},
                             {"tol", p.tol},
                             {"max_level_p2", p.max_level_p2},
                             {"level_capped", p.level_capped},
                             {"delta", p.delta},
                             {"error_exponent", p.error_exponent},
                             {"threads", p.threads}};
  if (!p.timings.empty()) j["timings"] = p.timings;
}

void from_json(const nlohmann::ordered_json& j, Provenance& p) {
  j.at("seed").get_to(p.seed);
  j.at("samples").get_to(p.samples);
  j.at("grid").get_to(p.grid);
  j.at("j_method").get_to(p.j_method);
  j.at("count_method").get_to(p.count_method);
  j.at("prime_bound").get_to(p.prime_bound);
  j.at("tol").get_to(p.tol);
  j.at("max_level_p2").get_to(p.max_level_p2);
  j.at("level_capped").get_to(p.level_capped);
  j.at("delta").get_to(p.delta);
  j.at("error_exponent").get_to(p.error_exponent);
  j.at("threads").get_to(p.threads);
  p.timings.clear();
  if (j.contains("timings")) j.at("timings").get_to(p.timings);
}

void to_json(nlohmann::ordered_json& j, const PredictionReport& r) {
  j = nlohmann::ordered_json{{"d", r.d},
                             {"p", r.P},
                             {"exact", to_string(r.exact)},
                             {"S_value", r.S_value},
                             {"S_tail", r.S_tail},
                             {"J_value", r.J_value},
                             {"J_err", r.J_err},
                             {"predicted", r.predicted},
                             {"rel_error", r.rel_error},
                             {"numeric_band", r.numeric_band},
                             {"band", r.band},
                             {"provenance", r.provenance}};
}

void from_json(const nlohmann::ordered_json& j, PredictionReport& r) {
  j.at("d").get_to(r.d);
  j.at("p").get_to(r.P);
  const auto exact = j.at("exact").get<std::string>();
  if (r.exact.set_str(exact, 10) != 0) throw InputError("exact count '" + exact + "' is not an integer");
  j.at("S_value").get_to(r.S_value);
  j.at("S_tail").get_to(r.S_tail);
  j.at("J_value").get_to(r.J_value);
  j.at("J_err").get_to(r.J_err);
  j.at("predicted").get_to(r.predicted);
  j.at("rel_error").get_to(r.rel_error);
  j.at("numeric_band").get_to(r.numeric_band);
  j.at("band").get_to(r.band);
  j.at("provenance").get_to(r.provenance);
}

nlohmann::ordered_json trend_to_json(const TrendResult& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) rows.push_back(r);
  return {{"d", t.d},         {"threshold", t.threshold}, {"inversions", t.inversions},
          {"monotone", t.monotone}, {"final_ok", t.final_ok}, {"pass", t.pass},
          {"rows", rows}};
}

namespace {
const char* kCsvHeader = "d,P,exact,S_value,S_tail,J_value,J_err,predicted,rel_error,band\n";

std::string csv_row(const PredictionReport& r) {
  std::ostringstream os;
  os << r.d << ',' << r.P << ',' << to_string(r.exact) << ',' << fmt(r.S_value) << ',' << fmt(r.S_tail)
     << ',' << fmt(r.J_value) << ',' << fmt(r.J_err) << ',' << fmt(r.predicted) << ','
     << fmt(r.rel_error) << ',' << fmt(r.band) << '\n';
  return os.str();
}
}  // namespace

std::string report_to_csv(const PredictionReport& r) { return kCsvHeader + csv_row(r); }

std::string trend_to_csv(const TrendResult& t) {
  std::string out = kCsvHeader;
  for (const auto& r : t.rows) out += csv_row(r);
  return out;
}

}  // namespace cz
