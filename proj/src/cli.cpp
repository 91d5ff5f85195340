#include "cz/cli.hpp"

#include "cz/counting.hpp"
#include "cz/errors.hpp"
#include "cz/expsums.hpp"
#include "cz/integral.hpp"
#include "cz/local.hpp"
#include "cz/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>

namespace cz {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Globals {
  int d = 0;
  std::int64_t P = 0;
  bool json = false;
  bool csv = false;
  std::uint64_t seed = 1;
  int threads = 0;
  std::uint64_t budget_points = Budget{}.bruteforce_points;
  std::uint64_t budget_table = Budget{}.table_entries;
  std::int64_t budget_modulus = ExpsumBudget{}.max_modulus;
  std::int64_t prime_bound = SeriesConfig{}.prime_bound;
  double tol = SeriesConfig{}.tol;
  std::string out_file;
  bool no_timing = false;

  Budget budget() const { return {budget_points, budget_table}; }
  ExpsumBudget expsum_budget() const { return {budget_modulus}; }
  SeriesConfig series() const {
    SeriesConfig c;
    c.prime_bound = prime_bound;
    c.tol = tol;
    c.budget = expsum_budget();
    return c;
  }
  FormSpec spec() const {
    if (d == 0) throw InputError("--d is required");
    return FormSpec(d);
  }
  std::int64_t box() const {
    if (P < 1) throw InputError("--p is required and must be >= 1");
    return P;
  }
};

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

std::string csv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// One header row of the scalar fields and one value row.
std::string flat_csv(const Json& obj) {
  std::string head, row;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (it->is_structured()) continue;
    if (!head.empty()) {
      head += ',';
      row += ',';
    }
    head += it.key();
    row += csv_cell(*it);
  }
  return head + '\n' + row + '\n';
}

std::string table_csv(const Json& rows) {
  std::string out;
  bool first = true;
  for (const auto& r : rows) {
    if (first) {
      std::string head;
      for (auto it = r.begin(); it != r.end(); ++it) head += (head.empty() ? "" : ",") + it.key();
      out += head + '\n';
      first = false;
    }
    std::string line;
    bool start = true;
    for (auto it = r.begin(); it != r.end(); ++it) {
      line += (start ? "" : ",") + csv_cell(*it);
      start = false;
    }
    out += line + '\n';
  }
  return out;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

CountMethod parse_count_method(const std::string& s) {
  if (s == "bruteforce") return CountMethod::bruteforce;
  if (s == "convolution") return CountMethod::convolution;
  throw InputError("unknown count method '" + s + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact zero counts and circle-method predictions for f_d(x) + f_d(y) - z^d", "czcount"};
  app.fallthrough();
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Globals g;
  app.add_option("--d", g.d, "Degree d >= 1");
  app.add_option("--p", g.P, "Box side P");
  auto* json_flag = app.add_flag("--json", g.json, "JSON output");
  auto* csv_flag = app.add_flag("--csv", g.csv, "CSV output");
  json_flag->excludes(csv_flag);
  app.add_option("--seed", g.seed, "Monte-Carlo seed");
  app.add_option("--threads", g.threads, "OpenMP threads (else CZ_THREADS)");
  app.add_option("--budget-points", g.budget_points, "Brute-force point budget");
  app.add_option("--budget-table", g.budget_table, "Representation table entry budget");
  app.add_option("--budget-modulus", g.budget_modulus, "Largest modulus for residue tables");
  app.add_option("--prime-bound", g.prime_bound, "Euler product prime bound");
  app.add_option("--tol", g.tol, "Per-prime truncation tolerance");
  app.add_option("--out", g.out_file, "Write output to FILE");
  app.add_flag("--no-timing", g.no_timing, "Omit timings from the output");

  // count
  auto* count_cmd = app.add_subcommand("count", "Exact number of zeros of f in [1,P]^{2d+1}");
  std::string count_method = "convolution";
  bool degenerate = false;
  count_cmd->add_option("--method", count_method, "bruteforce | convolution");
  count_cmd->add_flag("--degenerate", degenerate, "Count zeros in [-P,P]^{2d+1} with both halves and z vanishing");

  // repcounts
  auto* rep_cmd = app.add_subcommand("repcounts", "Representation counts a(n) of f_d over [1,P]^d");
  std::uint64_t rep_limit = 0;
  rep_cmd->add_option("--limit", rep_limit, "Largest n (default: all)");

  // expsum
  auto* exp_cmd = app.add_subcommand("expsum", "Complete exponential sums or generating functions");
  std::int64_t exp_q = 0;
  std::optional<std::int64_t> exp_a;
  std::optional<double> exp_alpha;
  exp_cmd->add_option("--q", exp_q, "Modulus q");
  exp_cmd->add_option("--a", exp_a, "Residue a coprime to q");
  exp_cmd->add_option("--alpha", exp_alpha, "Evaluate F_1, F_2, F at alpha over [1,P]");

  // series
  auto* series_cmd = app.add_subcommand("series", "Singular series");
  std::optional<std::int64_t> partial_q;
  int max_level_p2 = SeriesConfig{}.max_level_p2;
  series_cmd->add_option("--partial", partial_q, "Partial sum over q <= Q instead of the Euler product");
  series_cmd->add_option("--max-level-p2", max_level_p2, "Largest l used for 2^l");

  // local-density
  auto* local_cmd = app.add_subcommand("local-density", "S(p^l) for l <= L against the count of zeros mod p^L");
  std::int64_t local_p = 0;
  int local_L = 0;
  local_cmd->add_option("--prime", local_p, "Prime p")->required();
  local_cmd->add_option("--level", local_L, "Level L")->required();

  // integral
  auto* int_cmd = app.add_subcommand("integral", "Singular integral J, J(mu) or I(gamma)");
  std::string int_method = "region";
  std::optional<std::int64_t> int_samples;
  std::int64_t int_grid = 4096;
  double int_mu = 32;
  std::optional<double> int_gamma;
  int_cmd->add_option("--method", int_method, "region | cdf | truncated");
  int_cmd->add_option("--samples", int_samples, "Monte-Carlo samples");
  int_cmd->add_option("--grid", int_grid, "Grid resolution for cdf");
  int_cmd->add_option("--mu", int_mu, "Truncation mu for truncated");
  int_cmd->add_option("--gamma", int_gamma, "Evaluate the oscillatory integral I(gamma)");

  // predict / verify share their options
  PredictConfig pc;
  std::string pred_count = "convolution";
  std::string pred_j = "cdf";
  std::optional<double> threshold;
  auto add_predict_options = [&](CLI::App* cmd) {
    cmd->add_option("--method", pred_count, "Count method: bruteforce | convolution");
    cmd->add_option("--j-method", pred_j, "cdf | region");
    cmd->add_option("--grid", pc.grid, "Grid resolution for cdf");
    cmd->add_option("--samples", pc.samples, "Samples for region");
    cmd->add_option("--threshold", threshold, "Trend threshold on |rel_error|");
  };
  auto* pred_cmd = app.add_subcommand("predict", "Compare R(0;P) with P^{d+1} S J");
  add_predict_options(pred_cmd);
  auto* verify_cmd = app.add_subcommand("verify", "Trend of rel_error over several P");
  std::vector<std::int64_t> p_list;
  verify_cmd->add_option("--p-list", p_list, "Ascending list of P")->delimiter(',')->required();
  add_predict_options(verify_cmd);

  // arcs
  auto* arcs_cmd = app.add_subcommand("arcs", "Major/minor arc classification of alpha");
  double arc_alpha = 0;
  std::optional<double> arc_delta;
  arcs_cmd->add_option("--alpha", arc_alpha, "alpha")->required();
  arcs_cmd->add_option("--delta", arc_delta, "Major arc exponent (default from d)");

  std::vector<std::string> argv_store{"czcount"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (g.threads == 0) {
      if (const char* env = std::getenv("CZ_THREADS")) g.threads = std::atoi(env);
    }
    if (g.threads < 0) throw InputError("--threads must be >= 0");
    if (g.threads > 0) omp_set_num_threads(g.threads);

    Json result;
    std::optional<std::string> csv;  // set when a subcommand has a natural table
    bool csv_default = false;
    int exit_code = 0;

    if (count_cmd->parsed()) {
      const FormSpec spec = g.spec();
      const std::int64_t P = g.box();
      const auto t0 = Clock::now();
      result["d"] = spec.d();
      result["p"] = P;
      if (degenerate) {
        result["count"] = to_string(count_degenerate_zeros(spec, P));
        result["region"] = "[-P,P]^(2d+1), degenerate";
      } else {
        const CountMethod m = parse_count_method(count_method);
        result["count"] = to_string(count_zeros_exact(spec, P, m, g.budget()));
        result["method"] = count_method;
      }
      if (!g.no_timing) result["seconds"] = seconds_since(t0);
    } else if (rep_cmd->parsed()) {
      const FormSpec spec = g.spec();
      const std::int64_t P = g.box();
      Json rows = Json::array();
      std::string total;
      bool complete = true;
      if (rep_limit > 0) {
        const CountTable t = rep_counts_upto(spec, P, rep_limit, g.budget());
        for (std::size_t n = 0; n < t.values.size(); ++n) {
          if (t.values[n] != 0) rows.push_back(Json{{"n", n}, {"a", t.values[n]}});
        }
        complete = t.complete();
        total = to_string(t.total());
      } else {
        const SparseCounts s = rep_counts_sparse(spec, P, g.budget());
        for (std::size_t i = 0; i < s.keys.size(); ++i) rows.push_back(Json{{"n", s.keys[i]}, {"a", s.counts[i]}});
        total = to_string(s.total());
      }
      result["d"] = spec.d();
      result["p"] = P;
      if (rep_limit > 0) result["limit"] = rep_limit;
      result["complete"] = complete;
      result["total"] = total;
      result["counts"] = rows;
      csv = table_csv(rows);
    } else if (exp_cmd->parsed()) {
      const FormSpec spec = g.spec();
      result["d"] = spec.d();
      if (exp_alpha) {
        const std::int64_t P = g.box();
        const Complex f1 = F1(spec, P, *exp_alpha, g.budget());
        const Complex f2 = F2(spec, P, *exp_alpha);
        result["p"] = P;
        result["alpha"] = *exp_alpha;
        result["F1"] = complex_json(f1);
        result["F2"] = complex_json(f2);
        result["F"] = complex_json(f1 * f1 * f2);
      } else {
        if (exp_q < 1) throw InputError("--q is required and must be >= 1");
        const ExpsumBudget b = g.expsum_budget();
        result["q"] = exp_q;
        if (exp_a) {
          result["a"] = *exp_a;
          result["S1"] = complex_json(S1(exp_q, *exp_a, spec, b));
          result["S2"] = complex_json(S2(exp_q, *exp_a, spec, b));
          result["S"] = complex_json(S(exp_q, *exp_a, spec, b));
        } else {
          result["S_normalized"] = complex_json(S_normalized_definitional(exp_q, spec, b));
          result["S_multiplicative"] = S_multiplicative(spec, exp_q, b);
          result["T"] = to_string(T(exp_q, spec));
        }
      }
    } else if (series_cmd->parsed()) {
      const FormSpec spec = g.spec();
      SeriesConfig cfg = g.series();
      cfg.max_level_p2 = max_level_p2;
      const auto t0 = Clock::now();
      const SeriesEstimate est = partial_q ? singular_series_partial(spec, *partial_q, cfg) : singular_series(spec, cfg);
      result["d"] = spec.d();
      result["mode"] = est.mode == SeriesMode::euler ? "euler" : "partial_sum";
      result["value"] = est.value;
      result["tail"] = est.tail_bound;
      result["prime_bound"] = est.prime_bound;
      result["tol"] = cfg.tol;
      result["C"] = est.C;
      Json rows = Json::array();
      for (const auto& f : est.factors) {
        rows.push_back(Json{{"p", f.p}, {"L", f.L}, {"sigma", f.sigma}, {"tail", f.tail}, {"capped", f.level_capped}});
      }
      result["factors"] = rows;
      if (!g.no_timing) result["seconds"] = seconds_since(t0);
      if (!rows.empty()) csv = table_csv(rows);
    } else if (local_cmd->parsed()) {
      const FormSpec spec = g.spec();
      if (local_L < 1) throw InputError("--level must be >= 1");
      const ExpsumBudget b = g.expsum_budget();
      Json rows = Json::array();
      BigRational exact_sum = 1;
      bool all_exact = local_p != 2;
      double sum = 1.0;
      for (int l = 1; l <= local_L; ++l) {
        Json row{{"l", l}};
        if (all_exact) {
          const BigRational s = S_local_exact(spec, local_p, l);
          exact_sum += s;
          row["S"] = to_double(s);
          row["S_exact"] = s.get_str();
          sum += to_double(s);
        } else {
          const double s = S_local(spec, local_p, l, b);
          row["S"] = s;
          sum += s;
        }
        rows.push_back(row);
      }
      const BigRational oracle = local_density_oracle(spec, local_p, local_L, b);
      result["d"] = spec.d();
      result["prime"] = local_p;
      result["level"] = local_L;
      result["partial_sum"] = sum;
      if (all_exact) result["partial_sum_exact"] = exact_sum.get_str();
      result["density"] = to_double(oracle);
      result["density_exact"] = oracle.get_str();
      result["difference"] = sum - to_double(oracle);
      result["terms"] = rows;
      csv = table_csv(rows);
    } else if (int_cmd->parsed()) {
      const FormSpec spec = g.spec();
      result["d"] = spec.d();
      const auto t0 = Clock::now();
      if (int_gamma) {
        const ComplexEstimate e = inner_integral(spec, *int_gamma, int_samples.value_or(100'000), g.seed);
        result["gamma"] = *int_gamma;
        result["value"] = complex_json(e.value);
        result["abs"] = std::abs(e.value);
        result["std_error"] = e.std_error;
        result["samples"] = e.samples;
        result["seed"] = e.seed;
      } else {
        const IntegralMethod m = integral_method_from_string(int_method);
        IntegralEstimate e;
        switch (m) {
          case IntegralMethod::region_mc:
            e = J_region(spec, int_samples.value_or(10'000'000), g.seed);
            break;
          case IntegralMethod::cdf_reduction:
            e = J_cdf(spec, int_grid);
            break;
          case IntegralMethod::oscillatory_truncated:
            e = J_truncated(spec, int_mu, int_samples.value_or(20'000), g.seed);
            result["mu"] = int_mu;
            break;
        }
        result["method"] = to_string(e.method);
        result["value"] = e.value;
        result["std_error"] = e.std_error;
        result[m == IntegralMethod::cdf_reduction ? "grid" : "samples"] = e.samples;
        if (m != IntegralMethod::cdf_reduction) result["seed"] = e.seed;
      }
      if (!g.no_timing) result["seconds"] = seconds_since(t0);
    } else if (pred_cmd->parsed() || verify_cmd->parsed()) {
      const FormSpec spec = g.spec();
      pc.count_method = parse_count_method(pred_count);
      pc.j_method = integral_method_from_string(pred_j);
      pc.budget = g.budget();
      pc.series = g.series();
      pc.seed = g.seed;
      pc.threads = g.threads;
      pc.timing = !g.no_timing;
      if (threshold) pc.threshold = *threshold;
      if (pred_cmd->parsed()) {
        const PredictionReport r = predict(spec, g.box(), pc);
        result = r;
        csv = report_to_csv(r);
      } else {
        const TrendResult t = verify_trend(spec, p_list, pc);
        result = trend_to_json(t);
        csv = trend_to_csv(t);
        csv_default = true;
        if (!t.pass) {
          err << "trend check failed: inversions=" << t.inversions << " final |rel_error|="
              << std::fabs(t.rows.back().rel_error) << " threshold=" << t.threshold << '\n';
          exit_code = 4;
        }
      }
    } else if (arcs_cmd->parsed()) {
      const FormSpec spec = g.spec();
      const std::int64_t P = g.box();
      const double delta = arc_delta.value_or(default_delta(spec.d()));
      const ArcClass c = classify_arc(spec, arc_alpha, P, delta);
      const double qbound = std::min(1e15, std::pow(static_cast<double>(P), spec.d() - delta));
      const RationalApprox r = dirichlet_approx(arc_alpha > 1.0 ? arc_alpha - 1.0 : arc_alpha,
                                                std::max<std::int64_t>(1, static_cast<std::int64_t>(qbound)));
      result["d"] = spec.d();
      result["p"] = P;
      result["alpha"] = arc_alpha;
      result["delta"] = delta;
      result["major"] = c.major;
      if (c.major) {
        result["q"] = c.q;
        result["a"] = c.a;
      }
      result["approx"] = Json{{"a", r.a}, {"q", r.q}, {"err", r.err}};
      result["weyl_envelope"] = weyl_envelope(static_cast<double>(P), spec.d(), delta);
    }

    const bool want_csv = g.csv || (csv_default && !g.json);
    const std::string text = want_csv ? csv.value_or(flat_csv(result)) : result.dump() + '\n';
    if (!g.out_file.empty()) {
      std::ofstream f(g.out_file);
      if (!f) throw InputError("cannot open output file '" + g.out_file + "'");
      f << text;
    } else {
      out << text;
    }
    return exit_code;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const std::bad_alloc&) {
    err << "capacity error: out of memory\n";
    return 3;
  } catch (const AnomalyError& e) {
    err << "anomaly: " << e.what() << '\n';
    return 4;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "anomaly: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace cz
