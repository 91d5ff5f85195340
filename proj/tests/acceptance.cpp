// Acceptance criteria AC1..AC10. One line per criterion; nonzero exit if any fails.

#include "cz/arith.hpp"
#include "cz/counting.hpp"
#include "cz/errors.hpp"
#include "cz/expsums.hpp"
#include "cz/forms.hpp"
#include "cz/integral.hpp"
#include "cz/local.hpp"
#include "cz/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace cz;

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t ipow(std::int64_t p, int l) {
  std::int64_t q = 1;
  for (int i = 0; i < l; ++i) q *= p;
  return q;
}

int valuation(std::int64_t v, std::int64_t p, int cap) {
  if (v == 0) return cap;
  int j = 0;
  while (v % p == 0 && j < cap) {
    v /= p;
    ++j;
  }
  return j;
}

// Collects failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;
  int checks = 0;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok && failures.size() == 5) failures.push_back("...");
  }
};

std::string str(double v) {
  std::ostringstream os;
  os.precision(8);
  os << v;
  return os.str();
}

int failed = 0;

void run(const char* id, const char* title, const std::function<std::string(Check&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  std::string detail;
  try {
    detail = body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = c.failures.empty();
  if (!ok) ++failed;
  std::printf("%s %s  %s  [%d checks, %.1fs]%s%s\n", id, ok ? "PASS" : "FAIL", title, c.checks, secs,
              detail.empty() ? "" : "  ", detail.c_str());
  for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
  std::fflush(stdout);
}

// counts[j] = #{x mod p^l : v_p(f_m(x)) = j}, j = l meaning divisible by p^l.
std::vector<std::int64_t> valuation_profile(int m, std::int64_t p, int l) {
  const std::int64_t q = ipow(p, l);
  std::vector<std::int64_t> out(static_cast<std::size_t>(l) + 1, 0);
  std::vector<std::int64_t> x(static_cast<std::size_t>(m), 0);
  while (true) {
    const std::int64_t v = eval_fd<std::int64_t>(FormSpec(m), x) % q;
    ++out[static_cast<std::size_t>(valuation(v, p, l))];
    int c = m - 1;
    while (c >= 0 && x[static_cast<std::size_t>(c)] == q - 1) x[static_cast<std::size_t>(c--)] = 0;
    if (c < 0) break;
    ++x[static_cast<std::size_t>(c)];
  }
  return out;
}

// Valuation profile of w^2 + x^2 over all pairs mod p^l, grouped by the residue of w^2.
std::vector<std::int64_t> two_squares_profile(std::int64_t p, int l) {
  const std::int64_t q = ipow(p, l);
  std::vector<std::int64_t> sq(static_cast<std::size_t>(q), 0);
  for (std::int64_t w = 0; w < q; ++w) ++sq[static_cast<std::size_t>(w * w % q)];
  std::vector<std::int64_t> support;
  for (std::int64_t u = 0; u < q; ++u) {
    if (sq[static_cast<std::size_t>(u)] != 0) support.push_back(u);
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(l) + 1, 0);
  for (std::int64_t u : support) {
    for (std::int64_t v : support) {
      const std::int64_t s = (u + v) % q;
      out[static_cast<std::size_t>(valuation(s, p, l))] += sq[static_cast<std::size_t>(u)] * sq[static_cast<std::size_t>(v)];
    }
  }
  return out;
}

// Squared Gauss sum (sum_{y mod q} e(c y^2 / q))^2 from a table of q-th roots of unity.
Complex squared_gauss(const std::vector<Complex>& roots, std::int64_t q, std::int64_t c) {
  Complex g = 0.0;
  for (std::int64_t y = 0; y < q; ++y) g += roots[static_cast<std::size_t>(c * (y * y % q) % q)];
  return g * g;
}

std::vector<Complex> roots_of_unity(std::int64_t q) {
  std::vector<Complex> r(static_cast<std::size_t>(q));
  for (std::int64_t k = 0; k < q; ++k) {
    const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(q);
    r[static_cast<std::size_t>(k)] = {std::cos(t), std::sin(t)};
  }
  return r;
}

// ---------------------------------------------------------------------------

std::string ac1(Check& c) {
  int cases = 0;
  for (int d = 1; d <= 4; ++d) {
    const FormSpec spec(d);
    const int pmax = d <= 3 ? 8 : 5;
    for (int P = 1; P <= pmax; ++P) {
      const ExactCount brute = count_zeros_bruteforce(spec, P);
      const ExactCount conv = count_zeros_convolution(spec, P);
      c.expect(brute == conv, "d=" + std::to_string(d) + " P=" + std::to_string(P) + ": brute " +
                                  to_string(brute) + " vs convolution " + to_string(conv));
      ++cases;
    }
  }
  return std::to_string(cases) + " (d,P) pairs";
}

std::string ac2(Check& c) {
  for (int d = 1; d <= 6; ++d) {
    const FormSpec spec(d);
    for (int P : {1, 2, 5, 10, 20}) {
      const SparseCounts s = rep_counts_sparse(spec, P);
      const BigInt total = big_from_u128(s.total());
      const BigInt expect = big_pow(P, d);
      c.expect(total == expect, "d=" + std::to_string(d) + " P=" + std::to_string(P) + ": sum a(n) = " +
                                    to_string(total) + ", want " + to_string(expect));
      // The dense table agrees wherever it fits.
      if (std::pow(static_cast<double>(P), d) * std::ldexp(1.0, d / 2) <= 5e7) {
        const CountTable t = rep_counts(spec, P);
        c.expect(t.total() == s.total(), "d=" + std::to_string(d) + " P=" + std::to_string(P) + ": dense total differs");
      }
    }
  }
  return "d=1..6, P in {1,2,5,10,20}";
}

std::string ac3(Check& c) {
  const FormSpec spec(1);
  const SeriesEstimate S = singular_series(spec);
  c.expect(std::fabs(S.value - 1.0) <= 1e-9, "S = " + str(S.value));
  const IntegralEstimate J = J_region(spec, 10'000'000, 1);
  c.expect(std::fabs(J.value - 0.5) <= 3 * J.std_error,
           "J_region = " + str(J.value) + " +- " + str(J.std_error));
  for (std::int64_t P : {1000, 100, 10'000}) {
    const ExactCount exact = count_zeros_convolution(spec, P);
    const BigInt closed = BigInt(P) * (P - 1) / 2;
    c.expect(exact == closed, "P=" + std::to_string(P) + ": count " + to_string(exact));
  }
  PredictConfig cfg;
  cfg.j_method = IntegralMethod::cdf_reduction;
  cfg.grid = 256;
  const TrendResult t = verify_trend(spec, {100, 1000, 10'000}, cfg);
  for (const auto& r : t.rows) {
    // Exact relative error is -1/P.
    c.expect(std::fabs(r.rel_error * r.P + 1.0) < 1e-6, "P=" + std::to_string(r.P) + ": rel_error " + str(r.rel_error));
  }
  c.expect(t.inversions == 0, "rel_error does not shrink monotonically");
  return "J = " + str(J.value) + " +- " + str(J.std_error) + ", rel_error(1e4) = " + str(t.rows.back().rel_error);
}

std::string ac4(Check& c) {
  double worst = 0.0;
  for (int d = 2; d <= 5; ++d) {
    const FormSpec spec(d);
    for (std::int64_t p : primes_up_to(200)) {
      for (int l = 1; ipow(p, l) <= 200; ++l) {
        const Complex direct = S_normalized_definitional(ipow(p, l), spec);
        const double diff = std::fabs(S_local(spec, p, l) - direct.real());
        worst = std::max(worst, diff);
        c.expect(diff < 1e-8 && std::fabs(direct.imag()) < 1e-8,
                 "d=" + std::to_string(d) + " " + std::to_string(p) + "^" + std::to_string(l) + ": diff " + str(diff));
      }
    }
  }
  double worst_partial = 0.0;
  for (int d = 2; d <= 4; ++d) {
    const FormSpec spec(d);
    for (std::int64_t p : {2, 3, 5}) {
      for (int L = 1; L <= 3; ++L) {
        double sum = 1.0;
        for (int l = 1; l <= L; ++l) sum += S_local(spec, p, l);
        const double diff = std::fabs(sum - to_double(local_density_oracle(spec, p, L)));
        worst_partial = std::max(worst_partial, diff);
        c.expect(diff < 1e-9, "partial d=" + std::to_string(d) + " p=" + std::to_string(p) +
                                  " L=" + std::to_string(L) + ": diff " + str(diff));
      }
    }
  }
  return "max |S - S_def| = " + str(worst) + ", max partial diff = " + str(worst_partial);
}

std::string ac5(Check& c) {
  for (std::int64_t p : primes_up_to(37)) {
    for (int l = 1; l <= 3; ++l) {
      const auto prof = two_squares_profile(p, l);
      std::int64_t tail = 0;
      for (int j = l; j >= 0; --j) {
        tail += prof[static_cast<std::size_t>(j)];
        const std::string where = "p=" + std::to_string(p) + " l=" + std::to_string(l) + " j=" + std::to_string(j);
        c.expect(M2(p, l, j) == tail, "M2 " + where);
        if (j < l) c.expect(M2_star(p, l, j) == prof[static_cast<std::size_t>(j)], "M2* " + where);
      }
    }
  }
  for (int d = 3; d <= 6; ++d) {
    const FormSpec spec(d);
    for (std::int64_t p : {2, 3, 5, 7}) {
      for (int l = 1; l <= 2; ++l) {
        const std::string where = "d=" + std::to_string(d) + " p=" + std::to_string(p) + " l=" + std::to_string(l);
        const MStarTable t = mstar_chain(spec, p, l);
        const auto prof = valuation_profile(d - 2, p, l);
        for (int j = 0; j < l; ++j) {
          c.expect(t.star[static_cast<std::size_t>(j)] == prof[static_cast<std::size_t>(j)], "M* " + where);
        }
        c.expect(t.top == prof[static_cast<std::size_t>(l)], "top " + where);
        c.expect(BigRational(t.top) < mstar_top_bound(spec, p, l), "top bound " + where);
        if (p != 2) c.expect(abs(S1_prime_power(spec, p, l)) <= S1_prime_power_bound(spec, p, l), "S1 bound " + where);
      }
    }
  }
  return "M2 for p <= 37, l <= 3; chain for d = 3..6, p <= 7, l <= 2";
}

std::string ac6(Check& c) {
  const std::vector<std::pair<std::int64_t, std::int64_t>> pairs = {
      {2, 3},  {3, 4},   {4, 5},   {5, 7},   {8, 9},  {7, 9},   {4, 25},  {8, 25},  {16, 9},  {3, 128},
      {2, 199}, {11, 13}, {16, 25}, {5, 64}, {27, 8}, {13, 27}, {7, 16}, {9, 44}, {17, 19}, {3, 125}};
  double worst = 0.0;
  for (int d = 2; d <= 4; ++d) {
    const FormSpec spec(d);
    for (auto [a, b] : pairs) {
      const Complex lhs = S_normalized_definitional(a * b, spec);
      const Complex rhs = S_normalized_definitional(a, spec) * S_normalized_definitional(b, spec);
      const double diff = std::abs(lhs - rhs);
      worst = std::max(worst, diff);
      c.expect(diff < 1e-8, "d=" + std::to_string(d) + " q=" + std::to_string(a) + "*" + std::to_string(b) +
                                ": diff " + str(diff));
    }
  }
  return std::to_string(pairs.size()) + " pairs, max diff " + str(worst);
}

std::string ac7(Check& c) {
  double worst = 0.0;
  std::int64_t checked = 0;
  for (std::int64_t p : primes_up_to(1000)) {
    if (p == 2) continue;
    for (int l = 1; ipow(p, l) <= 1000; ++l) {
      const std::int64_t q = ipow(p, l);
      const auto roots = roots_of_unity(q);
      for (int j = 0; j <= l; ++j) {
        const std::int64_t pj = ipow(p, j);
        const std::int64_t r = q / pj;
        const Complex table = gauss_product(p, l, j);
        // The sum depends on (a, u_1) only through a u_1 mod p^{l-j}.
        std::vector<Complex> by_c(static_cast<std::size_t>(r));
        std::vector<char> have(static_cast<std::size_t>(r), 0);
        for (std::int64_t a = 1; a < q; ++a) {
          if (a % p == 0) continue;
          for (std::int64_t u1 = 1; u1 < std::max<std::int64_t>(r, 2); ++u1) {
            if (r > 1 && u1 % p == 0) continue;
            const std::int64_t cc = r == 1 ? 0 : a % r * u1 % r;
            auto& slot = by_c[static_cast<std::size_t>(cc)];
            if (!have[static_cast<std::size_t>(cc)]) {
              slot = squared_gauss(roots, q, cc * pj % q);
              have[static_cast<std::size_t>(cc)] = 1;
              const double rel = std::abs(slot - table) / std::abs(table);
              worst = std::max(worst, rel);
              c.expect(rel < 1e-6, "p=" + std::to_string(p) + " l=" + std::to_string(l) + " j=" + std::to_string(j) +
                                       " c=" + std::to_string(cc) + ": rel " + str(rel));
            }
            ++checked;
          }
        }
      }
    }
  }
  for (int l = 1; l <= 10; ++l) {
    const std::int64_t q = ipow(2, l);
    const auto roots = roots_of_unity(q);
    for (int j : {l - 1, l}) {
      const std::int64_t pj = ipow(2, j);
      const std::int64_t r = q / pj;
      const Complex table = gauss_product(2, l, j);
      for (std::int64_t a = 1; a < q; a += 2) {
        for (std::int64_t u1 = 1; u1 < std::max<std::int64_t>(r, 2); u1 += 2) {
          const Complex direct = squared_gauss(roots, q, a * u1 % q * pj % q);
          const double err = std::abs(direct - table) / static_cast<double>(q * q);
          worst = std::max(worst, err);
          c.expect(err < 1e-6, "p=2 l=" + std::to_string(l) + " j=" + std::to_string(j) + " a=" + std::to_string(a));
          ++checked;
        }
      }
    }
  }
  return std::to_string(checked) + " (a, u1) cases, max rel err " + str(worst);
}

std::string ac8(Check& c) {
  const FormSpec two(2);
  double C = 0.0;
  for (double g = 1.0; g <= 10.0; g += 0.05) {
    C = std::max(C, std::abs(inner_integral(two, g, 1000, 1).value) * std::pow(g, 2.5));
  }
  std::string detail = "C = " + str(C);
  for (double g : {100.0, 1000.0}) {
    const double v = std::abs(inner_integral(two, g, 1000, 1).value);
    const double bound = std::min(1.0, C * std::pow(g, -2.5));
    c.expect(v <= bound, "|I(" + str(g) + ")| = " + str(v) + " > " + str(bound));
    detail += ", |I(" + str(g) + ")| = " + str(v);
  }
  for (int d = 1; d <= 4; ++d) {
    const FormSpec spec(d);
    const IntegralEstimate mc = J_region(spec, 10'000'000, 1);
    const IntegralEstimate grid = J_cdf(spec, 4096);
    const double gap = std::fabs(mc.value - grid.value);
    const double allowed = 3 * (mc.std_error + grid.std_error);
    c.expect(gap <= allowed, "d=" + std::to_string(d) + ": region " + str(mc.value) + " +- " + str(mc.std_error) +
                                 " vs cdf " + str(grid.value) + " +- " + str(grid.std_error));
    detail += "; d=" + std::to_string(d) + " J=" + str(grid.value) + " gap/allowed=" + str(gap / allowed);
  }
  return detail;
}

std::string ac9(Check& c) {
  std::string detail;
  const std::vector<std::pair<int, std::vector<std::int64_t>>> runs = {
      {2, {16, 32, 64, 128}}, {3, {8, 16, 32}}, {4, {16, 32, 64}}};
  for (const auto& [d, Ps] : runs) {
    const TrendResult t = verify_trend(FormSpec(d), Ps);
    std::string errs;
    for (const auto& r : t.rows) errs += (errs.empty() ? "" : ",") + str(r.rel_error);
    c.expect(t.pass, "d=" + std::to_string(d) + ": rel_error [" + errs + "], inversions " +
                         std::to_string(t.inversions) + ", threshold " + str(t.threshold));
    detail += (detail.empty() ? "" : "; ") + ("d=" + std::to_string(d) + " [" + errs + "]");
  }
  return detail;
}

std::string ac10(Check& c) {
  std::string detail;
  for (int P : {50, 100}) {
    const double p = P;
    const double r3 = count_degenerate_zeros(FormSpec(3), P).get_d() / (16.0 * std::pow(p, 4));
    const double r4 = count_degenerate_zeros(FormSpec(4), P).get_d() / (4.0 * 16.0 * std::pow(p, 4));
    c.expect(r3 >= 0.9 && r3 <= 1.2, "d=3 P=" + std::to_string(P) + ": ratio " + str(r3));
    c.expect(r4 >= 0.9 && r4 <= 1.2, "d=4 P=" + std::to_string(P) + ": ratio " + str(r4));
    detail += (detail.empty() ? "" : ", ") + ("P=" + std::to_string(P) + ": " + str(r3) + " / " + str(r4));
  }
  return detail;
}

}  // namespace

int main() {
  run("AC1", "brute force equals convolution", ac1);
  run("AC2", "representation counts sum to P^d", ac2);
  run("AC3", "d = 1 closed forms", ac3);
  run("AC4", "local factors against definitions", ac4);
  run("AC5", "two-squares valuation counts", ac5);
  run("AC6", "multiplicativity of S(q)", ac6);
  run("AC7", "squared Gauss sum table", ac7);
  run("AC8", "oscillatory decay and J cross-check", ac8);
  run("AC9", "asymptotic trend of the prediction", ac9);
  run("AC10", "degenerate zero counts", ac10);
  std::printf("%s: %d of 10 criteria failed\n", failed == 0 ? "ALL PASS" : "FAILURES", failed);
  return failed == 0 ? 0 : 1;
}
