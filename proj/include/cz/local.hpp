#pragma once

// Local factors of the singular series.
//
// For a prime power p^l and odd p, S_1(p^l, a) does not depend on a and is
//
//   S_1(p^l) = p^{2l} M_{d-2}(p,l,l) + sum_{j<l} M*_{d-2}(p,l,j) G(p,l,j),
//
// where M*_{d-2}(p,l,j) counts (d-2)-tuples mod p^l on which f_{d-2} has
// p-adic valuation exactly j, and G(p,l,j) is the squared Gauss sum table.
// Then S(p^l) = p^{-(2d+1)l} S_1(p^l)^2 T(p^l) is an exact rational.
// At p = 2 the Gauss sums depend on a mod 4, so S(2^l) is always summed over
// a directly from the residue-count route.

#include "cz/arith.hpp"
#include "cz/expsums.hpp"
#include "cz/forms.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cz {

// #{(w,x) mod p^l : p^j | w^2 + x^2}, 0 <= j <= l.
BigInt M2(std::int64_t p, int l, int j);
// #{(w,x) mod p^l : p^j || w^2 + x^2}, 0 <= j <= l-1.
BigInt M2_star(std::int64_t p, int l, int j);

struct MStarTable {
  std::int64_t p = 0;
  int l = 0;
  std::vector<BigInt> star;  // star[j] = M*_{d-2}(p,l,j), j = 0..l-1
  BigInt top;                // M_{d-2}(p,l,l)
};

MStarTable mstar_chain(const FormSpec& spec, std::int64_t p, int l);

// Upper bounds used as sanity checks on computed tables:
//   even d: top < (l+1)^{2k-2} p^{2kl-3l};  odd d: top < (l+1)^{2k-1} p^{2kl-2l}.
BigRational mstar_top_bound(const FormSpec& spec, std::int64_t p, int l);
// (p^l)^{d-1} d(p^l)^{d-1}.
BigInt S1_prime_power_bound(const FormSpec& spec, std::int64_t p, int l);

// Odd p only.
BigInt S1_prime_power(const FormSpec& spec, std::int64_t p, int l);
// The same formula evaluated at p = 2 with the case table taken literally,
// as (real, imaginary). Diagnostic only.
std::pair<BigInt, BigInt> S1_table_route_p2(const FormSpec& spec, int l);

// sum_{(a,p^l)=1} S_2(p^l, a) in closed form.
BigInt T_prime_power(const FormSpec& spec, std::int64_t p, int l);

// Exact S(p^l) for odd p.
BigRational S_local_exact(const FormSpec& spec, std::int64_t p, int l);
// S(p^l) for any prime; p = 2 uses the direct a-sum.
double S_local(const FormSpec& spec, std::int64_t p, int l, const ExpsumBudget& budget = {});
double S_local_p2_direct(const FormSpec& spec, int l, const ExpsumBudget& budget = {});
// p^{-(2d+1)l} S1_table^2 T(2^l) with the literal case table; not authoritative.
double S_local_p2_table_route(const FormSpec& spec, int l);

// #{x mod p^L : f(x) = 0 mod p^L} / p^{2dL}, by residue-count convolution.
BigRational local_density_oracle(const FormSpec& spec, std::int64_t p, int L,
                                 const ExpsumBudget& budget = {});

// ---------------------------------------------------------------------------
// Singular series
// ---------------------------------------------------------------------------

struct SeriesConfig {
  std::int64_t prime_bound = 1000;
  double tol = 1e-6;
  int min_level = 2;
  int max_level = 60;
  int max_level_p2 = 13;
  ExpsumBudget budget{};
};

struct LocalFactor {
  std::int64_t p = 0;
  int L = 0;
  std::vector<double> terms;             // S(p^l), l = 1..L
  std::vector<BigRational> exact_terms;  // odd p only
  std::vector<double> table_route_terms; // p = 2 only, diagnostic
  double sigma = 1.0;                    // 1 + sum of terms
  double C = 0.0;                        // max_l |S(p^l)| p^{(1+1/d) l}
  double tail = 0.0;                     // geometric bound on the omitted levels
  bool level_capped = false;             // stopped by max_level rather than tol
};

LocalFactor local_factor(const FormSpec& spec, std::int64_t p, const SeriesConfig& config = {});

enum class SeriesMode { euler, partial_sum };

struct SeriesEstimate {
  double value = 0.0;
  std::int64_t prime_bound = 0;  // Q for partial sums
  double tail_bound = 0.0;
  SeriesMode mode = SeriesMode::euler;
  double C = 0.0;
  std::vector<LocalFactor> factors;
};

// Euler product over p <= prime_bound. Throws AnomalyError on sigma_p <= 0.
SeriesEstimate singular_series(const FormSpec& spec, const SeriesConfig& config = {});
// sum_{q <= Q} S(q) with S(q) assembled multiplicatively from S(p^l).
SeriesEstimate singular_series_partial(const FormSpec& spec, std::int64_t Q,
                                       const SeriesConfig& config = {});
// S(q) = prod over p^l || q of S(p^l).
double S_multiplicative(const FormSpec& spec, std::int64_t q, const ExpsumBudget& budget = {});

}  // namespace cz
