#include "cz/local.hpp"

#include "cz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace cz {

namespace {

void require_prime(std::int64_t p) {
  if (!is_prime(p)) throw InputError("expected a prime, got " + std::to_string(p));
}

BigInt P(std::int64_t p, long e) { return big_pow(p, e); }

// Exact squared Gauss sum G(p,l,j) for odd p.
BigInt gauss_product_odd(std::int64_t p, int l, int j) {
  if (j == l) return P(p, 2L * l);
  BigInt g = P(p, l + j);
  if (p % 4 == 3 && (l + j) % 2 == 1) g = -g;
  return g;
}

std::vector<BigInt> truncated_convolution(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<BigInt> out(a.size(), BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < a.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

double abs_pow_scale(double value, std::int64_t p, int l, int d) {
  return std::fabs(value) * std::pow(static_cast<double>(p), (1.0 + 1.0 / d) * l);
}

}  // namespace

// ---------------------------------------------------------------------------
// Two-variable counts
// ---------------------------------------------------------------------------

BigInt M2(std::int64_t p, int l, int j) {
  require_prime(p);
  if (l < 1 || j < 0 || j > l) throw InputError("M2: need l >= 1 and 0 <= j <= l");
  if (j == 0) return P(p, 2L * l);
  if (p == 2) return P(2, 2L * l - j);
  const int half = (j + 1) / 2;
  BigInt base = P(p, 2L * l - 2L * half);
  if (p % 4 == 3) return base;
  // 2 * half * p^{2l-j} (1 - 1/p) = 2 * half * p^{2l-j-1} (p - 1)
  return base + 2 * half * P(p, 2L * l - j - 1) * (p - 1);
}

BigInt M2_star(std::int64_t p, int l, int j) {
  require_prime(p);
  if (l < 1 || j < 0 || j > l - 1) throw InputError("M2_star: need l >= 1 and 0 <= j <= l-1");
  if (p == 2) return P(2, 2L * l - j - 1);
  if (p % 4 == 1) return (j + 1) * P(p, 2L * l - j - 2) * (p - 1) * (p - 1);
  if (j % 2 == 1) return 0;
  return P(p, 2L * l - j - 2) * (p * p - 1);
}

// ---------------------------------------------------------------------------
// (d-2)-variable chain
// ---------------------------------------------------------------------------

MStarTable mstar_chain(const FormSpec& spec, std::int64_t p, int l) {
  require_prime(p);
  if (l < 1) throw InputError("mstar_chain: level must be >= 1");
  const int d = spec.d();
  MStarTable t{p, l, std::vector<BigInt>(static_cast<std::size_t>(l), BigInt(0)), BigInt(0)};
  if (d == 1) return t;  // M_{-1} = 0
  if (d == 2) {          // f_0 = 1 has valuation 0
    t.star[0] = 1;
    return t;
  }

  std::vector<BigInt> pair(static_cast<std::size_t>(l));
  for (int j = 0; j < l; ++j) pair[static_cast<std::size_t>(j)] = M2_star(p, l, j);

  std::vector<BigInt> cur;
  int copies = 0;
  if (spec.odd()) {
    cur.resize(static_cast<std::size_t>(l));
    for (int j = 0; j < l; ++j) cur[static_cast<std::size_t>(j)] = P(p, l - j - 1) * (p - 1);
    copies = spec.k() - 1;
  } else {
    cur = pair;
    copies = spec.k() - 2;
  }
  for (int c = 0; c < copies; ++c) cur = truncated_convolution(cur, pair);

  t.star = std::move(cur);
  BigInt sum = 0;
  for (const auto& s : t.star) sum += s;
  t.top = P(p, static_cast<long>(d - 2) * l) - sum;
  return t;
}

BigRational mstar_top_bound(const FormSpec& spec, std::int64_t p, int l) {
  const int k = spec.k();
  const long e_l = spec.odd() ? 2L * k - 1 : 2L * k - 2;
  const long e_p = spec.odd() ? (2L * k * l - 2L * l) : (2L * k * l - 3L * l);
  BigRational lp(big_pow(l + 1, std::max<long>(e_l, 0)));
  if (e_l < 0) lp = BigRational(1, static_cast<unsigned long>(l + 1));
  BigRational pp = e_p >= 0 ? BigRational(P(p, e_p)) : BigRational(BigInt(1), P(p, -e_p));
  BigRational r = lp * pp;
  r.canonicalize();
  return r;
}

BigInt S1_prime_power_bound(const FormSpec& spec, std::int64_t p, int l) {
  const int d = spec.d();
  return P(p, static_cast<long>(l) * (d - 1)) * big_pow(l + 1, d - 1);
}

BigInt S1_prime_power(const FormSpec& spec, std::int64_t p, int l) {
  require_prime(p);
  if (p == 2) throw InputError("S1_prime_power: p = 2 must use the direct a-sum");
  if (spec.d() == 1) return 0;
  if (spec.d() == 2) return gauss_product_odd(p, l, 0);
  const MStarTable t = mstar_chain(spec, p, l);
  BigInt s = P(p, 2L * l) * t.top;
  for (int j = 0; j < l; ++j) s += t.star[static_cast<std::size_t>(j)] * gauss_product_odd(p, l, j);
  return s;
}

std::pair<BigInt, BigInt> S1_table_route_p2(const FormSpec& spec, int l) {
  const MStarTable t = mstar_chain(spec, 2, l);
  BigInt re = P(2, 2L * l) * t.top;
  BigInt im = 0;
  for (int j = 0; j + 2 <= l; ++j) im += t.star[static_cast<std::size_t>(j)] * 2 * P(2, l + j);
  return {re, im};
}

BigInt T_prime_power(const FormSpec& spec, std::int64_t p, int l) {
  require_prime(p);
  if (l < 1) throw InputError("T_prime_power: level must be >= 1");
  const int d = spec.d();
  auto ceil_div = [](long a, long b) { return (a + b - 1) / b; };
  // T = p^l #{x : p^l | x^d} - p^{l-1} #{x : p^{l-1} | x^d}
  return P(p, 2L * l - ceil_div(l, d)) - P(p, 2L * l - 1 - ceil_div(l - 1, d));
}

// ---------------------------------------------------------------------------
// S(p^l)
// ---------------------------------------------------------------------------

BigRational S_local_exact(const FormSpec& spec, std::int64_t p, int l) {
  const BigInt s1 = S1_prime_power(spec, p, l);
  BigRational r(s1 * s1 * T_prime_power(spec, p, l), P(p, static_cast<long>(2 * spec.d() + 1) * l));
  r.canonicalize();
  return r;
}

double S_local_p2_direct(const FormSpec& spec, int l, const ExpsumBudget& budget) {
  if (l < 1) throw InputError("S_local: level must be >= 1");
  if (l > 62) throw CapacityError("S_local: 2^l exceeds 64-bit range");
  const std::int64_t q = std::int64_t{1} << l;
  if (q > budget.max_modulus) {
    throw CapacityError("S_local: modulus 2^" + std::to_string(l) + " exceeds residue budget " +
                        std::to_string(budget.max_modulus));
  }
  const Complex v = S_normalized_definitional(q, spec, budget);
  if (std::fabs(v.imag()) > 1e-9) {
    throw AnomalyError("S(2^" + std::to_string(l) + ") has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

double S_local(const FormSpec& spec, std::int64_t p, int l, const ExpsumBudget& budget) {
  require_prime(p);
  if (p == 2) return S_local_p2_direct(spec, l, budget);
  return to_double(S_local_exact(spec, p, l));
}

double S_local_p2_table_route(const FormSpec& spec, int l) {
  const auto [re, im] = S1_table_route_p2(spec, l);
  const double scale = std::pow(2.0, -static_cast<double>(spec.d()) * l);
  const Complex s1(re.get_d() * scale, im.get_d() * scale);
  const double t = T_prime_power(spec, 2, l).get_d() * std::pow(2.0, -static_cast<double>(l));
  return (s1 * s1 * t).real();
}

BigRational local_density_oracle(const FormSpec& spec, std::int64_t p, int L, const ExpsumBudget& budget) {
  require_prime(p);
  if (L < 1) throw InputError("local_density_oracle: level must be >= 1");
  i128 q128 = 0;
  if (!checked_pow(p, L, q128) || q128 > budget.max_modulus) {
    throw CapacityError("local density modulus p^L exceeds residue budget");
  }
  const auto q = static_cast<std::int64_t>(q128);
  i128 bound = 0;
  if (!checked_pow(q, 2 * spec.d(), bound) || bound > (static_cast<i128>(1) << 125)) {
    throw CapacityError("local density counts q^(2d) exceed 125 bits");
  }
  const ResidueCounts n = fd_residue_counts(spec.d(), q, budget);

  // Distribution of f_d(first) + f_d(second) mod q.
  std::vector<std::int64_t> support;
  for (std::int64_t u = 0; u < q; ++u) {
    if (n.counts[static_cast<std::size_t>(u)] != 0) support.push_back(u);
  }
  std::vector<i128> sum_dist(static_cast<std::size_t>(q), 0);
  for (std::int64_t u : support) {
    for (std::int64_t v : support) {
      std::int64_t w = u + v;
      if (w >= q) w -= q;
      sum_dist[static_cast<std::size_t>(w)] += n.counts[static_cast<std::size_t>(u)] * n.counts[static_cast<std::size_t>(v)];
    }
  }
  std::vector<std::int64_t> power_count(static_cast<std::size_t>(q), 0);
  for (std::int64_t x = 0; x < q; ++x) {
    power_count[pow_mod(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(spec.d()),
                        static_cast<std::uint64_t>(q))] += 1;
  }
  BigInt solutions = 0;
  for (std::int64_t w = 0; w < q; ++w) {
    const std::int64_t c = power_count[static_cast<std::size_t>(w)];
    if (c == 0) continue;
    solutions += big_from_i128(sum_dist[static_cast<std::size_t>(w)]) * c;
  }
  BigRational r(solutions, P(q, 2L * spec.d()));
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Singular series
// ---------------------------------------------------------------------------

LocalFactor local_factor(const FormSpec& spec, std::int64_t p, const SeriesConfig& config) {
  require_prime(p);
  const int d = spec.d();
  LocalFactor f;
  f.p = p;
  const double ratio = std::pow(static_cast<double>(p), -(1.0 + 1.0 / d));
  const int cap = p == 2 ? config.max_level_p2 : config.max_level;
  // Below d+1 levels a vanishing T(p^l) can hide later nonzero terms.
  const int floor_level = p == 2 ? config.min_level : std::max(config.min_level, d + 1);
  BigRational exact_sigma = 1;

  for (int l = 1; l <= cap; ++l) {
    if (p == 2) {
      if ((std::int64_t{1} << l) > config.budget.max_modulus) break;
      f.terms.push_back(S_local_p2_direct(spec, l, config.budget));
      f.table_route_terms.push_back(S_local_p2_table_route(spec, l));
    } else {
      f.exact_terms.push_back(S_local_exact(spec, p, l));
      exact_sigma += f.exact_terms.back();
      f.terms.push_back(to_double(f.exact_terms.back()));
    }
    f.L = l;
    f.C = std::max(f.C, abs_pow_scale(f.terms.back(), p, l, d));
    f.tail = f.C * std::pow(ratio, l + 1) / (1.0 - ratio);
    if (l >= floor_level && f.tail < config.tol) break;
  }
  f.level_capped = f.tail >= config.tol;
  if (p == 2) {
    f.sigma = 1.0;
    for (double t : f.terms) f.sigma += t;
  } else {
    f.sigma = to_double(exact_sigma);
  }
  return f;
}

namespace {

// sum_{p > B} p^{-s}: explicit primes up to X, then the integral bound beyond.
double prime_tail_sum(std::int64_t B, double s) {
  const std::int64_t X = std::max<std::int64_t>(B * 100, 100'000);
  double sum = 0.0;
  for (std::int64_t p : primes_up_to(X)) {
    if (p > B) sum += std::pow(static_cast<double>(p), -s);
  }
  const double x = static_cast<double>(X);
  return sum + std::pow(x, 1.0 - s) / ((s - 1.0) * std::log(x));
}

}  // namespace

SeriesEstimate singular_series(const FormSpec& spec, const SeriesConfig& config) {
  if (config.prime_bound < 2) throw InputError("prime_bound must be >= 2");
  if (!(config.tol > 0.0)) throw InputError("tol must be positive");
  SeriesEstimate est;
  est.mode = SeriesMode::euler;
  est.prime_bound = config.prime_bound;
  if (spec.d() == 1) {  // every S(q) with q > 1 vanishes
    est.value = 1.0;
    return est;
  }

  const auto primes = primes_up_to(config.prime_bound);
  std::vector<LocalFactor> factors(primes.size());
  std::vector<std::exception_ptr> errors(primes.size());
  const auto np = static_cast<std::int64_t>(primes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < np; ++i) {
    try {
      factors[static_cast<std::size_t>(i)] = local_factor(spec, primes[static_cast<std::size_t>(i)], config);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  double value = 1.0;
  double rel_tail = 0.0;
  for (const auto& f : factors) {
    if (!(f.sigma > 0.0)) {
      throw AnomalyError("local factor sigma_" + std::to_string(f.p) + " = " + std::to_string(f.sigma) +
                         " is not positive");
    }
    value *= f.sigma;
    rel_tail += f.tail / f.sigma;
    est.C = std::max(est.C, f.C);
  }
  rel_tail += 2.0 * est.C * prime_tail_sum(config.prime_bound, 1.0 + 1.0 / spec.d());
  est.value = value;
  est.tail_bound = value * rel_tail;
  est.factors = std::move(factors);
  return est;
}

double S_multiplicative(const FormSpec& spec, std::int64_t q, const ExpsumBudget& budget) {
  double s = 1.0;
  for (auto [p, e] : factorize(q)) s *= S_local(spec, p, e, budget);
  return s;
}

SeriesEstimate singular_series_partial(const FormSpec& spec, std::int64_t Q, const SeriesConfig& config) {
  if (Q < 1) throw InputError("partial sum bound Q must be >= 1");
  SeriesEstimate est;
  est.mode = SeriesMode::partial_sum;
  est.prime_bound = Q;
  const int d = spec.d();

  // Cache S(p^l) for every prime power up to Q.
  std::vector<double> local(static_cast<std::size_t>(Q) + 1, 0.0);
  for (std::int64_t p : primes_up_to(Q)) {
    std::int64_t pl = p;
    for (int l = 1; pl <= Q; ++l) {
      local[static_cast<std::size_t>(pl)] = S_local(spec, p, l, config.budget);
      if (pl > Q / p) break;
      pl *= p;
    }
  }
  double sum = 1.0;
  for (std::int64_t q = 2; q <= Q; ++q) {
    double s = 1.0;
    for (auto [p, e] : factorize(q)) {
      std::int64_t pe = 1;
      for (int i = 0; i < e; ++i) pe *= p;
      s *= local[static_cast<std::size_t>(pe)];
    }
    sum += s;
    est.C = std::max(est.C, std::fabs(s) * std::pow(static_cast<double>(q), 1.0 + 1.0 / d));
  }
  est.value = sum;
  est.tail_bound = est.C * d * std::pow(static_cast<double>(Q), -1.0 / d);
  return est;
}

}  // namespace cz
