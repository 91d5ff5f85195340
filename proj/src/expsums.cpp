#include "cz/expsums.hpp"

#include "cz/errors.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace cz {

// ---------------------------------------------------------------------------
// Phases
// ---------------------------------------------------------------------------

Complex unit_phase(long double theta) {
  theta -= std::floor(theta);
  const long double angle = 2.0L * std::numbers::pi_v<long double> * theta;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

PhaseTable::PhaseTable(std::int64_t q) : q_(q), table_(static_cast<std::size_t>(q)) {
  if (q < 1) throw InputError("modulus must be >= 1");
  for (std::int64_t r = 0; r < q; ++r) {
    table_[static_cast<std::size_t>(r)] =
        unit_phase(static_cast<long double>(r) / static_cast<long double>(q));
  }
}

// ---------------------------------------------------------------------------
// Generating functions
// ---------------------------------------------------------------------------

Complex F1_from_table(const CountTable& table, double alpha) {
  const long double a = alpha;
  Complex sum = 0.0;
  for (std::size_t n = 0; n < table.values.size(); ++n) {
    if (table.values[n] == 0) continue;
    sum += static_cast<double>(table.values[n]) * unit_phase(a * static_cast<long double>(n));
  }
  return sum;
}

Complex F1(const FormSpec& spec, std::int64_t P, double alpha, const Budget& budget) {
  return F1_from_table(rep_counts(spec, P, budget), alpha);
}

Complex F2(const FormSpec& spec, std::int64_t P, double alpha) {
  if (P < 1) throw InputError("box side P must be >= 1");
  const long double a = alpha;
  Complex sum = 0.0;
  for (std::int64_t x = 1; x <= P; ++x) {
    i128 xd = 0;
    if (!checked_pow(x, spec.d(), xd)) throw CapacityError("F2: x^d exceeds 127 bits");
    const long double theta = a * static_cast<long double>(xd);
    sum += unit_phase(-theta);
  }
  return sum;
}

Complex F(const FormSpec& spec, std::int64_t P, double alpha, const Budget& budget) {
  const Complex f1 = F1(spec, P, alpha, budget);
  return f1 * f1 * F2(spec, P, alpha);
}

Complex F_direct(const FormSpec& spec, std::int64_t P, double alpha, const Budget& budget) {
  if (P < 1) throw InputError("box side P must be >= 1");
  const int d = spec.d();
  if (big_pow(P, spec.n_vars()) > BigInt(static_cast<unsigned long>(budget.bruteforce_points))) {
    throw CapacityError("bruteforce point evaluations: P^(2d+1) exceeds budget");
  }
  const auto half = static_cast<std::size_t>(big_pow(P, d).get_ui());
  std::vector<std::int64_t> values(half);
  std::vector<std::int64_t> x(static_cast<std::size_t>(d), 1);
  for (std::size_t idx = 0; idx < half; ++idx) {
    values[idx] = eval_fd<std::int64_t>(spec, std::span<const std::int64_t>(x));
    for (int c = d - 1; c >= 0; --c) {
      auto& xc = x[static_cast<std::size_t>(c)];
      if (++xc <= P) break;
      xc = 1;
    }
  }
  const long double a = alpha;
  Complex sum = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    for (std::size_t j = 0; j < half; ++j) {
      for (std::int64_t t = 1; t <= P; ++t) {
        i128 td = 0;
        checked_pow(t, d, td);
        const auto f = static_cast<long double>(values[i] + values[j] - static_cast<std::int64_t>(td));
        sum += unit_phase(a * f);
      }
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Complete sums
// ---------------------------------------------------------------------------

namespace {

void require_coprime(std::int64_t q, std::int64_t a) {
  if (q < 1) throw InputError("modulus must be >= 1");
  if (gcd64(a, q) != 1) {
    throw InputError("gcd(a, q) must be 1, got a=" + std::to_string(a) + " q=" + std::to_string(q));
  }
}

std::int64_t mod_q(std::int64_t a, std::int64_t q) { return ((a % q) + q) % q; }

}  // namespace

std::vector<Complex> S1_all(std::int64_t q, const FormSpec& spec, const ExpsumBudget& budget) {
  const auto counts = cached_residue_counts(spec.d(), q, budget);
  const PhaseTable phase(q);
  std::vector<std::int64_t> support;
  std::vector<double> weight;
  for (std::int64_t u = 0; u < q; ++u) {
    const i128 c = counts->counts[static_cast<std::size_t>(u)];
    if (c == 0) continue;
    support.push_back(u);
    weight.push_back(static_cast<double>(c));
  }
  std::vector<Complex> out(static_cast<std::size_t>(q));
#pragma omp parallel for schedule(static)
  for (std::int64_t a = 0; a < q; ++a) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const auto r = static_cast<std::int64_t>(static_cast<u128>(a) * static_cast<u128>(support[i]) %
                                               static_cast<u128>(q));
      s += weight[i] * phase[r];
    }
    out[static_cast<std::size_t>(a)] = s;
  }
  return out;
}

std::vector<Complex> S2_all(std::int64_t q, const FormSpec& spec, const ExpsumBudget& budget) {
  if (q < 1) throw InputError("modulus must be >= 1");
  if (q > budget.max_modulus) throw CapacityError("S2 modulus exceeds budget");
  const PhaseTable phase(q);
  std::vector<std::int64_t> powers(static_cast<std::size_t>(q));
  for (std::int64_t x = 0; x < q; ++x) {
    powers[static_cast<std::size_t>(x)] = static_cast<std::int64_t>(
        pow_mod(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(spec.d()), static_cast<std::uint64_t>(q)));
  }
  std::vector<Complex> out(static_cast<std::size_t>(q));
#pragma omp parallel for schedule(static)
  for (std::int64_t a = 0; a < q; ++a) {
    Complex s = 0.0;
    for (std::int64_t x = 0; x < q; ++x) {
      const auto r = static_cast<std::int64_t>(static_cast<u128>(a) *
                                               static_cast<u128>(powers[static_cast<std::size_t>(x)]) %
                                               static_cast<u128>(q));
      s += phase[r == 0 ? 0 : q - r];
    }
    out[static_cast<std::size_t>(a)] = s;
  }
  return out;
}

Complex S1(std::int64_t q, std::int64_t a, const FormSpec& spec, const ExpsumBudget& budget) {
  require_coprime(q, a);
  const auto counts = cached_residue_counts(spec.d(), q, budget);
  const PhaseTable phase(q);
  const std::int64_t am = mod_q(a, q);
  Complex s = 0.0;
  for (std::int64_t u = 0; u < q; ++u) {
    const i128 c = counts->counts[static_cast<std::size_t>(u)];
    if (c == 0) continue;
    s += static_cast<double>(c) *
         phase[static_cast<std::int64_t>(static_cast<u128>(am) * static_cast<u128>(u) % static_cast<u128>(q))];
  }
  return s;
}

Complex S2(std::int64_t q, std::int64_t a, const FormSpec& spec, const ExpsumBudget& budget) {
  require_coprime(q, a);
  if (q > budget.max_modulus) throw CapacityError("S2 modulus exceeds budget");
  const PhaseTable phase(q);
  const std::int64_t am = mod_q(a, q);
  Complex s = 0.0;
  for (std::int64_t x = 1; x <= q; ++x) {
    const auto xd = pow_mod(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(spec.d()),
                            static_cast<std::uint64_t>(q));
    const auto r = static_cast<std::int64_t>(static_cast<u128>(am) * xd % static_cast<u128>(q));
    s += phase[r == 0 ? 0 : q - r];
  }
  return s;
}

Complex S(std::int64_t q, std::int64_t a, const FormSpec& spec, const ExpsumBudget& budget) {
  const Complex s1 = S1(q, a, spec, budget);
  return s1 * s1 * S2(q, a, spec, budget);
}

Complex S_normalized_definitional(std::int64_t q, const FormSpec& spec, const ExpsumBudget& budget) {
  const auto s1 = S1_all(q, spec, budget);
  const auto s2 = S2_all(q, spec, budget);
  const double qd = std::pow(static_cast<double>(q), spec.d());
  Complex sum = 0.0;
  for (std::int64_t a = 1; a <= q; ++a) {
    const std::int64_t am = a % q;
    if (gcd64(a, q) != 1) continue;
    const Complex n1 = s1[static_cast<std::size_t>(am)] / qd;
    sum += n1 * n1 * s2[static_cast<std::size_t>(am)];
  }
  return sum / static_cast<double>(q);
}

BigInt T(std::int64_t q, const FormSpec& spec) {
  if (q < 1) throw InputError("modulus must be >= 1");
  const auto divs = divisors(q);
  std::map<std::int64_t, std::int64_t> ramanujan;  // gcd(n, q) -> c_q(n)
  for (std::int64_t g : divs) {
    std::int64_t c = 0;
    for (std::int64_t e : divs) {
      if (g % e == 0) c += mobius(q / e) * e;
    }
    ramanujan[g] = c;
  }
  BigInt total = 0;
  std::int64_t acc = 0;
  for (std::int64_t x = 0; x < q; ++x) {
    const auto n = static_cast<std::int64_t>(
        pow_mod(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(spec.d()), static_cast<std::uint64_t>(q)));
    acc += ramanujan[gcd64(n, q)];
    if (acc > (1LL << 60) || acc < -(1LL << 60)) {
      total += static_cast<long>(acc);
      acc = 0;
    }
  }
  total += static_cast<long>(acc);
  return total;
}

Complex gauss_product(std::int64_t p, int l, int j) {
  if (!is_prime(p)) throw InputError("gauss_product: p must be prime");
  if (l < 0 || j < 0 || j > l) throw InputError("gauss_product: need 0 <= j <= l");
  if (j == l) return {std::pow(static_cast<double>(p), 2.0 * l), 0.0};
  const double mag = std::pow(static_cast<double>(p), static_cast<double>(l + j));
  if (p == 2) {
    if (j == l - 1) return {0.0, 0.0};
    return {0.0, 2.0 * mag};
  }
  if (p % 4 == 1) return {mag, 0.0};
  return {((l + j) % 2 == 0) ? mag : -mag, 0.0};
}

// ---------------------------------------------------------------------------
// Arcs
// ---------------------------------------------------------------------------

RationalApprox dirichlet_approx(double alpha, std::int64_t Q) {
  if (Q < 1) throw InputError("dirichlet_approx: Q must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("dirichlet_approx: alpha must lie in (0,1]");
  // Convergents h_n / k_n of the continued fraction of alpha.
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(alpha));
  std::int64_t k_prev = 0, k = 1;
  long double x = static_cast<long double>(alpha) - std::floor(static_cast<long double>(alpha));
  for (int iter = 0; iter < 64 && x > 1e-15L; ++iter) {
    const long double inv = 1.0L / x;
    const auto digit = static_cast<std::int64_t>(std::floor(inv));
    if (digit > Q) break;
    const std::int64_t k_next = digit * k + k_prev;
    if (k_next > Q) break;
    const std::int64_t h_next = digit * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    x = inv - static_cast<long double>(digit);
  }
  return {h, k, std::fabs(alpha - static_cast<double>(h) / static_cast<double>(k))};
}

double default_delta(int d) {
  const double t = std::ldexp(1.0, d - 1);
  return t / (1.0 + 5.0 * t);
}

ArcClass classify_arc(const FormSpec& spec, double alpha, std::int64_t P, double delta) {
  if (P < 1) throw InputError("box side P must be >= 1");
  if (!(delta > 0.0 && delta < spec.d())) throw InputError("classify_arc: need 0 < delta < d");
  const double width = std::pow(static_cast<double>(P), delta - spec.d());
  if (!(alpha > width && alpha <= 1.0 + width)) {
    throw InputError("classify_arc: alpha outside (P^(delta-d), 1 + P^(delta-d)]");
  }
  const auto qmax = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(P), delta) + 1e-9));
  for (std::int64_t q = 1; q <= qmax; ++q) {
    const auto centre = static_cast<std::int64_t>(std::llround(alpha * static_cast<double>(q)));
    for (std::int64_t a = centre - 1; a <= centre + 1; ++a) {
      if (a < 1 || a > q || gcd64(a, q) != 1) continue;
      if (std::fabs(alpha - static_cast<double>(a) / static_cast<double>(q)) <= width) {
        return {true, q, a};
      }
    }
  }
  return {};
}

double weyl_envelope(double P, int d, double delta) {
  return std::pow(P, 1.0 - delta / std::ldexp(1.0, d - 1));
}

}  // namespace cz
