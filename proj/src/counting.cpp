#include "cz/counting.hpp"

#include "cz/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>

namespace cz {

// ---------------------------------------------------------------------------
// Containers
// ---------------------------------------------------------------------------

std::uint64_t SparseCounts::at(std::uint64_t key) const {
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) return 0;
  return counts[static_cast<std::size_t>(it - keys.begin())];
}

u128 SparseCounts::total() const {
  u128 t = 0;
  for (auto c : counts) t += c;
  return t;
}

bool CountTable::complete() const {
  return BigInt(static_cast<unsigned long>(limit)) >= FormSpec(d).fd_max(P);
}

u128 CountTable::total() const {
  u128 t = 0;
  for (auto v : values) t += v;
  return t;
}

// ---------------------------------------------------------------------------
// Helpers shared with the serial reference
// ---------------------------------------------------------------------------

namespace detail {

std::uint64_t checked_table_limit(const FormSpec& spec, std::int64_t P, std::uint64_t limit,
                                  const Budget& budget) {
  if (P < 1) throw InputError("box side P must be >= 1");
  const BigInt fmax = spec.fd_max(P);
  if (fmax < limit) limit = fmax.get_ui();
  if (big_pow(P, spec.d()) >= BigInt("18446744073709551616")) {
    throw CapacityError("convolution table entries: P^d exceeds 64-bit counts");
  }
  if (limit >= budget.table_entries) {
    throw CapacityError("convolution table entries: need " + std::to_string(limit + 1) +
                        ", budget " + std::to_string(budget.table_entries));
  }
  return limit;
}

std::vector<std::uint64_t> power_targets(const FormSpec& spec, std::int64_t P) {
  std::vector<std::uint64_t> t(static_cast<std::size_t>(P) + 1, 0);
  for (std::int64_t x = 1; x <= P; ++x) {
    i128 v = 0;
    if (!checked_pow(x, spec.d(), v) || v > static_cast<i128>(std::numeric_limits<std::uint64_t>::max())) {
      throw CapacityError("convolution table entries: P^d exceeds 64-bit range");
    }
    t[static_cast<std::size_t>(x)] = static_cast<std::uint64_t>(v);
  }
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// r2 over the box
// ---------------------------------------------------------------------------

SparseCounts r2_box(std::int64_t P) {
  if (P < 1) throw InputError("box side P must be >= 1");
  const auto n = static_cast<std::uint64_t>(P);
  std::vector<std::uint64_t> dense(2 * n * n + 1, 0);
  for (std::uint64_t s = 1; s <= n; ++s) {
    for (std::uint64_t t = 1; t <= n; ++t) ++dense[s * s + t * t];
  }
  SparseCounts out;
  for (std::uint64_t m = 0; m < dense.size(); ++m) {
    if (dense[m] == 0) continue;
    out.keys.push_back(m);
    out.counts.push_back(dense[m]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Representation counts (OpenMP)
// ---------------------------------------------------------------------------

namespace {

// out[m*n] += cur[m] * r2[n] for all m*n <= limit. Integer addition is
// associative, so atomic scatter gives identical tables for any thread count.
std::vector<std::uint64_t> dirichlet_step(const std::vector<std::uint64_t>& cur,
                                          const SparseCounts& r2, std::uint64_t limit) {
  std::vector<std::uint64_t> out(limit + 1, 0);
  const std::uint64_t min_key = r2.keys.empty() ? limit + 1 : r2.keys.front();
  const auto m_max = static_cast<std::int64_t>(limit / std::max<std::uint64_t>(min_key, 1));
  const std::size_t nk = r2.keys.size();
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t m = 1; m <= m_max; ++m) {
    const std::uint64_t cm = cur[static_cast<std::size_t>(m)];
    if (cm == 0) continue;
    const std::uint64_t bound = limit / static_cast<std::uint64_t>(m);
    for (std::size_t i = 0; i < nk && r2.keys[i] <= bound; ++i) {
      const std::uint64_t add = cm * r2.counts[i];
#pragma omp atomic
      out[static_cast<std::size_t>(m) * r2.keys[i]] += add;
    }
  }
  return out;
}

}  // namespace

CountTable rep_counts_upto(const FormSpec& spec, std::int64_t P, std::uint64_t limit,
                           const Budget& budget) {
  limit = detail::checked_table_limit(spec, P, limit, budget);
  CountTable table{spec.d(), P, limit, {}};
  const auto n = static_cast<std::uint64_t>(P);

  std::vector<std::uint64_t> cur(limit + 1, 0);
  int steps = 0;
  if (spec.odd()) {
    for (std::uint64_t x = 1; x <= std::min(n, limit); ++x) cur[x] = 1;
    steps = spec.k();
  } else {
    const SparseCounts r2 = r2_box(P);
    for (std::size_t i = 0; i < r2.keys.size() && r2.keys[i] <= limit; ++i) {
      cur[r2.keys[i]] = r2.counts[i];
    }
    steps = spec.k() - 1;
  }
  if (steps > 0) {
    const SparseCounts r2 = r2_box(P);
    for (int s = 0; s < steps; ++s) cur = dirichlet_step(cur, r2, limit);
  }
  table.values = std::move(cur);
  return table;
}

CountTable rep_counts(const FormSpec& spec, std::int64_t P, const Budget& budget) {
  const BigInt fmax = spec.fd_max(P);
  if (fmax >= BigInt(static_cast<unsigned long>(budget.table_entries))) {
    throw CapacityError("convolution table entries: need " + to_string(fmax + 1) + ", budget " +
                        std::to_string(budget.table_entries));
  }
  return rep_counts_upto(spec, P, fmax.get_ui(), budget);
}

SparseCounts rep_counts_sparse(const FormSpec& spec, std::int64_t P, const Budget& budget) {
  if (P < 1) throw InputError("box side P must be >= 1");
  if (spec.fd_max(P) >= BigInt("18446744073709551616")) {
    throw CapacityError("sparse representation counts: values exceed 64-bit range");
  }
  const SparseCounts r2 = r2_box(P);
  SparseCounts cur;
  int steps = spec.k();
  if (spec.odd()) {
    for (std::int64_t x = 1; x <= P; ++x) {
      cur.keys.push_back(static_cast<std::uint64_t>(x));
      cur.counts.push_back(1);
    }
  } else {
    cur = r2;
    --steps;
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (int s = 0; s < steps; ++s) {
    const u128 n = static_cast<u128>(cur.keys.size()) * r2.keys.size();
    if (n > budget.table_entries) {
      throw CapacityError("sparse representation counts: " + to_string(n) + " products exceed budget " +
                          std::to_string(budget.table_entries));
    }
    pairs.clear();
    pairs.reserve(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < cur.keys.size(); ++i) {
      for (std::size_t j = 0; j < r2.keys.size(); ++j) {
        pairs.emplace_back(cur.keys[i] * r2.keys[j], cur.counts[i] * r2.counts[j]);
      }
    }
    std::sort(pairs.begin(), pairs.end());
    SparseCounts next;
    for (const auto& [k, c] : pairs) {
      if (!next.keys.empty() && next.keys.back() == k) {
        next.counts.back() += c;
      } else {
        next.keys.push_back(k);
        next.counts.push_back(c);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Zero counts
// ---------------------------------------------------------------------------

ExactCount count_zeros_from_table(const FormSpec& spec, const CountTable& table) {
  const auto targets = detail::power_targets(spec, table.P);
  if (targets.back() > table.limit) {
    throw InputError("count table truncated below P^d");
  }
  const auto& a = table.values;
  const auto nP = static_cast<std::int64_t>(table.P);
  std::vector<u128> per_t(static_cast<std::size_t>(nP) + 1, 0);
  std::vector<char> overflowed(static_cast<std::size_t>(nP) + 1, 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = nP; t >= 1; --t) {
    const std::uint64_t T = targets[static_cast<std::size_t>(t)];
    u128 s = 0;
    bool bad = false;
    for (std::uint64_t n = 1; 2 * n < T; ++n) {
      const std::uint64_t x = a[n];
      if (x == 0) continue;
      const std::uint64_t y = a[T - n];
      if (y == 0) continue;
      const u128 prod = static_cast<u128>(x) * y * 2;
      bad |= __builtin_add_overflow(s, prod, &s);
    }
    if (T % 2 == 0) {
      const u128 h = a[T / 2];
      bad |= __builtin_add_overflow(s, h * h, &s);
    }
    per_t[static_cast<std::size_t>(t)] = s;
    overflowed[static_cast<std::size_t>(t)] = bad ? 1 : 0;
  }

  if (std::any_of(overflowed.begin(), overflowed.end(), [](char c) { return c != 0; })) {
    // Promote to arbitrary precision and recount the affected targets serially.
    BigInt total = 0;
    for (std::int64_t t = 1; t <= nP; ++t) {
      if (!overflowed[static_cast<std::size_t>(t)]) {
        total += big_from_u128(per_t[static_cast<std::size_t>(t)]);
        continue;
      }
      const std::uint64_t T = targets[static_cast<std::size_t>(t)];
      for (std::uint64_t n = 1; n < T; ++n) {
        total += BigInt(static_cast<unsigned long>(a[n])) * static_cast<unsigned long>(a[T - n]);
      }
    }
    return total;
  }

  u128 total = 0;
  for (std::int64_t t = 1; t <= nP; ++t) {
    if (__builtin_add_overflow(total, per_t[static_cast<std::size_t>(t)], &total)) {
      BigInt big = 0;
      for (std::int64_t u = 1; u <= nP; ++u) big += big_from_u128(per_t[static_cast<std::size_t>(u)]);
      return big;
    }
  }
  return big_from_u128(total);
}

ExactCount count_zeros_convolution(const FormSpec& spec, std::int64_t P, const Budget& budget) {
  const auto targets = detail::power_targets(spec, P);
  const CountTable table = rep_counts_upto(spec, P, targets.back(), budget);
  return count_zeros_from_table(spec, table);
}

ExactCount count_zeros_bruteforce(const FormSpec& spec, std::int64_t P, const Budget& budget) {
  if (P < 1) throw InputError("box side P must be >= 1");
  const int d = spec.d();
  if (big_pow(P, spec.n_vars()) > BigInt(static_cast<unsigned long>(budget.bruteforce_points))) {
    throw CapacityError("bruteforce point evaluations: P^(2d+1) = " +
                        to_string(big_pow(P, spec.n_vars())) + " exceeds budget " +
                        std::to_string(budget.bruteforce_points));
  }
  if (spec.fd_max(P) * 2 >= BigInt("4611686018427387904")) {
    throw CapacityError("bruteforce point evaluations: values exceed 64-bit range");
  }

  // f_d on every point of [1,P]^d, in odometer order.
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
  std::vector<std::int64_t> last(static_cast<std::size_t>(P) + 1, 0);
  for (std::int64_t t = 1; t <= P; ++t) {
    i128 v = 0;
    checked_pow(t, d, v);
    last[static_cast<std::size_t>(t)] = static_cast<std::int64_t>(v);
  }

  std::vector<std::uint64_t> per_i(half, 0);
  const auto nh = static_cast<std::int64_t>(half);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < nh; ++i) {
    std::uint64_t c = 0;
    const std::int64_t vi = values[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < half; ++j) {
      const std::int64_t s = vi + values[j];
      for (std::int64_t t = 1; t <= P; ++t) c += (s == last[static_cast<std::size_t>(t)]);
    }
    per_i[static_cast<std::size_t>(i)] = c;
  }
  u128 total = 0;
  for (auto c : per_i) total += c;
  return big_from_u128(total);
}

ExactCount count_zeros_exact(const FormSpec& spec, std::int64_t P, CountMethod method,
                             const Budget& budget) {
  return method == CountMethod::bruteforce ? count_zeros_bruteforce(spec, P, budget)
                                           : count_zeros_convolution(spec, P, budget);
}

ExactCount second_moment_F1(const FormSpec& spec, std::int64_t P, const Budget& budget) {
  const CountTable table = rep_counts(spec, P, budget);
  u128 s = 0;
  bool bad = false;
  for (auto v : table.values) {
    const u128 v2 = static_cast<u128>(v) * v;
    bad |= __builtin_add_overflow(s, v2, &s);
  }
  if (!bad) return big_from_u128(s);
  BigInt big = 0;
  for (auto v : table.values) big += BigInt(static_cast<unsigned long>(v)) * static_cast<unsigned long>(v);
  return big;
}

// ---------------------------------------------------------------------------
// Degenerate zeros over the signed box
// ---------------------------------------------------------------------------

ExactCount fd_zero_count_signed(const FormSpec& spec, std::int64_t P) {
  if (P < 1) throw InputError("box side P must be >= 1");
  const BigInt side = 2 * P + 1;
  BigInt pair_all;
  mpz_pow_ui(pair_all.get_mpz_t(), side.get_mpz_t(), 2);
  const BigInt pair_nonzero = pair_all - 1;
  BigInt none_vanish;
  mpz_pow_ui(none_vanish.get_mpz_t(), pair_nonzero.get_mpz_t(), static_cast<unsigned long>(spec.k()));
  if (spec.odd()) none_vanish *= 2 * P;
  BigInt all;
  mpz_pow_ui(all.get_mpz_t(), side.get_mpz_t(), static_cast<unsigned long>(spec.d()));
  return all - none_vanish;
}

ExactCount count_degenerate_zeros(const FormSpec& spec, std::int64_t P) {
  const BigInt z = fd_zero_count_signed(spec, P);
  return z * z;
}

}  // namespace cz
